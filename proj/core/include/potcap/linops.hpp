#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "potcap/error.hpp"

namespace potcap {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kTolHerm = 1e-8;
inline constexpr double kTolTrace = 1e-8;
inline constexpr double kTolNorm = 1e-8;
// Eigenvalues in [-kEigClip, 0) are numerical noise and get clipped to zero;
// anything more negative is a genuine PSD violation.
inline constexpr double kEigClip = 1e-10;

/// Ordered subsystem labels with their dimensions. Order is significant:
/// the first label is the most significant tensor factor.
class SystemDims {
 public:
  SystemDims() = default;
  SystemDims(std::vector<std::string> labels, std::vector<int> dims);

  static SystemDims single(std::string label, int dim);

  int total() const;
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& dims() const { return dims_; }

  bool contains(std::string_view label) const;
  std::size_t index_of(std::string_view label) const;
  int dim(std::string_view label) const;

  /// Labels of `this` followed by labels of `other`; duplicates are an error.
  SystemDims concat(const SystemDims& other) const;
  /// Keeps the given labels in their original order.
  SystemDims subset(const std::vector<std::string>& keep) const;
  SystemDims relabeled(const std::vector<std::string>& labels) const;

  bool operator==(const SystemDims&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<int> dims_;
};

/// Hermitian, PSD, unit-trace operator on a labeled composite system.
/// Validated on construction; immutable afterwards.
class DensityMatrix {
 public:
  DensityMatrix(Matrix matrix, SystemDims dims);

  const Matrix& matrix() const { return matrix_; }
  const SystemDims& dims() const { return dims_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

  DensityMatrix relabeled(const std::vector<std::string>& labels) const;

 private:
  Matrix matrix_;
  SystemDims dims_;
};

class PureState {
 public:
  PureState(Vector vector, SystemDims dims);

  const Vector& vector() const { return vector_; }
  const SystemDims& dims() const { return dims_; }
  DensityMatrix projector() const;

 private:
  Vector vector_;
  SystemDims dims_;
};

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;     // columns
};

HermitianEigen hermitian_eigen(const Matrix& m);

/// Symmetrizes (m + m^dagger) / 2.
Matrix hermitian_part(const Matrix& m);

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Partial trace keeping the subsystems at positions `keep` (any order given,
/// result keeps the original relative order).
Matrix partial_trace(const Matrix& m, std::span<const int> dims,
                     std::vector<std::size_t> keep);
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::string>& keep);

// Bipartite fast paths on a (d_left * d_right)-dimensional operator.
Matrix trace_out_right(const Matrix& m, int d_left, int d_right);
Matrix trace_out_left(const Matrix& m, int d_left, int d_right);

/// Partial transpose of the subsystem at position `which`.
Matrix partial_transpose(const Matrix& m, std::span<const int> dims,
                         std::size_t which);

/// Purification on R (x) original labels with dim R = rank(rho).
PureState purify(const DensityMatrix& rho, std::string reference_label = "R");

/// Columns w_k = sqrt(lambda_k) e_k over the support of a PSD matrix, so that
/// W W^dagger = m. Eigenvalues below `cutoff` are dropped.
Matrix eigen_purification(const Matrix& m, double cutoff = kEigClip);

int numerical_rank(const Matrix& m, double cutoff = kEigClip);

/// Validates a raw matrix as a density matrix; throws InvariantViolation.
void check_density(const Matrix& m, double tol_herm = kTolHerm,
                   double tol_trace = kTolTrace);

bool is_isometry(const Matrix& v, double tol = 1e-8);

Matrix random_gaussian(int rows, int cols, std::uint64_t seed);
DensityMatrix random_density(const SystemDims& dims, std::uint64_t seed);
DensityMatrix random_density(const SystemDims& dims, int rank,
                             std::uint64_t seed);
/// d_out x d_in isometry from orthonormalizing a complex Gaussian matrix.
Matrix random_isometry(int d_in, int d_out, std::uint64_t seed);
Matrix random_unitary(int d, std::uint64_t seed);
PureState random_pure(const SystemDims& dims, std::uint64_t seed);

Matrix maximally_mixed(int d);
Vector basis_vector(int d, int index);
/// sum_i |ii> / sqrt(d) on C^d (x) C^d.
Vector maximally_entangled(int d);

}  // namespace potcap
