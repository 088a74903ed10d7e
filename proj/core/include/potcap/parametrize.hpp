#pragma once

#include <vector>

#include "potcap/linops.hpp"

// Unconstrained real parametrizations of the feasible sets the optimizers
// search (states, ensembles, isometries), with exact gradient pullbacks.
//
// Gradient convention: for f real and a complex matrix argument M, the
// "complex gradient" Gamma satisfies df = Re sum conj(Gamma_ij) dM_ij. Packed
// into the real parameter vector it is (Re Gamma, Im Gamma) entrywise, the
// same layout as the parameters themselves.

namespace potcap {

Matrix unpack_matrix(const RealVector& x, Eigen::Index offset, int rows, int cols);
void pack_matrix(const Matrix& m, RealVector& x, Eigen::Index offset);

/// Ensemble of `count` weighted states on C^dim, element g given by a
/// dim x rank factor M_g: omega_g = M_g M_g^dagger / sum_h ||M_h||_F^2.
/// The omega_g are subnormalized and sum to a density matrix. count = 1 with
/// rank = dim is a single input state; rank = 1 gives pure-state ensembles.
class EnsembleParam {
 public:
  EnsembleParam(int count, int dim, int rank);

  int count() const { return count_; }
  int dim() const { return dim_; }
  int rank() const { return rank_; }
  Eigen::Index size() const { return 2LL * count_ * dim_ * rank_; }

  struct Point {
    std::vector<Matrix> factors;
    std::vector<Matrix> states;  // omega_g
    double total = 0.0;
  };

  Point evaluate(const RealVector& x) const;
  /// grads[g] is the (Hermitian) gradient of f with respect to omega_g.
  RealVector pullback(const Point& p, const std::vector<Matrix>& grads) const;
  /// Factors are zero-padded or truncated to `rank` columns; missing elements
  /// get a tiny multiple of the identity so they can grow during the search.
  RealVector encode(const std::vector<Matrix>& factors) const;

 private:
  int count_, dim_, rank_;
};

/// rows x cols isometry V = Z (Z^dagger Z)^{-1/2} from an unconstrained Z.
class IsometryParam {
 public:
  IsometryParam(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Eigen::Index size() const { return 2LL * rows_ * cols_; }

  struct Point {
    Matrix z;
    Matrix v;
    Matrix inv_sqrt;      // (Z^dagger Z)^{-1/2}
    Matrix gram_vectors;  // eigenvectors of Z^dagger Z
    RealVector gram_values;
  };

  Point evaluate(const RealVector& x) const;
  RealVector pullback(const Point& p, const Matrix& gamma_v) const;
  /// Encodes an isometry (or any full-column-rank matrix) as Z = V, padding
  /// missing rows with small noise-free zeros.
  RealVector encode(const Matrix& v) const;

 private:
  int rows_, cols_;
};

/// Mixed-state decompositions of a PSD operator rho = W W^dagger (W: d x r)
/// into `blocks` parts of rank <= `block_size`: omega_g = W V_g^dagger V_g W^dagger,
/// V_g the g-th block of rows of a (blocks * block_size) x r isometry.
/// block_size = 1 enumerates all pure-state decompositions of that size.
struct DecompositionPoint {
  std::vector<Matrix> states;  // omega_g on C^d
  std::vector<Matrix> factors; // W V_g^dagger, d x block_size
};

DecompositionPoint decompose(const Matrix& w, const Matrix& v, int blocks, int block_size);
/// Gamma_V from gradients with respect to each omega_g.
Matrix decomposition_pullback(const Matrix& w, const Matrix& v, int blocks,
                              int block_size, const std::vector<Matrix>& grads);

}  // namespace potcap
