#include "potcap/linops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace potcap {

SystemDims::SystemDims(std::vector<std::string> labels, std::vector<int> dims)
    : labels_(std::move(labels)), dims_(std::move(dims)) {
  if (labels_.size() != dims_.size()) {
    throw DimensionError("SystemDims: labels and dims differ in length");
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (dims_[i] < 1) {
      throw DimensionError("SystemDims: dimension of '" + labels_[i] +
                           "' must be positive");
    }
    if (!seen.insert(labels_[i]).second) {
      throw LabelError("SystemDims: duplicate label '" + labels_[i] + "'");
    }
  }
}

SystemDims SystemDims::single(std::string label, int dim) {
  return SystemDims({std::move(label)}, {dim});
}

int SystemDims::total() const {
  return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
}

bool SystemDims::contains(std::string_view label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t SystemDims::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw LabelError("unknown subsystem label '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

int SystemDims::dim(std::string_view label) const {
  return dims_[index_of(label)];
}

SystemDims SystemDims::concat(const SystemDims& other) const {
  auto labels = labels_;
  auto dims = dims_;
  labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
  dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
  return SystemDims(std::move(labels), std::move(dims));
}

SystemDims SystemDims::subset(const std::vector<std::string>& keep) const {
  std::vector<std::string> labels;
  std::vector<int> dims;
  for (const auto& k : keep) index_of(k);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (std::find(keep.begin(), keep.end(), labels_[i]) != keep.end()) {
      labels.push_back(labels_[i]);
      dims.push_back(dims_[i]);
    }
  }
  return SystemDims(std::move(labels), std::move(dims));
}

SystemDims SystemDims::relabeled(const std::vector<std::string>& labels) const {
  if (labels.size() != labels_.size()) {
    throw LabelError("relabel: label count mismatch");
  }
  return SystemDims(labels, dims_);
}

void check_density(const Matrix& m, double tol_herm, double tol_trace) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError("density matrix must be square and non-empty");
  }
  if (!m.allFinite()) throw InvariantViolation("density matrix has non-finite entries");
  const double herm_dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > tol_herm) {
    std::ostringstream os;
    os << "density matrix not Hermitian (deviation " << herm_dev << ")";
    throw InvariantViolation(os.str());
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tol_trace) {
    std::ostringstream os;
    os << "density matrix trace " << tr << " != 1";
    throw InvariantViolation(os.str());
  }
  const double min_eig = hermitian_eigen(m).values(0);
  if (min_eig < -kEigClip) {
    std::ostringstream os;
    os << "density matrix not PSD (min eigenvalue " << min_eig << ")";
    throw InvariantViolation(os.str());
  }
}

DensityMatrix::DensityMatrix(Matrix matrix, SystemDims dims)
    : matrix_(std::move(matrix)), dims_(std::move(dims)) {
  if (dims_.empty()) dims_ = SystemDims::single("A", static_cast<int>(matrix_.rows()));
  if (dims_.total() != matrix_.rows()) {
    throw DimensionError("density matrix size does not match SystemDims");
  }
  check_density(matrix_);
}

DensityMatrix DensityMatrix::relabeled(const std::vector<std::string>& labels) const {
  return DensityMatrix(matrix_, dims_.relabeled(labels));
}

PureState::PureState(Vector vector, SystemDims dims)
    : vector_(std::move(vector)), dims_(std::move(dims)) {
  if (dims_.empty()) dims_ = SystemDims::single("A", static_cast<int>(vector_.size()));
  if (dims_.total() != vector_.size()) {
    throw DimensionError("pure state size does not match SystemDims");
  }
  if (std::abs(vector_.norm() - 1.0) > kTolNorm) {
    throw InvariantViolation("pure state is not normalized");
  }
}

DensityMatrix PureState::projector() const {
  return DensityMatrix(vector_ * vector_.adjoint(), dims_);
}

HermitianEigen hermitian_eigen(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  return {es.eigenvalues(), es.eigenvectors()};
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.matrix(), b.matrix()), a.dims().concat(b.dims()));
}

namespace {

std::vector<int> strides_of(std::span<const int> dims) {
  std::vector<int> strides(dims.size());
  int s = 1;
  for (std::size_t i = dims.size(); i-- > 0;) {
    strides[i] = s;
    s *= dims[i];
  }
  return strides;
}

}  // namespace

Matrix partial_trace(const Matrix& m, std::span<const int> dims,
                     std::vector<std::size_t> keep) {
  const int total = std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
  if (m.rows() != total || m.cols() != total) {
    throw DimensionError("partial_trace: matrix size does not match dims");
  }
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (auto k : keep) {
    if (k >= dims.size()) throw LabelError("partial_trace: subsystem index out of range");
  }
  const auto strides = strides_of(dims);
  std::vector<bool> kept(dims.size(), false);
  for (auto k : keep) kept[k] = true;

  std::vector<int> kept_dims;
  for (auto k : keep) kept_dims.push_back(dims[k]);
  const auto kept_strides = strides_of(kept_dims);
  const int out_dim = std::accumulate(kept_dims.begin(), kept_dims.end(), 1, std::multiplies<>());

  // For each flat index: its kept-part index and its traced-part key.
  std::vector<int> kept_index(total), traced_index(total);
  for (int idx = 0; idx < total; ++idx) {
    int rem = idx, ki = 0, ti = 0, kpos = 0;
    for (std::size_t s = 0; s < dims.size(); ++s) {
      const int digit = rem / strides[s];
      rem %= strides[s];
      if (kept[s]) {
        ki += digit * kept_strides[kpos++];
      } else {
        ti = ti * dims[s] + digit;
      }
    }
    kept_index[idx] = ki;
    traced_index[idx] = ti;
  }
  Matrix out = Matrix::Zero(out_dim, out_dim);
  for (int i = 0; i < total; ++i) {
    for (int j = 0; j < total; ++j) {
      if (traced_index[i] == traced_index[j]) {
        out(kept_index[i], kept_index[j]) += m(i, j);
      }
    }
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::string>& keep) {
  std::vector<std::size_t> positions;
  for (const auto& label : keep) positions.push_back(rho.dims().index_of(label));
  const auto& dims = rho.dims().dims();
  Matrix reduced = partial_trace(rho.matrix(), dims, positions);
  return DensityMatrix(hermitian_part(reduced), rho.dims().subset(keep));
}

Matrix trace_out_right(const Matrix& m, int d_left, int d_right) {
  Matrix out = Matrix::Zero(d_left, d_left);
  for (int a = 0; a < d_left; ++a) {
    for (int b = 0; b < d_left; ++b) {
      cplx acc = 0;
      for (int e = 0; e < d_right; ++e) acc += m(a * d_right + e, b * d_right + e);
      out(a, b) = acc;
    }
  }
  return out;
}

Matrix trace_out_left(const Matrix& m, int d_left, int d_right) {
  Matrix out = Matrix::Zero(d_right, d_right);
  for (int a = 0; a < d_left; ++a) {
    out += m.block(a * d_right, a * d_right, d_right, d_right);
  }
  return out;
}

Matrix partial_transpose(const Matrix& m, std::span<const int> dims,
                         std::size_t which) {
  if (which >= dims.size()) throw LabelError("partial_transpose: index out of range");
  const auto strides = strides_of(dims);
  const int total = static_cast<int>(m.rows());
  const int stride = strides[which];
  const int d = dims[which];
  Matrix out(total, total);
  for (int i = 0; i < total; ++i) {
    const int di = (i / stride) % d;
    for (int j = 0; j < total; ++j) {
      const int dj = (j / stride) % d;
      const int ii = i + (dj - di) * stride;
      const int jj = j + (di - dj) * stride;
      out(ii, jj) = m(i, j);
    }
  }
  return out;
}

Matrix eigen_purification(const Matrix& m, double cutoff) {
  const auto eig = hermitian_eigen(m);
  std::vector<Eigen::Index> support;
  for (Eigen::Index k = eig.values.size(); k-- > 0;) {
    if (eig.values(k) > cutoff) support.push_back(k);
  }
  Matrix w(m.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t c = 0; c < support.size(); ++c) {
    w.col(static_cast<Eigen::Index>(c)) =
        std::sqrt(eig.values(support[c])) * eig.vectors.col(support[c]);
  }
  return w;
}

int numerical_rank(const Matrix& m, double cutoff) {
  const auto eig = hermitian_eigen(m);
  return static_cast<int>((eig.values.array() > cutoff).count());
}

PureState purify(const DensityMatrix& rho, std::string reference_label) {
  const Matrix w = eigen_purification(rho.matrix());
  const int rank = static_cast<int>(w.cols());
  const int d = rho.dim();
  // |psi> = sum_k |k>^R (x) w_k
  Vector psi = Vector::Zero(rank * d);
  for (int k = 0; k < rank; ++k) psi.segment(k * d, d) = w.col(k);
  psi /= psi.norm();
  SystemDims dims = SystemDims::single(std::move(reference_label), rank).concat(rho.dims());
  return PureState(std::move(psi), std::move(dims));
}

bool is_isometry(const Matrix& v, double tol) {
  if (v.rows() < v.cols()) return false;
  const Matrix gram = v.adjoint() * v;
  return (gram - Matrix::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff() <= tol;
}

Matrix random_gaussian(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = cplx(re, im);
    }
  }
  return m;
}

DensityMatrix random_density(const SystemDims& dims, std::uint64_t seed) {
  return random_density(dims, dims.total(), seed);
}

DensityMatrix random_density(const SystemDims& dims, int rank, std::uint64_t seed) {
  const int d = dims.total();
  if (rank < 1 || rank > d) throw DimensionError("random_density: rank out of range");
  const Matrix g = random_gaussian(d, rank, seed);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(hermitian_part(rho), dims);
}

Matrix random_isometry(int d_in, int d_out, std::uint64_t seed) {
  if (d_in < 1 || d_out < d_in) {
    throw DimensionError("random_isometry requires 1 <= d_in <= d_out");
  }
  const Matrix g = random_gaussian(d_out, d_in, seed);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d_out, d_in);
  // Fix the column phases so the distribution is Haar and the output is unique.
  const Matrix r = qr.matrixQR().topRows(d_in).triangularView<Eigen::Upper>();
  for (int j = 0; j < d_in; ++j) {
    const cplx diag = r(j, j);
    if (std::abs(diag) > 0) q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

Matrix random_unitary(int d, std::uint64_t seed) { return random_isometry(d, d, seed); }

PureState random_pure(const SystemDims& dims, std::uint64_t seed) {
  Vector v = random_gaussian(dims.total(), 1, seed).col(0);
  v /= v.norm();
  return PureState(std::move(v), dims);
}

Matrix maximally_mixed(int d) {
  return Matrix::Identity(d, d) / static_cast<double>(d);
}

Vector basis_vector(int d, int index) {
  Vector v = Vector::Zero(d);
  v(index) = 1.0;
  return v;
}

Vector maximally_entangled(int d) {
  Vector v = Vector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

}  // namespace potcap
