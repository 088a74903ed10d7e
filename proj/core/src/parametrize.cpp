#include "potcap/parametrize.hpp"

#include <cmath>

namespace potcap {

Matrix unpack_matrix(const RealVector& x, Eigen::Index offset, int rows, int cols) {
  Matrix m(rows, cols);
  Eigen::Index k = offset;
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i, k += 2) m(i, j) = cplx(x(k), x(k + 1));
  }
  return m;
}

void pack_matrix(const Matrix& m, RealVector& x, Eigen::Index offset) {
  Eigen::Index k = offset;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i, k += 2) {
      x(k) = m(i, j).real();
      x(k + 1) = m(i, j).imag();
    }
  }
}

EnsembleParam::EnsembleParam(int count, int dim, int rank)
    : count_(count), dim_(dim), rank_(rank) {
  if (count < 1 || dim < 1 || rank < 1) throw DimensionError("EnsembleParam: bad sizes");
}

EnsembleParam::Point EnsembleParam::evaluate(const RealVector& x) const {
  Point p;
  p.factors.reserve(static_cast<std::size_t>(count_));
  const Eigen::Index block = 2LL * dim_ * rank_;
  for (int g = 0; g < count_; ++g) {
    p.factors.push_back(unpack_matrix(x, g * block, dim_, rank_));
    p.total += p.factors.back().squaredNorm();
  }
  p.states.reserve(p.factors.size());
  for (const auto& m : p.factors) p.states.push_back(m * m.adjoint() / p.total);
  return p;
}

RealVector EnsembleParam::pullback(const Point& p, const std::vector<Matrix>& grads) const {
  double c = 0.0;
  for (int g = 0; g < count_; ++g) {
    c += (grads[static_cast<std::size_t>(g)] * p.states[static_cast<std::size_t>(g)])
             .trace()
             .real();
  }
  RealVector out(size());
  const Eigen::Index block = 2LL * dim_ * rank_;
  for (int g = 0; g < count_; ++g) {
    const auto& m = p.factors[static_cast<std::size_t>(g)];
    const Matrix gamma = (2.0 / p.total) * (grads[static_cast<std::size_t>(g)] * m - c * m);
    pack_matrix(gamma, out, g * block);
  }
  return out;
}

RealVector EnsembleParam::encode(const std::vector<Matrix>& factors) const {
  RealVector x = RealVector::Zero(size());
  const Eigen::Index block = 2LL * dim_ * rank_;
  for (int g = 0; g < count_; ++g) {
    Matrix m = Matrix::Zero(dim_, rank_);
    if (g < static_cast<int>(factors.size())) {
      const auto& f = factors[static_cast<std::size_t>(g)];
      if (f.rows() != dim_) throw DimensionError("EnsembleParam::encode: wrong factor rows");
      const auto cols = std::min<Eigen::Index>(f.cols(), rank_);
      m.leftCols(cols) = f.leftCols(cols);
    } else {
      m(g % dim_, 0) = 1e-4;
    }
    pack_matrix(m, x, g * block);
  }
  return x;
}

IsometryParam::IsometryParam(int rows, int cols) : rows_(rows), cols_(cols) {
  if (cols < 1 || rows < cols) throw DimensionError("IsometryParam requires rows >= cols >= 1");
}

IsometryParam::Point IsometryParam::evaluate(const RealVector& x) const {
  Point p;
  p.z = unpack_matrix(x, 0, rows_, cols_);
  const auto eig = hermitian_eigen(p.z.adjoint() * p.z);
  p.gram_values = eig.values.cwiseMax(1e-300);
  p.gram_vectors = eig.vectors;
  const RealVector inv_sqrt = p.gram_values.cwiseSqrt().cwiseInverse();
  p.inv_sqrt = eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.adjoint();
  p.v = p.z * p.inv_sqrt;
  return p;
}

RealVector IsometryParam::pullback(const Point& p, const Matrix& gamma_v) const {
  // V = Z T with T = S^{-1/2}, S = Z^dagger Z. The Frechet derivative of
  // S^{-1/2} in the eigenbasis of S has divided differences
  // -1 / (sqrt(a) sqrt(b) (sqrt(a) + sqrt(b))).
  const Matrix c = gamma_v.adjoint() * p.z;
  const Matrix herm = hermitian_part(c);
  const Matrix& q = p.gram_vectors;
  Matrix h = q.adjoint() * herm * q;
  const RealVector sq = p.gram_values.cwiseSqrt();
  for (Eigen::Index a = 0; a < h.rows(); ++a) {
    for (Eigen::Index b = 0; b < h.cols(); ++b) {
      h(a, b) *= -1.0 / (sq(a) * sq(b) * (sq(a) + sq(b)));
    }
  }
  const Matrix y = q * h * q.adjoint();
  const Matrix gamma_z = gamma_v * p.inv_sqrt + 2.0 * p.z * y;
  RealVector out(size());
  pack_matrix(gamma_z, out, 0);
  return out;
}

RealVector IsometryParam::encode(const Matrix& v) const {
  if (v.cols() != cols_ || v.rows() > rows_) {
    throw DimensionError("IsometryParam::encode: shape mismatch");
  }
  Matrix z = Matrix::Zero(rows_, cols_);
  z.topRows(v.rows()) = v;
  RealVector x(size());
  pack_matrix(z, x, 0);
  return x;
}

DecompositionPoint decompose(const Matrix& w, const Matrix& v, int blocks, int block_size) {
  DecompositionPoint p;
  p.states.reserve(static_cast<std::size_t>(blocks));
  p.factors.reserve(static_cast<std::size_t>(blocks));
  for (int g = 0; g < blocks; ++g) {
    Matrix y = w * v.middleRows(g * block_size, block_size).adjoint();
    p.states.push_back(y * y.adjoint());
    p.factors.push_back(std::move(y));
  }
  return p;
}

Matrix decomposition_pullback(const Matrix& w, const Matrix& v, int blocks, int block_size,
                              const std::vector<Matrix>& grads) {
  Matrix gamma(v.rows(), v.cols());
  for (int g = 0; g < blocks; ++g) {
    const Matrix y = w * v.middleRows(g * block_size, block_size).adjoint();
    gamma.middleRows(g * block_size, block_size) =
        2.0 * y.adjoint() * grads[static_cast<std::size_t>(g)] * w;
  }
  return gamma;
}

}  // namespace potcap
