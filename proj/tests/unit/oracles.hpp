#pragma once

// Closed-form reference values computed independently of the library code.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <vector>
#include <algorithm>
#include <cmath>
#include <complex>

namespace oracle {

using Mat = Eigen::MatrixXcd;

inline double h2(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline double shannon(const Eigen::VectorXd& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) s -= p(i) * std::log2(p(i));
  }
  return s;
}

inline double von_neumann(const Mat& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  return shannon(es.eigenvalues().cwiseMax(0.0));
}

// Two-qubit concurrence via the spin-flipped state.
inline double concurrence(const Mat& rho) {
  Mat sy(2, 2);
  sy << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  Mat yy = Eigen::kroneckerProduct(sy, sy).eval();
  const Mat tilde = yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Mat> es(rho * tilde);
  std::vector<double> l;
  for (Eigen::Index i = 0; i < 4; ++i) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
  std::sort(l.rbegin(), l.rend());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

inline double eof_two_qubit(const Mat& rho) {
  const double c = concurrence(rho);
  return h2((1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))) / 2.0);
}

// (A (x) B)_{(i k),(j l)} = A_ij B_kl by explicit index loops.
inline Mat kron_loop(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// tr_B of an operator on C^da (x) C^db by the double-index sum.
inline Mat trace_b_loop(const Mat& m, int da, int db) {
  Mat out = Mat::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
  return out;
}

inline Mat trace_a_loop(const Mat& m, int da, int db) {
  Mat out = Mat::Zero(db, db);
  for (int k = 0; k < db; ++k)
    for (int l = 0; l < db; ++l)
      for (int i = 0; i < da; ++i) out(k, l) += m(i * db + k, i * db + l);
  return out;
}

inline Mat pauli(char c) {
  Mat m = Mat::Zero(2, 2);
  if (c == 'x') { m(0, 1) = 1; m(1, 0) = 1; }
  if (c == 'y') { m(0, 1) = std::complex<double>(0, -1); m(1, 0) = std::complex<double>(0, 1); }
  if (c == 'z') { m(0, 0) = 1; m(1, 1) = -1; }
  if (c == 'i') { m(0, 0) = 1; m(1, 1) = 1; }
  return m;
}

// Qubit depolarizing rho -> (1 - p) rho + p I/2 on a state's second factor.
inline Mat depolarize_second(const Mat& rho, double p) {
  Mat out = (1.0 - 3.0 * p / 4.0) * rho;
  for (char c : {'x', 'y', 'z'}) {
    const Mat k = kron_loop(pauli('i'), pauli(c));
    out += (p / 4.0) * k * rho * k.adjoint();
  }
  return out;
}

// Golden-section plus coarse grid maximum of a scalar function on [lo, hi].
template <class F>
double grid_max(F f, double lo, double hi, int n = 2000) {
  double best = f(lo), arg = lo;
  for (int i = 1; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const double v = f(x);
    if (v > best) { best = v; arg = x; }
  }
  double a = std::max(lo, arg - (hi - lo) / n), b = std::min(hi, arg + (hi - lo) / n);
  for (int it = 0; it < 100; ++it) {
    const double m1 = a + (b - a) * 0.381966, m2 = a + (b - a) * 0.618034;
    if (f(m1) < f(m2)) a = m1; else b = m2;
  }
  return std::max(best, f(0.5 * (a + b)));
}

// max_p h((1-g)p) - h(g p): coherent information of amplitude damping on diagonal inputs.
inline double q1_amplitude_damping(double g) {
  return std::max(0.0, grid_max([g](double p) { return h2((1 - g) * p) - h2(g * p); }, 0.0, 1.0));
}

}  // namespace oracle
