#include <doctest.h>

#include "check.hpp"
#include "potcap/optimize.hpp"
#include "potcap/parametrize.hpp"

using namespace potcap;

namespace {

// Fixed random Hermitian weights for linear test functionals.
std::vector<Matrix> hermitian_weights(int count, int d, std::uint64_t seed) {
  std::vector<Matrix> out;
  for (int g = 0; g < count; ++g) out.push_back(hermitian_part(random_gaussian(d, d, seed + g)));
  return out;
}

double linear_value(const std::vector<Matrix>& a, const std::vector<Matrix>& omega) {
  double v = 0.0;
  for (std::size_t g = 0; g < a.size(); ++g) v += (a[g] * omega[g]).trace().real();
  return v;
}

RealVector random_params(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return gaussian_vector(rng, n);
}

double rosenbrock(const RealVector& x, RealVector* g) {
  double f = 0.0;
  if (g) g->setZero(x.size());
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    const double a = x(i + 1) - x(i) * x(i), b = 1.0 - x(i);
    f += 100.0 * a * a + b * b;
    if (g) {
      (*g)(i) += -400.0 * x(i) * a - 2.0 * b;
      (*g)(i + 1) += 200.0 * a;
    }
  }
  return f;
}

}  // namespace

TEST_CASE("matrix packing round trip") {
  const Matrix m = random_gaussian(3, 2, 1);
  RealVector x = RealVector::Zero(20);
  pack_matrix(m, x, 4);
  CHECK((unpack_matrix(x, 4, 3, 2) - m).norm() == 0.0);
}

TEST_CASE("ensemble parametrization yields a normalized ensemble with exact pullback") {
  const EnsembleParam param(3, 2, 2);
  const RealVector x = random_params(param.size(), 2);
  const auto p = param.evaluate(x);
  Matrix sum = Matrix::Zero(2, 2);
  for (const auto& w : p.states) sum += w;
  CHECK_NEAR(sum.trace().real(), 1.0, 1e-13);

  const auto a = hermitian_weights(3, 2, 10);
  const Objective f = [&](const RealVector& y, RealVector* g) {
    const auto q = param.evaluate(y);
    if (g) *g = param.pullback(q, a);
    return linear_value(a, q.states);
  };
  RealVector g;
  f(x, &g);
  CHECK((g - central_difference_gradient(f, x, 1e-6)).norm() < 1e-7);

  const auto round = param.evaluate(param.encode(p.factors));
  for (int i = 0; i < 3; ++i) CHECK((round.states[i] - p.states[i]).norm() < 1e-12);
}

TEST_CASE("isometry parametrization yields isometries with exact pullback") {
  const IsometryParam param(5, 3);
  const RealVector x = random_params(param.size(), 3);
  const auto p = param.evaluate(x);
  CHECK(is_isometry(p.v, 1e-12));

  const Matrix gamma = random_gaussian(5, 3, 4);
  const Objective f = [&](const RealVector& y, RealVector* g) {
    const auto q = param.evaluate(y);
    if (g) *g = param.pullback(q, gamma);
    return (gamma.adjoint() * q.v).trace().real();
  };
  RealVector g;
  f(x, &g);
  CHECK((g - central_difference_gradient(f, x, 1e-6)).norm() < 1e-7);

  const Matrix v = random_isometry(3, 5, 5);
  CHECK((param.evaluate(param.encode(v)).v - v).norm() < 1e-12);
}

TEST_CASE("decomposition pullback agrees with finite differences") {
  const Matrix w = eigen_purification(random_density(SystemDims::single("A", 3), 2, 6).matrix());
  const int blocks = 3, block_size = 1;
  const Matrix v0 = random_isometry(2, 3, 7);
  const auto a = hermitian_weights(blocks, 3, 20);
  const auto point = decompose(w, v0, blocks, block_size);
  Matrix reconstructed = Matrix::Zero(3, 3);
  for (const auto& s : point.states) reconstructed += s;
  CHECK((reconstructed - w * w.adjoint()).norm() < 1e-12);

  const Matrix gamma = decomposition_pullback(w, v0, blocks, block_size, a);
  const double h = 1e-6;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < v0.rows(); ++i)
    for (Eigen::Index j = 0; j < v0.cols(); ++j)
      for (cplx step : {cplx(h, 0), cplx(0, h)}) {
        Matrix vp = v0, vm = v0;
        vp(i, j) += step;
        vm(i, j) -= step;
        const double fd = (linear_value(a, decompose(w, vp, blocks, block_size).states) -
                           linear_value(a, decompose(w, vm, blocks, block_size).states)) / (2 * h);
        const double an = step.real() != 0 ? gamma(i, j).real() : gamma(i, j).imag();
        worst = std::max(worst, std::abs(fd - an));
      }
  CHECK(worst < 1e-7);
}

TEST_CASE("L-BFGS solves Rosenbrock") {
  OptimOptions o;
  o.max_iterations = 5000;
  o.gtol = 1e-10;
  const auto r = minimize_lbfgs(rosenbrock, RealVector::Constant(4, -1.2), o);
  CHECK(r.value < 1e-12);
  CHECK((r.x - RealVector::Ones(4)).norm() < 1e-5);
  CHECK(r.converged);

  o.numerical_gradient = true;
  const auto n = minimize_lbfgs(rosenbrock, RealVector::Constant(2, -1.2), o);
  CHECK((n.x - RealVector::Ones(2)).norm() < 1e-3);
}

TEST_CASE("multi-start is deterministic and keeps the best start") {
  // Double well with minima at -1 (value -0.3) and +1 (value 0).
  const Objective f = [](const RealVector& x, RealVector* g) {
    const double t = x(0);
    if (g) *g = RealVector::Constant(1, 4 * t * (t * t - 1) + 0.15);
    return (t * t - 1) * (t * t - 1) + 0.15 * t;
  };
  const Sampler s = [](std::mt19937_64& rng) { return RealVector(2.0 * gaussian_vector(rng, 1)); };
  OptimOptions o;
  o.restarts = 8;
  o.seed = 99;
  const auto a = multi_start_minimize(f, {RealVector::Constant(1, 2.0)}, s, o);
  const auto b = multi_start_minimize(f, {RealVector::Constant(1, 2.0)}, s, o);
  CHECK(a.restart_values == b.restart_values);
  CHECK(a.restart_values.size() == 9);
  CHECK(a.best.x(0) < 0);
  CHECK(a.best.value == *std::min_element(a.restart_values.begin(), a.restart_values.end()));
}

TEST_CASE("golden section finds the minimum of a unimodal function") {
  const auto r = golden_section([](double x) { return (x - 0.3) * (x - 0.3) + 1.0; }, 0.0, 1.0, 1e-9);
  CHECK_NEAR(r.x, 0.3, 1e-6);  // flat minimum: x resolvable only to ~sqrt(eps)
  CHECK_NEAR(r.value, 1.0, 1e-14);
}
