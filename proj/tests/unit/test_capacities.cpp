#include <doctest.h>

#include "check.hpp"
#include "oracles.hpp"
#include "potcap/capacities.hpp"
#include "potcap/error.hpp"
#include "potcap/zoo.hpp"

using namespace potcap;

namespace {

CapacityOptions fast(std::uint64_t seed = 3) {
  CapacityOptions o;
  o.optim.restarts = 4;
  o.optim.seed = seed;
  return o;
}

double shannon4(double a, double b) {
  Eigen::VectorXd p(4);
  p << a, b, b, b;
  return oracle::shannon(p);
}

}  // namespace

TEST_CASE("dephasing channel closed forms") {
  for (double p : {0.05, 0.2, 0.4}) {
    const auto ch = dephasing_channel(p);
    CHECK_NEAR(q1(ch, fast()).value, 1.0 - oracle::h2(p), 1e-6);
    CHECK_NEAR(p1(ch, fast()).value, 1.0 - oracle::h2(p), 1e-5);
    CHECK_NEAR(holevo_capacity(ch, fast()).value, 1.0, 1e-6);
    CHECK_NEAR(c_e(ch, fast()).value, 2.0 - oracle::h2(p), 1e-6);
  }
}

TEST_CASE("depolarizing channel closed forms") {
  for (double p : {0.1, 0.5}) {
    const auto ch = depolarizing_channel(p);
    CHECK_NEAR(holevo_capacity(ch, fast()).value, 1.0 - oracle::h2(p / 2), 1e-6);
    // Covariance fixes the optimal input to I/2, so C_E = 2 - S(Choi state).
    const auto ce = c_e(ch, fast());
    CHECK_NEAR(ce.value, 2.0 - shannon4(1 - 3 * p / 4, p / 4), 1e-6);
    CHECK(ce.bound_direction == BoundDirection::certified_exact);
  }
  CHECK(q1(depolarizing_channel(0.5), fast()).value < 1e-9);
}

TEST_CASE("amplitude damping against diagonal-input oracles") {
  for (double g : {0.1, 0.3}) {
    const auto ch = amplitude_damping_channel(g);
    CHECK_NEAR(q1(ch, fast()).value, oracle::q1_amplitude_damping(g), 1e-6);
    const double ce = oracle::grid_max(
        [g](double p) { return oracle::h2(p) + oracle::h2((1 - g) * p) - oracle::h2(g * p); }, 0.0, 1.0);
    CHECK_NEAR(c_e(ch, fast()).value, ce, 1e-6);
    const double qa = oracle::grid_max(
        [g](double p) { return std::min(oracle::h2(p), oracle::h2((1 - g) * p)); }, 0.0, 1.0);
    CHECK_NEAR(q_a(ch, fast()).value, qa, 1e-4);
  }
  CHECK(q1(amplitude_damping_channel(0.6), fast()).value < 1e-9);
}

TEST_CASE("erasure channel closed forms") {
  const double p = 0.25;
  const auto ch = erasure_channel(p);
  CHECK_NEAR(q1(ch, fast()).value, 1.0 - 2.0 * p, 1e-6);
  CHECK_NEAR(holevo_capacity(ch, fast()).value, 1.0 - p, 1e-6);
  CHECK_NEAR(c_e(ch, fast()).value, 2.0 * (1.0 - p), 1e-6);
  CHECK_NEAR(p1(ch, fast()).value, 1.0 - 2.0 * p, 1e-5);
}

TEST_CASE("q_a on simple channels") {
  CHECK_NEAR(q_a(identity_channel(2), fast()).value, 1.0, 1e-6);
  CHECK_NEAR(q_a(full_dephasing_channel(2), fast()).value, 1.0, 1e-6);
  CHECK_NEAR(q_a(erasure_channel(0.5), fast()).value, 1.0, 1e-6);
  CHECK(q_a(constant_channel(2, 2), fast()).value < 1e-6);
  const auto r = q_a(amplitude_damping_channel(0.2), fast());
  CHECK(r.upper_estimate >= r.value - 1e-9);
}

TEST_CASE("capacity orderings on random channels") {
  for (std::uint64_t s : {101u, 102u}) {
    const auto ch = random_channel(2, 2, 2, s);
    const double vq = q1(ch, fast(s)).value, vp = p1(ch, fast(s)).value;
    const double vchi = holevo_capacity(ch, fast(s)).value, vce = c_e(ch, fast(s)).value;
    const double vqa = q_a(ch, fast(s)).value;
    CHECK(vq <= vp + 1e-6);
    CHECK(vp <= vchi + 1e-6);
    CHECK(vchi <= vce + 1e-6);
    CHECK(vq <= vqa + 1e-6);
    CHECK(vchi <= 1.0 + 1e-9);
  }
}

TEST_CASE("MSW quantity sits between q1 and chi") {
  CHECK_NEAR(msw_chi(identity_channel(2), fast()).value, 1.0, 1e-5);
  CHECK_NEAR(msw_chi(full_dephasing_channel(2), fast()).value, 1.0, 1e-5);
  const auto ch = amplitude_damping_channel(0.3);
  const auto m = msw_chi(ch, fast());
  CHECK(m.value >= q1(ch, fast()).value - 1e-5);
  CHECK(m.value <= holevo_capacity(ch, fast()).value + 1e-6);
  CHECK(m.bound_direction == BoundDirection::certified_lower);
}

TEST_CASE("reports carry consistent diagnostics") {
  const auto r = holevo_capacity(amplitude_damping_channel(0.3), fast());
  CHECK(r.quantity == "chi");
  CHECK(r.diagnostics.starts == static_cast<int>(r.diagnostics.restart_values.size()));
  CHECK_NEAR(r.best_ensemble.average().trace().real(), 1.0, 1e-10);
  double psum = 0.0;
  for (double p : r.best_ensemble.probs) psum += p;
  CHECK_NEAR(psum, 1.0, 1e-12);
  CHECK_THROWS_AS(compute_capacity("nonsense", identity_channel(2)), ConfigError);
  CHECK(compute_capacity("q1", dephasing_channel(0.1), fast()).quantity == "q1");
}

TEST_CASE("maximum output entropy is certified") {
  const auto r = max_output_entropy(amplitude_damping_channel(0.3), fast().optim);
  CHECK_NEAR(r.value, 1.0, 1e-6);
  CHECK(r.gap < 1e-6);
}
