#include <doctest.h>

#include "check.hpp"
#include "oracles.hpp"
#include "potcap/capacities.hpp"
#include "potcap/potential.hpp"
#include "potcap/zoo.hpp"

using namespace potcap;

namespace {

CapacityOptions cap_fast() {
  CapacityOptions o;
  o.optim.restarts = 4;
  return o;
}

// Lifted objective at the maximally mixed input, minimized over real Kraus
// rotations of a two-operator qubit channel.
double min_rotation_at_mixed(const KrausChannel& ch) {
  double best = 1e9;
  for (int i = 0; i <= 4000; ++i) {
    const double th = M_PI * i / 4000.0;
    double v = 0.0;
    for (int j = 0; j < 2; ++j) {
      const double c = j == 0 ? std::cos(th) : -std::sin(th);
      const double s = j == 0 ? std::sin(th) : std::cos(th);
      const Matrix k = c * ch.kraus(0) + s * ch.kraus(1);
      const Matrix out = k * k.adjoint() / 2.0;
      const double w = out.trace().real();
      if (w > 1e-15) v += w * oracle::von_neumann(out / w);
    }
    best = std::min(best, v);
  }
  return best;
}

}  // namespace

TEST_CASE("channel entanglement of formation on zoo channels") {
  CHECK_NEAR(channel_eof(identity_channel(2)).value, 1.0, 1e-5);
  CHECK_NEAR(channel_eof(erasure_channel(0.5)).value, 0.5, 1e-4);
  CHECK(channel_eof(depolarizing_channel(1.0)).value < 1e-4);
  for (double p : {0.1, 0.25}) {
    const auto r = channel_eof(dephasing_channel(p));
    CHECK_NEAR(r.value, oracle::h2(0.5 + std::sqrt(p * (1 - p))), 1e-4);
    CHECK_NEAR(r.value, min_rotation_at_mixed(dephasing_channel(p)), 1e-4);
    CHECK(r.bound_direction == BoundDirection::certified_upper);
    CHECK(std::abs(r.component("minimax_gap")) < 1e-3);
  }
}

TEST_CASE("lifted objective with the identity rotation") {
  const auto ch = random_channel(2, 2, 3, 5);
  const Matrix rho = random_density(SystemDims::single("A", 2), 6).matrix();
  double direct = 0.0;
  for (const auto& k : ch.kraus()) {
    const Matrix out = k * rho * k.adjoint();
    const double w = out.trace().real();
    direct += w * oracle::von_neumann(out / w);
  }
  CHECK_NEAR(lifted_objective(ch, Matrix::Identity(3, 3), rho), direct, 1e-12);
}

TEST_CASE("potential upper bounds dominate the single-letter values") {
  const auto ch = amplitude_damping_channel(0.3);
  const double eof = channel_eof(ch).value;
  CHECK(q1(ch, cap_fast()).value <= qp_upper(ch).value + 1e-6);
  CHECK(p1(ch, cap_fast()).value <= pp_upper(ch).value + 1e-6);
  CHECK_NEAR(qp_upper(ch).value, eof, 1e-9);
  CHECK_NEAR(pp_upper(ch).value, eof, 1e-9);
  CHECK(holevo_capacity(ch, cap_fast()).value <= chi_p_upper(ch).value + 1e-6);
}

TEST_CASE("canonical lift is a Hadamard channel with the original as a marginal") {
  const auto ch = amplitude_damping_channel(0.3);
  const auto lift = canonical_lift(ch);
  CHECK(lift.lifted.d_in() == 2);
  CHECK(lift.lifted.d_out() == 2 * ch.num_kraus());
  CHECK(is_hadamard(lift.lifted).verdict == Verdict::yes);
  const Matrix rho = random_density(SystemDims::single("A", 2), 7).matrix();
  const Matrix out = potcap::apply(lift.lifted, rho);
  CHECK((oracle::trace_b_loop(out, 2, ch.num_kraus()) - potcap::apply(ch, rho)).norm() < 1e-13);
  // Its coherent information equals the lifted objective subtracted from S(B B').
  CHECK(q1(lift.lifted, cap_fast()).value >= q1(ch, cap_fast()).value - 1e-6);
}

TEST_CASE("entanglement-breaking classification") {
  CHECK(is_entanglement_breaking(identity_channel(2)).verdict == Verdict::no);
  CHECK(is_entanglement_breaking(identity_channel(2)).method == "npt");
  CHECK(is_entanglement_breaking(full_dephasing_channel(2)).verdict == Verdict::yes);
  CHECK(is_entanglement_breaking(constant_channel(2, 2)).verdict == Verdict::yes);
  // Qubit depolarizing is entanglement breaking exactly from p = 2/3.
  CHECK(is_entanglement_breaking(depolarizing_channel(0.6)).verdict == Verdict::no);
  CHECK(is_entanglement_breaking(depolarizing_channel(0.7)).verdict == Verdict::yes);
  const auto fd3 = is_entanglement_breaking(full_dephasing_channel(3));
  CHECK(fd3.verdict == Verdict::yes);
  CHECK(fd3.method == "classical_output");
  CHECK(is_entanglement_breaking(depolarizing_channel(0.3, 3)).verdict == Verdict::no);
  CHECK(is_entanglement_breaking(depolarizing_channel(0.9, 3)).verdict == Verdict::undecided);
}

TEST_CASE("Hadamard classification") {
  CHECK(is_hadamard(dephasing_channel(0.2)).verdict == Verdict::yes);
  CHECK(is_hadamard(amplitude_damping_channel(0.3)).verdict == Verdict::no);
  CHECK(is_hadamard(identity_channel(2)).verdict == Verdict::yes);
}

TEST_CASE("degradability") {
  const auto ad = is_degradable(amplitude_damping_channel(0.3));
  CHECK(ad.degradable);
  REQUIRE(ad.degrading_map.has_value());
  CHECK(degrading_residual(amplitude_damping_channel(0.3), *ad.degrading_map) < 1e-5);
  CHECK(is_degradable(full_dephasing_channel(2)).degradable);
  CHECK(is_degradable(dephasing_channel(0.2)).degradable);
  const auto dep = is_degradable(depolarizing_channel(0.5));
  CHECK_FALSE(dep.degradable);
  CHECK(dep.verdict == "no_map_found");
  CHECK(dep.residual > 1e-3);
}

TEST_CASE("q_a potential and its activation witness") {
  const auto pot = q_a_potential(constant_channel(2, 2));
  CHECK_NEAR(pot.value, 1.0, 1e-9);
  const auto w = activation_witness_qa(constant_channel(2, 2));
  CHECK(w.kind == "prepare_mixed");
  CHECK(w.verified);
  CHECK_NEAR(w.achieved, 1.0, 1e-3);
  CHECK(activation_witness_qa(identity_channel(2)).kind == "trivial");
  // C -> C^2: the trace-out auxiliary supplies the missing input entropy.
  const auto t = activation_witness_qa(prepare_mixed_channel(2));
  CHECK(t.kind == "trace_out");
  CHECK(t.verified);
}

TEST_CASE("perfection audit verdicts") {
  const auto a = perfection_audit(full_dephasing_channel(2));
  REQUIRE(a.entries.size() == 3);
  for (const auto& e : a.entries) {
    INFO(e.capacity);
    if (e.capacity == "classical") CHECK(e.verdict == "perfect");
    else CHECK(e.verdict == "zero_potential");
  }
  for (const auto& e : perfection_audit(identity_channel(2)).entries) CHECK(e.verdict == "perfect");
  for (const auto& e : perfection_audit(dephasing_channel(0.2)).entries) {
    if (e.capacity != "classical") CHECK(e.verdict == "not_activatable_to_perfect");
  }
}
