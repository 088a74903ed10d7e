#include <doctest.h>

#include "check.hpp"
#include "potcap/additivity.hpp"
#include "potcap/error.hpp"
#include "potcap/zoo.hpp"

using namespace potcap;

namespace {

AdditivityOptions fast() {
  AdditivityOptions o;
  o.capacity.optim.restarts = 3;
  o.capacity.optim.seed = 77;
  return o;
}

}  // namespace

TEST_CASE("superadditive quantities") {
  for (const char* q : {"chi", "q1", "p1", "c_e", "q_a"}) CHECK(is_superadditive(q));
  CHECK_FALSE(is_superadditive("eof"));
}

TEST_CASE("degradable pairs are additive for coherent information") {
  const auto r = additivity_gap("q1", dephasing_channel(0.1), amplitude_damping_channel(0.2), fast());
  CHECK(r.mode == "additivity");
  CHECK_NEAR(r.sum_of_parts, r.value_a + r.value_b, 1e-14);
  CHECK_NEAR(r.gap, r.joint_value - r.sum_of_parts, 1e-14);
  CHECK(std::abs(r.gap) < 1e-4);
}

TEST_CASE("entanglement-assisted capacity is additive") {
  const auto r = additivity_gap("c_e", dephasing_channel(0.2), depolarizing_channel(0.3), fast());
  CHECK(std::abs(r.gap) < 1e-5);
}

TEST_CASE("Holevo quantity is additive with an entanglement-breaking factor") {
  const auto r = additivity_gap("chi", full_dephasing_channel(2), amplitude_damping_channel(0.3), fast());
  CHECK(r.gap > -1e-5);
  CHECK(r.gap < 1e-4);
}

TEST_CASE("additivity runs are reproducible and respect the dimension cap") {
  const auto a = additivity_gap("q1", random_channel(2, 2, 2, 5), random_channel(2, 2, 2, 6), fast());
  const auto b = additivity_gap("q1", random_channel(2, 2, 2, 5), random_channel(2, 2, 2, 6), fast());
  CHECK(a.joint_value == b.joint_value);
  CHECK(a.value_a == b.value_a);
  auto capped = fast();
  capped.max_dim = 3;
  CHECK_THROWS_AS(additivity_gap("q1", identity_channel(2), identity_channel(2), capped), DimensionError);
}

TEST_CASE("activation search finds the prepare-mixed witness") {
  const std::vector<KrausChannel> family{identity_channel(2), prepare_mixed_channel(2), identity_channel(4)};
  auto o = fast();
  o.max_dim = 4;
  const auto r = activation_search("q_a", constant_channel(2, 2), family, o);
  CHECK(r.skipped == 1);
  CHECK(r.records.size() == 2);
  CHECK(r.best.mode == "activation");
  CHECK(r.best.channel_b == prepare_mixed_channel(2).name());
  CHECK_NEAR(r.best.gap, 1.0, 1e-3);
  CHECK_NEAR(r.best.sum_of_parts, r.best.value_b, 1e-14);
}

TEST_CASE("default auxiliary family is deterministic") {
  const auto a = default_aux_family(3, 2, 9), b = default_aux_family(3, 2, 9);
  REQUIRE(a.size() == b.size());
  int random_count = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].name() == b[i].name());
    CHECK(a[i].d_in() <= 3);
    if (a[i].name().rfind("random", 0) == 0) ++random_count;
  }
  CHECK(random_count == 4);
}

TEST_CASE("potential upper bound dispatch") {
  PotentialOptions po;
  po.optim.restarts = 2;
  CHECK(potential_upper_bound("q1", dephasing_channel(0.2), po).target == "qp_upper");
  CHECK(potential_upper_bound("p1", dephasing_channel(0.2), po).target == "pp_upper");
  CHECK(potential_upper_bound("q_a", dephasing_channel(0.2), po).target == "qa_p");
  CHECK_THROWS_AS(potential_upper_bound("bogus", dephasing_channel(0.2), po), ConfigError);
}

TEST_CASE("single-letter, doubled and potential values are ordered") {
  ChainOptions o;
  o.additivity = fast();
  o.potential.optim.restarts = 2;
  const auto r = chain_check(dephasing_channel(0.2), o);
  CHECK(r.entries.size() == 3);
  CHECK(r.passed);
  for (const auto& e : r.entries) {
    INFO(e.quantity);
    CHECK(e.lower_ok);
    CHECK(e.upper_ok);
  }
}

TEST_CASE("channel entanglement of formation is subadditive on a random pair") {
  PotentialOptions po;
  po.optim.restarts = 1;
  const auto r = subadditivity_check_potential_proxy(random_channel(2, 2, 2, 11), random_channel(2, 2, 2, 12), po);
  CHECK(r.holds);
  CHECK_NEAR(r.slack, r.eof_a + r.eof_b - r.eof_joint, 1e-14);
}

TEST_CASE("gap records as CSV") {
  const auto r = additivity_gap("c_e", identity_channel(2), dephasing_channel(0.1), fast());
  const std::string csv = gap_records_csv({r, r});
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.rfind("quantity", 0) == 0);
}
