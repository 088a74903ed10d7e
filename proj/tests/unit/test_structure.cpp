#include <doctest.h>

#include "check.hpp"
#include "potcap/entropics.hpp"
#include "potcap/error.hpp"
#include "potcap/reports.hpp"
#include "potcap/structure.hpp"

using namespace potcap;

namespace {

Matrix separable_mixture(int d_b, int d_e, int terms, std::uint64_t seed) {
  Matrix out = Matrix::Zero(d_b * d_e, d_b * d_e);
  for (int t = 0; t < terms; ++t) {
    out += kron(random_density(SystemDims::single("B", d_b), seed + 2 * t).matrix(),
                random_density(SystemDims::single("E", d_e), seed + 2 * t + 1).matrix()) / terms;
  }
  return out;
}

}  // namespace

TEST_CASE("block states have S(B) - S(BE) equal to the block entropy sum") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto bd = random_block_decomposition(4, 2, seed);
    CHECK_NOTHROW(check_block_decomposition(bd));
    const auto rho = construct_block_state(bd);
    CHECK(rho.dims().labels() == std::vector<std::string>{"B", "E"});
    CHECK_NEAR(coherent_difference(rho.matrix(), 4, 2), block_entropy_sum(bd), 1e-10);
  }
}

TEST_CASE("malformed block decompositions are rejected") {
  const auto psi = random_pure(SystemDims({"R", "E"}, {2, 2}), 4).vector();
  BlockDecomposition bd{2, 2, {make_block(1.0, Matrix::Identity(1, 1), psi, 2)}, {}};
  CHECK_NOTHROW(check_block_decomposition(bd));
  auto mixed = bd;
  mixed.blocks[0].phi = maximally_mixed(4);
  CHECK_THROWS_AS(check_block_decomposition(mixed), InvariantViolation);
  auto heavy = bd;
  heavy.blocks[0].prob = 0.7;
  CHECK_THROWS_AS(check_block_decomposition(heavy), InvariantViolation);
  auto oversized = bd;
  oversized.d_b = 1;
  CHECK_THROWS_AS(check_block_decomposition(oversized), DimensionError);
}

TEST_CASE("verification accepts the true decomposition and rejects a wrong one") {
  const auto bd = random_block_decomposition(4, 2, 5);
  const Matrix rho = construct_block_state(bd).matrix();
  const auto ok = verify_block_form(rho, bd);
  CHECK(ok.passed);
  CHECK(ok.distance < 1e-10);
  const auto other = random_block_decomposition(4, 2, 6);
  const auto bad = verify_block_form(rho, other);
  CHECK_FALSE(bad.passed);
  CHECK(bad.distance > 1e-3);
}

TEST_CASE("discovery recovers hidden block structure") {
  for (std::uint64_t seed : {7u, 8u}) {
    const auto bd = random_block_decomposition(4, 2, seed);
    const Matrix rho = construct_block_state(bd).matrix();
    const auto found = discover_block_form(rho, 4, 2, seed);
    CHECK(found.status == "verified");
    REQUIRE(found.decomposition.has_value());
    CHECK(found.verification.distance < 1e-7);
    CHECK_NEAR(block_entropy_sum(*found.decomposition), block_entropy_sum(bd), 1e-7);
  }
  const Matrix generic = random_density(SystemDims({"B", "E"}, {2, 2}), 9).matrix();
  CHECK(discover_block_form(generic, 2, 2).status == "undecided");
}

TEST_CASE("E_F and G meet S(B) - S(BE) on block states") {
  for (std::uint64_t seed : {1u, 10u}) {
    const auto bd = random_block_decomposition(4, 2, seed);
    const Matrix rho = construct_block_state(bd).matrix();
    for (auto m : {EqualityMeasure::eof, EqualityMeasure::g}) {
      const auto r = verify_equality_case(rho, 4, 2, m);
      INFO(to_string(m));
      CHECK(r.candidate);
      CHECK_NEAR(r.lhs, block_entropy_sum(bd), 1e-10);
    }
    // Distinct E marginals let a measurement on E learn the block index.
    const auto c = verify_equality_case(rho, 4, 2, EqualityMeasure::c_arrow);
    CHECK(c.gap >= -1e-6);
  }
}

TEST_CASE("C_<- meets S(B) - S(BE) on a single mixed-times-pure block") {
  const auto psi = random_pure(SystemDims({"R", "E"}, {2, 2}), 50).vector();
  const Matrix left = random_density(SystemDims::single("L", 2), 51).matrix();
  const BlockDecomposition bd{4, 2, {make_block(1.0, left, psi, 2)}, {}};
  const auto r = verify_equality_case(construct_block_state(bd).matrix(), 4, 2, EqualityMeasure::c_arrow);
  CHECK(r.candidate);
  CHECK_NEAR(r.rhs, block_entropy_sum(bd), 1e-6);
}

TEST_CASE("measures dominate S(B) - S(BE) on random and separable states") {
  for (std::uint64_t seed : {20u, 21u}) {
    const Matrix rho = random_density(SystemDims({"B", "E"}, {2, 2}), 2, seed).matrix();
    const auto e = verify_equality_case(rho, 2, 2, EqualityMeasure::eof);
    const auto c = verify_equality_case(rho, 2, 2, EqualityMeasure::c_arrow);
    CHECK(c.gap >= -1e-6);
    CHECK(e.gap >= -1e-6);
  }
  const Matrix sep = separable_mixture(2, 2, 3, 30);
  const auto r = verify_equality_case(sep, 2, 2, EqualityMeasure::eof);
  CHECK(r.lhs <= 1e-12);
  CHECK(r.rhs < 1e-4);
}

TEST_CASE("equality measure names and JSON round trip") {
  for (auto m : {EqualityMeasure::c_arrow, EqualityMeasure::g, EqualityMeasure::eof}) {
    CHECK(equality_measure_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS(equality_measure_from_string("nope"), ConfigError);
  const auto bd = random_block_decomposition(4, 2, 40);
  const auto back = block_decomposition_from_json(to_json(bd));
  CHECK((construct_block_state(back).matrix() - construct_block_state(bd).matrix()).norm() < 1e-12);
}
