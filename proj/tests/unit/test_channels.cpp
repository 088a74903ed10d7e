#include <doctest.h>

#include "check.hpp"
#include "oracles.hpp"
#include "potcap/channels.hpp"
#include "potcap/error.hpp"
#include "potcap/zoo.hpp"

using namespace potcap;

namespace {

Matrix rand_state(int d, std::uint64_t seed) {
  return random_density(SystemDims::single("X", d), seed).matrix();
}

Matrix kraus_sum(const KrausChannel& ch, const Matrix& rho) {
  Matrix out = Matrix::Zero(ch.d_out(), ch.d_out());
  for (const auto& k : ch.kraus()) out += k * rho * k.adjoint();
  return out;
}

RealVector padded_spectrum(const Matrix& m, int n) {
  RealVector s = RealVector::Zero(n);
  const RealVector ev = hermitian_eigen(m).values.reverse();
  s.head(ev.size()) = ev;
  return s;
}

}  // namespace

TEST_CASE("CPTP validation reports the deviation") {
  const std::vector<Matrix> half{std::sqrt(0.5) * Matrix::Identity(2, 2)};
  const auto rep = validate_cptp(half);
  CHECK_FALSE(rep.passed);
  CHECK_NEAR(rep.deviation, 0.5, 1e-14);
  CHECK_THROWS_AS(KrausChannel{half}, InvariantViolation);
  CHECK(validate_cptp(amplitude_damping_channel(0.3)).deviation < 1e-14);
  const std::vector<Matrix> ragged{Matrix::Identity(2, 2), Matrix::Zero(3, 2)};
  CHECK_THROWS_AS(KrausChannel{ragged}, DimensionError);
}

TEST_CASE("every zoo kind is CPTP to machine precision") {
  const std::vector<std::string> specs{
      "identity(3)",        "dephasing(0.2)",   "depolarizing(0.4, 3)", "amplitude_damping(0.7)",
      "erasure(0.25, 3)",   "full_dephasing(3)", "measure_prepare(x)",  "random(2, 3, 3, 5)",
      "constant(2, 3)",     "trace(3)",          "prepare_mixed(2)"};
  for (const auto& s : specs) {
    INFO(s);
    CHECK(validate_cptp(zoo(s)).deviation < 1e-12);
  }
}

TEST_CASE("Stinespring dilation reproduces the channel") {
  const auto ch = random_channel(2, 3, 3, 17);
  const auto st = kraus_to_stinespring(ch);
  CHECK(is_isometry(st.matrix, 1e-12));
  CHECK(st.d_out() == 3);
  CHECK(st.d_env() == 3);
  const Matrix rho = rand_state(2, 18);
  const Matrix big = st.matrix * rho * st.matrix.adjoint();
  CHECK((oracle::trace_b_loop(big, 3, 3) - potcap::apply(ch, rho)).norm() < 1e-13);
  CHECK((oracle::trace_a_loop(big, 3, 3) - potcap::apply(complementary(ch), rho)).norm() < 1e-13);
}

TEST_CASE("complementary channel entries are tr(K_i rho K_j^dagger)") {
  for (const auto& ch : {dephasing_channel(0.3), amplitude_damping_channel(0.4), random_channel(2, 2, 3, 19)}) {
    const Matrix rho = rand_state(2, 20);
    const int k = ch.num_kraus();
    Matrix expect(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) expect(i, j) = (ch.kraus(i) * rho * ch.kraus(j).adjoint()).trace();
    CHECK((potcap::apply(complementary(ch), rho) - expect).norm() < 1e-13);
  }
  // The complement of a unitary channel discards everything.
  const Matrix out = potcap::apply(complementary(identity_channel(2)), rand_state(2, 21));
  CHECK(out.rows() == 1);
  CHECK_NEAR(out(0, 0).real(), 1.0, 1e-14);
}

TEST_CASE("double complement has the same output spectra") {
  const auto ch = random_channel(2, 2, 2, 22);
  const auto cc = complementary(complementary(ch));
  for (std::uint64_t s : {23u, 24u}) {
    const Matrix rho = rand_state(2, s);
    const int n = std::max(ch.d_out(), cc.d_out());
    CHECK((padded_spectrum(potcap::apply(ch, rho), n) - padded_spectrum(potcap::apply(cc, rho), n)).norm() < 1e-12);
  }
}

TEST_CASE("Choi matrix round trip and application") {
  const auto ch = random_channel(2, 3, 2, 25);
  const auto choi = choi_of(ch);
  CHECK_NEAR(choi.matrix.trace().real(), 2.0, 1e-12);
  CHECK_NEAR(choi_of(ch, true).matrix.trace().real(), 1.0, 1e-12);
  const Matrix rho = rand_state(2, 26);
  CHECK((apply_via_choi(choi, rho) - potcap::apply(ch, rho)).norm() < 1e-13);
  CHECK((choi_of(kraus_from_choi(choi)).matrix - choi.matrix).norm() < 1e-12);

  const Vector phi = maximally_entangled(2);
  CHECK((choi_of(identity_channel(2)).matrix - 2.0 * phi * phi.adjoint()).norm() < 1e-14);

  ChoiMatrix bad = choi;
  bad.matrix *= 1.5;
  CHECK_THROWS_AS(kraus_from_choi(bad), InvariantViolation);
}

TEST_CASE("Kraus rotation leaves the channel unchanged") {
  const auto ch = random_channel(2, 2, 3, 27);
  const Matrix u = random_unitary(3, 28);
  const Matrix v = random_isometry(3, 5, 29);
  CHECK((choi_of(kraus_rotate(ch, u)).matrix - choi_of(ch).matrix).norm() < 1e-13);
  CHECK(kraus_rotate(ch, v).num_kraus() == 5);
  CHECK((choi_of(kraus_rotate(ch, v)).matrix - choi_of(ch).matrix).norm() < 1e-13);
  CHECK_THROWS_AS(kraus_rotate(ch, Matrix(2.0 * u)), InvariantViolation);
  CHECK_THROWS_AS(kraus_rotate(ch, random_isometry(2, 4, 30)), DimensionError);
}

TEST_CASE("tensor product and partial application") {
  const auto a = amplitude_damping_channel(0.3), b = random_channel(2, 3, 2, 31);
  const auto ab = tensor_channels(a, b);
  CHECK(ab.d_in() == 4);
  CHECK(ab.d_out() == 6);
  const Matrix rho = rand_state(4, 32);
  Matrix expect = Matrix::Zero(6, 6);
  for (const auto& ka : a.kraus())
    for (const auto& kb : b.kraus()) {
      const Matrix k = oracle::kron_loop(ka, kb);
      expect += k * rho * k.adjoint();
    }
  CHECK((potcap::apply(ab, rho) - expect).norm() < 1e-13);

  const Matrix r2 = rand_state(2, 33);
  CHECK((apply_to_half(b, kron(rand_state(3, 34), r2), 3) - kron(rand_state(3, 34), potcap::apply(b, r2))).norm() < 1e-13);
  CHECK((apply_to_half(depolarizing_channel(0.4), rho, 2) - oracle::depolarize_second(rho, 0.4)).norm() < 1e-13);
  CHECK_THROWS_AS(potcap::apply(b, rand_state(3, 35)), DimensionError);
}

TEST_CASE("Heisenberg picture is the adjoint") {
  const auto ch = random_channel(3, 2, 3, 36);
  const Matrix rho = rand_state(3, 37);
  const Matrix x = random_gaussian(2, 2, 38);
  CHECK(std::abs((x * potcap::apply(ch, rho)).trace() - (apply_adjoint(ch, x) * rho).trace()) < 1e-13);
  CHECK((apply_adjoint(ch, Matrix::Identity(2, 2)) - Matrix::Identity(3, 3)).norm() < 1e-13);
}

TEST_CASE("composition of dephasing channels") {
  const double p = 0.1, q = 0.3;
  const auto c = compose(dephasing_channel(p), dephasing_channel(q));
  const auto direct = dephasing_channel(p * (1 - q) + q * (1 - p));
  CHECK((choi_of(c).matrix - choi_of(direct).matrix).norm() < 1e-14);
  const Matrix rho = rand_state(2, 39);
  CHECK((potcap::apply(c, rho) - kraus_sum(direct, rho)).norm() < 1e-14);
}
