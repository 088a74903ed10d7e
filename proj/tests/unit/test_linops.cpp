#include <doctest.h>

#include <array>

#include "check.hpp"
#include "oracles.hpp"
#include "potcap/error.hpp"
#include "potcap/linops.hpp"

using namespace potcap;

namespace {

Matrix rand_state(int d, std::uint64_t seed) {
  return random_density(SystemDims::single("X", d), seed).matrix();
}

}  // namespace

TEST_CASE("kron agrees with an index loop") {
  const Matrix a = random_gaussian(2, 3, 1), b = random_gaussian(3, 2, 2);
  CHECK((kron(a, b) - oracle::kron_loop(a, b)).norm() < 1e-14);
  const Vector x = random_gaussian(3, 1, 3).col(0), y = random_gaussian(2, 1, 4).col(0);
  CHECK((kron(x, y) - oracle::kron_loop(x, y).col(0)).norm() < 1e-14);
}

TEST_CASE("partial traces agree with index loops") {
  const Matrix m = random_gaussian(6, 6, 5);
  CHECK((trace_out_right(m, 2, 3) - oracle::trace_b_loop(m, 2, 3)).norm() < 1e-13);
  CHECK((trace_out_left(m, 2, 3) - oracle::trace_a_loop(m, 2, 3)).norm() < 1e-13);

  const Matrix big = random_gaussian(12, 12, 6);
  const std::array<int, 3> dims{2, 3, 2};
  CHECK((partial_trace(big, dims, {0}) - oracle::trace_b_loop(big, 2, 6)).norm() < 1e-13);
  CHECK((partial_trace(big, dims, {2}) - oracle::trace_a_loop(big, 6, 2)).norm() < 1e-13);
  CHECK((partial_trace(big, dims, {0, 1}) - oracle::trace_b_loop(big, 6, 2)).norm() < 1e-13);
}

TEST_CASE("partial trace of a product keeps the chosen factors in order") {
  const Matrix r1 = rand_state(2, 7), r2 = rand_state(3, 8), r3 = rand_state(2, 9);
  const Matrix prod = kron(kron(r1, r2), r3);
  const std::array<int, 3> dims{2, 3, 2};
  CHECK((partial_trace(prod, dims, {2, 0}) - kron(r1, r3)).norm() < 1e-13);

  const DensityMatrix labelled(prod, SystemDims({"A", "B", "C"}, {2, 3, 2}));
  const auto kept = partial_trace(labelled, {"C", "B"});
  CHECK(kept.dims().labels() == std::vector<std::string>{"B", "C"});
  CHECK((kept.matrix() - kron(r2, r3)).norm() < 1e-13);
  CHECK_THROWS_AS(partial_trace(labelled, {"Z"}), LabelError);
}

TEST_CASE("partial transpose of a product transposes one factor") {
  const Matrix r1 = rand_state(2, 10), r2 = rand_state(3, 11);
  const std::array<int, 2> dims{2, 3};
  CHECK((partial_transpose(kron(r1, r2), dims, 1) - kron(r1, Matrix(r2.transpose()))).norm() < 1e-14);
  CHECK((partial_transpose(kron(r1, r2), dims, 0) - kron(Matrix(r1.transpose()), r2)).norm() < 1e-14);
}

TEST_CASE("purification reproduces the state") {
  const auto rho = random_density(SystemDims({"A", "B"}, {2, 2}), 3, 12);
  const auto psi = purify(rho);
  CHECK(psi.dims().labels().front() == "R");
  CHECK(psi.dims().dim("R") == 3);
  CHECK_NEAR(psi.vector().norm(), 1.0, 1e-12);
  const Matrix p = psi.vector() * psi.vector().adjoint();
  CHECK((oracle::trace_a_loop(p, 3, 4) - rho.matrix()).norm() < 1e-12);

  const Matrix w = eigen_purification(rho.matrix());
  CHECK(w.cols() == 3);
  CHECK((w * w.adjoint() - rho.matrix()).norm() < 1e-12);
  CHECK(numerical_rank(rho.matrix()) == 3);
}

TEST_CASE("random constructors are deterministic and valid") {
  CHECK((random_gaussian(3, 3, 42) - random_gaussian(3, 3, 42)).norm() == 0.0);
  CHECK((random_gaussian(3, 3, 42) - random_gaussian(3, 3, 43)).norm() > 0.1);

  const Matrix v = random_isometry(2, 5, 13);
  CHECK(v.rows() == 5);
  CHECK(v.cols() == 2);
  CHECK(is_isometry(v));
  const Matrix u = random_unitary(4, 14);
  CHECK((u * u.adjoint() - Matrix::Identity(4, 4)).norm() < 1e-12);

  const auto rho = random_density(SystemDims::single("A", 4), 2, 15);
  CHECK(numerical_rank(rho.matrix()) == 2);
  CHECK_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
  CHECK(hermitian_eigen(rho.matrix()).values.minCoeff() > -1e-12);
  CHECK(hermitian_eigen(rho.matrix()).values(0) <= hermitian_eigen(rho.matrix()).values(3));

  const auto psi = random_pure(SystemDims({"A", "B"}, {2, 3}), 16);
  CHECK_NEAR(psi.vector().norm(), 1.0, 1e-12);
}

TEST_CASE("density validation rejects bad matrices") {
  Matrix nonherm = Matrix::Identity(2, 2) / 2.0;
  nonherm(0, 1) = 0.1;
  CHECK_THROWS_AS(check_density(nonherm), InvariantViolation);
  CHECK_THROWS_AS(check_density(Matrix(Matrix::Identity(2, 2))), InvariantViolation);
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  CHECK_THROWS_AS(check_density(neg), InvariantViolation);
  CHECK_THROWS_AS(DensityMatrix(maximally_mixed(4), SystemDims::single("A", 3)), DimensionError);
  CHECK_NOTHROW(DensityMatrix(maximally_mixed(4), SystemDims({"A", "B"}, {2, 2})));
}

TEST_CASE("SystemDims bookkeeping") {
  const SystemDims d({"A", "B"}, {2, 3});
  CHECK(d.total() == 6);
  CHECK(d.index_of("B") == 1);
  CHECK(d.concat(SystemDims::single("C", 4)).total() == 24);
  CHECK(d.subset({"B"}).dims() == std::vector<int>{3});
  CHECK_THROWS_AS(SystemDims({"A", "A"}, {2, 2}), LabelError);
  CHECK_THROWS_AS(SystemDims({"A"}, {0}), DimensionError);
  CHECK_THROWS_AS(d.concat(SystemDims::single("A", 2)), LabelError);
  CHECK_THROWS_AS(d.dim("Q"), LabelError);
}

TEST_CASE("maximally entangled vector") {
  const Vector phi = maximally_entangled(3);
  CHECK_NEAR(phi.norm(), 1.0, 1e-14);
  const Matrix p = phi * phi.adjoint();
  CHECK((oracle::trace_b_loop(p, 3, 3) - maximally_mixed(3)).norm() < 1e-14);
}
