#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "potcap/entanglement.hpp"
#include "potcap/linops.hpp"
#include "potcap/report.hpp"

namespace potcap {

/// One summand p * rho_L (x) phi on B_L (x) B_R (x) E.
struct Block {
  double prob = 0.0;
  Matrix left_state;  // d_left x d_left density matrix
  Matrix phi;         // (d_right d_e) x (d_right d_e); must be pure
  int d_left = 1;
  int d_right = 1;
};

/// Direct sum of tensor products on B (x) E. embeddings[i] is a
/// d_b x (d_left d_right) isometry placing block i inside B; when empty the
/// blocks are stacked along the computational basis of B.
struct BlockDecomposition {
  int d_b = 0;
  int d_e = 0;
  std::vector<Block> blocks;
  std::vector<Matrix> embeddings;

  Matrix embedding(std::size_t i) const;
};

/// Pure-block helper: phi = |psi><psi| with psi on B_R (x) E.
Block make_block(double prob, const Matrix& left_state, const Vector& psi, int d_right);

/// Random decomposition with hidden structure: B is split into blocks of
/// sizes d_left * d_right (at most `max_blocks`), each with a random mixed
/// left state and an entangled pure phi, then rotated by a random unitary.
BlockDecomposition random_block_decomposition(int d_b, int d_e, std::uint64_t seed,
                                              int max_blocks = 2);

/// Throws DimensionError or InvariantViolation when the decomposition is malformed.
void check_block_decomposition(const BlockDecomposition& bd, double tol = 1e-7);

/// Assembles the state on B (x) E (labels "B", "E").
DensityMatrix construct_block_state(const BlockDecomposition& bd);

/// sum_i p_i S(phi_i restricted to B_R): the value S(B) - S(BE) takes on block states.
double block_entropy_sum(const BlockDecomposition& bd);

/// S(B) - S(BE) for a state on B (x) E.
double coherent_difference(const Matrix& rho, int d_b, int d_e);

enum class EqualityMeasure { c_arrow, g, eof };
std::string_view to_string(EqualityMeasure m);
EqualityMeasure equality_measure_from_string(std::string_view s);

struct EqualityReport {
  EqualityMeasure which = EqualityMeasure::eof;
  double lhs = 0.0;  // S(B) - S(BE)
  double rhs = 0.0;  // the chosen measure
  double gap = 0.0;  // rhs - lhs
  BoundDirection rhs_direction = BoundDirection::heuristic;
  bool candidate = false;  // |gap| < 1e-3
};

struct EqualityOptions {
  CArrowOptions c_arrow;
  GMeasureOptions g;
  EntanglementOptions eof;
};

EqualityReport verify_equality_case(const Matrix& rho, int d_b, int d_e, EqualityMeasure which,
                                    const EqualityOptions& opts = {});

struct BlockVerification {
  bool passed = false;
  bool invariants_ok = false;
  double distance = 0.0;  // Frobenius distance to the assembled candidate
  std::vector<std::string> problems;
};

BlockVerification verify_block_form(const Matrix& rho, const BlockDecomposition& candidate,
                                    double tol = 1e-7);

struct DiscoveryResult {
  std::string status;  // verified, undecided
  std::optional<BlockDecomposition> decomposition;
  BlockVerification verification;
};

/// Heuristic: splits B along the eigenspaces of a random Hermitian element of
/// the commutant of {tr_E[(I (x) X) rho]}, factors each block, then verifies.
DiscoveryResult discover_block_form(const Matrix& rho, int d_b, int d_e,
                                    std::uint64_t seed = 0x5eed, double tol = 1e-7);

}  // namespace potcap
