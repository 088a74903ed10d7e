#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "potcap/capacities.hpp"
#include "potcap/channels.hpp"
#include "potcap/optimize.hpp"
#include "potcap/report.hpp"

namespace potcap {

struct BoundReport {
  std::string target;  // qa_p, chi_p_upper, qp_upper, pp_upper, channel_eof
  std::string channel;
  double value = 0.0;
  BoundDirection bound_direction = BoundDirection::heuristic;
  std::vector<std::pair<std::string, double>> components;
  OptimDiagnostics diagnostics;
  Matrix best_input;
  Matrix kraus_rotation;  // channel_eof and its aliases: the minimizing rotation

  double component(const std::string& name) const;
};

struct PotentialOptions {
  PotentialOptions() {
    optim.restarts = 4;
    optim.max_iterations = 400;
  }
  OptimOptions optim;
  // Kraus-rotation rows for channel_eof (0 selects k * d_out).
  int rotation_size = 0;
  // Inner-solve budgets for nested searches.
  int inner_iterations = 40;
  int final_inner_restarts = 6;
  // Ensemble size for chi_p_upper (0 selects d_in^2).
  int ensemble_size = 0;
};

BoundReport q_a_potential(const KrausChannel& ch, const OptimOptions& opts = {});

struct ActivationWitness {
  std::string kind;  // trivial, prepare_mixed, trace_out
  KrausChannel aux;
  double target = 0.0;    // q_a_potential
  double achieved = 0.0;  // q_a of ch (x) aux
  double aux_q_a = 0.0;
  bool verified = false;  // achieved >= target - 1e-3 and aux_q_a <= 1e-6
};

ActivationWitness activation_witness_qa(const KrausChannel& ch, const OptimOptions& opts = {});

/// Output ordering B (x) B'; Kraus operators K'_j (x) |j>, K' = u applied to the Kraus index.
struct LiftedChannel {
  KrausChannel original;
  KrausChannel lifted;
  Matrix kraus_choice;
};

LiftedChannel canonical_lift(const KrausChannel& ch, const std::optional<Matrix>& u = std::nullopt);

/// Both orderings of the channel entanglement of formation. The reported value
/// is the min-max one: the inner maximum is concave and certified, so every
/// rotation gives an upper bound.
BoundReport channel_eof(const KrausChannel& ch, const PotentialOptions& opts = {});
BoundReport qp_upper(const KrausChannel& ch, const PotentialOptions& opts = {});
BoundReport pp_upper(const KrausChannel& ch, const PotentialOptions& opts = {});
BoundReport chi_p_upper(const KrausChannel& ch, const PotentialOptions& opts = {});

/// sum_j H(K'_j rho K'_j^dagger) for K' = u applied to the Kraus index.
double lifted_objective(const KrausChannel& ch, const Matrix& u, const Matrix& rho);

enum class Verdict { yes, no, undecided };
std::string_view to_string(Verdict v);

struct ClassifyReport {
  Verdict verdict = Verdict::undecided;
  std::string method;  // trivial, npt, ppt_decidable, classical_output, ppt_only
  double ppt_min_eigenvalue = 0.0;
  std::string evidence;
};

ClassifyReport is_entanglement_breaking(const KrausChannel& ch);
ClassifyReport is_hadamard(const KrausChannel& ch);

struct DegradabilityOptions {
  OptimOptions optim;
  double threshold = 1e-5;
};

struct DegradabilityReport {
  bool degradable = false;
  std::string verdict;  // degradable, no_map_found
  std::string method;   // measure_prepare, fit
  double residual = 0.0;
  std::optional<KrausChannel> degrading_map;
  std::vector<double> restart_residuals;
};

DegradabilityReport is_degradable(const KrausChannel& ch, const DegradabilityOptions& opts = {});

/// Frobenius distance between the Choi matrices of D o N and N^c.
double degrading_residual(const KrausChannel& ch, const KrausChannel& d);

struct AuditEntry {
  std::string capacity;  // classical, quantum, private
  std::string lower_name;
  double lower = 0.0;
  std::string upper_name;
  double upper = 0.0;
  double margin = 0.0;  // log2 d_min - upper
  std::string verdict;  // perfect, zero_potential, not_activatable_to_perfect, inconclusive
};

struct PerfectionAudit {
  std::string channel;
  int d_min = 0;
  double log_d_min = 0.0;
  double margin_threshold = 1e-3;
  std::vector<AuditEntry> entries;
  std::vector<BoundReport> bounds;
  std::vector<CapacityReport> capacities;
};

PerfectionAudit perfection_audit(const KrausChannel& ch, const PotentialOptions& opts = {});

}  // namespace potcap
