#pragma once

#include <functional>
#include <string>
#include <vector>

#include "potcap/channels.hpp"
#include "potcap/optimize.hpp"
#include "potcap/report.hpp"

namespace potcap {

/// Probability-weighted list of normalized states.
struct Ensemble {
  std::vector<double> probs;
  std::vector<Matrix> states;

  Matrix average() const;
};

struct CapacityReport {
  std::string quantity;  // chi, msw_chi, q1, p1, c_e, q_a
  std::string channel;
  double value = 0.0;      // capacity semantics (clamped at 0 where applicable)
  double raw_value = 0.0;  // raw optimum of the objective
  BoundDirection bound_direction = BoundDirection::certified_lower;
  // Dual estimate for the concave problems (value + Frank-Wolfe gap); NaN otherwise.
  double upper_estimate = std::numeric_limits<double>::quiet_NaN();
  OptimDiagnostics diagnostics;
  Matrix best_input;
  Ensemble best_ensemble;
};

struct CapacityOptions {
  OptimOptions optim;
  // Ensemble size for chi and p1 (0 selects d_in^2).
  int ensemble_size = 0;
  // Extra starting points: ensembles for chi/p1, single states (one-element
  // ensembles) for the others.
  std::vector<Ensemble> warm_starts;
  // Frank-Wolfe gap below which a concave maximization counts as certified.
  double certificate_tol = 1e-6;
};

CapacityReport holevo_capacity(const KrausChannel& ch, const CapacityOptions& opts = {});
CapacityReport msw_chi(const KrausChannel& ch, const CapacityOptions& opts = {});
CapacityReport q1(const KrausChannel& ch, const CapacityOptions& opts = {});
CapacityReport p1(const KrausChannel& ch, const CapacityOptions& opts = {});
CapacityReport c_e(const KrausChannel& ch, const CapacityOptions& opts = {});
CapacityReport q_a(const KrausChannel& ch, const CapacityOptions& opts = {});

/// Dispatch by quantity name.
CapacityReport compute_capacity(const std::string& quantity, const KrausChannel& ch,
                                const CapacityOptions& opts = {});

struct ConcaveMax {
  double value = 0.0;
  Matrix rho;
  double gap = 0.0;  // Frank-Wolfe duality gap at rho
  MultiStartResult run;
};

/// max_rho S(N(rho)); concave, so the gap certifies the value.
ConcaveMax max_output_entropy(const KrausChannel& ch, const OptimOptions& opts = {});

namespace detail {

/// Concave functional of a density matrix with its Hermitian gradient.
using StateFunctional = std::function<double(const Matrix& rho, Matrix* grad)>;

/// Maximizes a concave functional over density matrices of dimension d from
/// each warm state, the maximally mixed state (always when `warm` is empty),
/// and `opts.restarts` random starts.
ConcaveMax maximize_concave(const StateFunctional& f, int d, const std::vector<Matrix>& warm,
                            const OptimOptions& opts, bool include_mixed = true);

/// d x rank factor with columns sqrt(lambda_k) e_k over the largest eigenpairs.
Matrix state_factor(const Matrix& rho, int rank);

}  // namespace detail

}  // namespace potcap
