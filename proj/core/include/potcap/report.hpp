#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "potcap/optimize.hpp"

namespace potcap {

/// How a reported number relates to the true optimum it estimates.
enum class BoundDirection {
  certified_lower,  // value of a feasible point of a maximization
  certified_upper,  // value of a feasible point of a minimization
  certified_exact,  // concave problem with a convergence certificate
  heuristic,        // nested nonconvex optimization; no direction guaranteed
};

std::string_view to_string(BoundDirection d);
BoundDirection bound_direction_from_string(std::string_view s);

struct OptimDiagnostics {
  int starts = 0;
  int iterations = 0;
  int evaluations = 0;
  std::vector<double> restart_values;  // objective per start, in problem sign
  double spread = 0.0;                 // best minus worst start
  double grad_norm = 0.0;
  bool converged = false;
  // Frank-Wolfe duality gap for concave maximizations over density matrices.
  double duality_gap = -1.0;
};

/// Converts the minimizer's output; `maximize` flips the sign back.
OptimDiagnostics diagnostics_from(const MultiStartResult& r, bool maximize);

}  // namespace potcap
