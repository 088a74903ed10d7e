#include "potcap/report.hpp"

#include <algorithm>

#include "potcap/error.hpp"

namespace potcap {

std::string_view to_string(BoundDirection d) {
  switch (d) {
    case BoundDirection::certified_lower: return "certified_lower";
    case BoundDirection::certified_upper: return "certified_upper";
    case BoundDirection::certified_exact: return "certified_exact";
    case BoundDirection::heuristic: return "heuristic";
  }
  return "heuristic";
}

BoundDirection bound_direction_from_string(std::string_view s) {
  if (s == "certified_lower") return BoundDirection::certified_lower;
  if (s == "certified_upper") return BoundDirection::certified_upper;
  if (s == "certified_exact") return BoundDirection::certified_exact;
  if (s == "heuristic") return BoundDirection::heuristic;
  throw ConfigError("unknown bound direction '" + std::string(s) + "'");
}

OptimDiagnostics diagnostics_from(const MultiStartResult& r, bool maximize) {
  OptimDiagnostics d;
  d.starts = static_cast<int>(r.restart_values.size());
  d.iterations = r.total_iterations;
  d.evaluations = r.total_evaluations;
  d.restart_values = r.restart_values;
  if (maximize) {
    for (auto& v : d.restart_values) v = -v;
  }
  if (!d.restart_values.empty()) {
    const auto [lo, hi] = std::minmax_element(d.restart_values.begin(), d.restart_values.end());
    d.spread = *hi - *lo;
  }
  d.grad_norm = r.best.grad_norm;
  d.converged = r.best.converged;
  return d;
}

}  // namespace potcap
