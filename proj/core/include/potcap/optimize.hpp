#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "potcap/linops.hpp"

namespace potcap {

/// Settings shared by every multi-restart optimizer in the library.
struct OptimOptions {
  int restarts = 20;
  int max_iterations = 2000;
  // Converged when the objective improves by less than `ftol` over the last
  // `stall_window` iterations...
  double ftol = 1e-8;
  int stall_window = 50;
  // ...or when the gradient norm drops below `gtol`.
  double gtol = 1e-9;
  // Stop early once the objective reaches this value (minimization).
  double target_value = -std::numeric_limits<double>::infinity();
  int lbfgs_memory = 12;
  std::uint64_t seed = 0x5eed;
  // Use central differences instead of the analytic gradient.
  bool numerical_gradient = false;
  double fd_step = 1e-5;
};

/// Objective for minimization. When `grad` is non-null it must be filled.
using Objective = std::function<double(const RealVector& x, RealVector* grad)>;

struct LocalResult {
  RealVector x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  double grad_norm = 0.0;
  bool converged = false;
};

struct MultiStartResult {
  LocalResult best;
  std::vector<double> restart_values;  // final value of every start, in order
  int best_start = 0;
  int total_iterations = 0;
  int total_evaluations = 0;
};

RealVector central_difference_gradient(const Objective& f, const RealVector& x,
                                       double step);

LocalResult minimize_lbfgs(const Objective& f, RealVector x0, const OptimOptions& opts);

using Sampler = std::function<RealVector(std::mt19937_64&)>;

/// Runs L-BFGS from every explicit start, then from `opts.restarts` random
/// draws of `sampler`, and keeps the lowest value. Deterministic given the seed.
MultiStartResult multi_start_minimize(const Objective& f,
                                      const std::vector<RealVector>& starts,
                                      const Sampler& sampler, const OptimOptions& opts);

/// Golden-section search for the minimum of a unimodal scalar function.
struct ScalarMin {
  double x = 0.0;
  double value = 0.0;
};
ScalarMin golden_section(const std::function<double(double)>& f, double lo, double hi,
                         double tol);

RealVector gaussian_vector(std::mt19937_64& rng, Eigen::Index n);

}  // namespace potcap
