#pragma once

#include <string>
#include <vector>

#include "potcap/linops.hpp"
#include "potcap/optimize.hpp"
#include "potcap/report.hpp"

namespace potcap {

inline constexpr double kTolDecomp = 1e-7;

struct Decomposition {
  std::vector<double> probs;
  std::vector<PureState> states;

  /// sum_i p_i |phi_i><phi_i|
  Matrix reconstruct() const;
};

struct Povm {
  std::vector<Matrix> elements;
};

/// Rank-1 POVM {w_j w_j^dagger} read off the rows of an isometry: w_j = row_j^dagger.
Povm povm_from_isometry(const Matrix& v);
void check_povm(const Povm& p, double tol = 1e-8);

struct EntanglementOptions {
  OptimOptions optim;
  // Decomposition size m for E_F; 0 selects r^2.
  int decomposition_size = 0;
};

struct EofResult {
  double value = 0.0;
  Decomposition best_decomposition;
  Matrix best_isometry;  // m x r, acting on the eigen-purification
  BoundDirection direction = BoundDirection::certified_upper;
  OptimDiagnostics diagnostics;
};

/// E_F across the split of `rho_BE` into its first label versus the rest.
EofResult entanglement_of_formation(const DensityMatrix& rho_BE,
                                    const EntanglementOptions& opts = {});
EofResult entanglement_of_formation(const Matrix& rho, int d_b, int d_e,
                                    const EntanglementOptions& opts = {});

/// Value of sum_i p_i S(phi_i^B) for the decomposition given by the m x r
/// isometry `v` of the eigen-purification `w` of rho.
double eof_decomposition_value(const Matrix& w, const Matrix& v, int d_b, int d_e);

struct CArrowOptions {
  OptimOptions optim;
  // Number of rank-1 POVM elements; 0 selects d_E^2.
  int elements = 0;
};

struct CArrowResult {
  double value = 0.0;
  double entropy_b = 0.0;
  double min_conditional = 0.0;  // sum_j r_j S(sigma_j^B)
  Povm povm;
  std::vector<double> outcome_probs;
  std::vector<Matrix> conditional_states;
  // Any POVM is feasible, so the reported value never exceeds the true C_<-.
  BoundDirection direction = BoundDirection::certified_lower;
  OptimDiagnostics diagnostics;
};

CArrowResult c_arrow(const DensityMatrix& sigma_BE, const CArrowOptions& opts = {});
CArrowResult c_arrow(const Matrix& sigma, int d_b, int d_e, const CArrowOptions& opts = {});

struct GMeasureOptions {
  GMeasureOptions() {
    optim.restarts = 4;
    optim.max_iterations = 200;
  }
  OptimOptions optim;
  // Number of mixed components K (0 selects r^2) and the rank of each (0 selects min(r, 2)).
  int components = 0;
  int component_rank = 0;
  // Local iterations of the warm-started inner POVM search per outer evaluation.
  int inner_iterations = 60;
  // Random restarts per component in the final inner re-evaluation.
  int final_inner_restarts = 6;
};

struct GMeasureResult {
  double value = 0.0;
  std::vector<double> probs;
  std::vector<Matrix> components;  // normalized states on BE
  std::vector<double> component_c_arrow;
  double eof_value = 0.0;  // E_F at the seed decomposition
  BoundDirection direction = BoundDirection::heuristic;
  OptimDiagnostics diagnostics;
};

GMeasureResult g_measure(const DensityMatrix& rho_BE, const GMeasureOptions& opts = {});
GMeasureResult g_measure(const Matrix& rho, int d_b, int d_e, const GMeasureOptions& opts = {});

struct PptResult {
  bool is_ppt = true;
  double min_eigenvalue = 0.0;
  bool decidable = false;
  std::string status;  // "decidable" or "ppt_only"
};

/// Partial transpose on the labels in `cut`; the rest of the system is the other side.
PptResult ppt_check(const DensityMatrix& rho, const std::vector<std::string>& cut,
                    double tol = 1e-10);
PptResult ppt_check(const Matrix& rho, int d_a, int d_b, double tol = 1e-10);

// Building blocks shared with the capacity and potential estimators.
namespace detail {

/// sum_j H(tr_E y_j y_j^dagger) with y_j = w v_j^dagger (v_j the rows of v),
/// with optional gradients with respect to v and w.
double eof_objective(const Matrix& w, const Matrix& v, int d_b, int d_e, Matrix* grad_v,
                     Matrix* grad_w);

/// sum_j H(<w_j| sigma |w_j>) over rank-1 elements given by the rows of v
/// (n x d_e isometry). Optionally returns the pullback to v and the gradient
/// with respect to sigma (Hermitian, d_b d_e square).
double povm_objective(const Matrix& sigma, int d_b, int d_e, const Matrix& v,
                      Matrix* grad_v, Matrix* grad_sigma);

struct PovmMin {
  double value = 0.0;
  Matrix v;
  MultiStartResult run;
};

/// Minimizes povm_objective for unnormalized PSD sigma. The eigenbasis of
/// sigma_E and every matrix in `warm` are used as starting points before
/// `opts.restarts` random ones.
PovmMin minimize_povm(const Matrix& sigma, int d_b, int d_e, int elements,
                      const std::vector<Matrix>& warm, const OptimOptions& opts);

/// Isometry whose first rows are the conjugated eigenvectors of tr_B sigma.
Matrix eigenbasis_povm(const Matrix& sigma, int d_b, int d_e, int elements);

}  // namespace detail

}  // namespace potcap
