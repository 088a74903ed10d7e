#include "potcap/entanglement.hpp"

#include <algorithm>
#include <cmath>

#include "potcap/entropics.hpp"
#include "potcap/error.hpp"
#include "potcap/parametrize.hpp"

namespace potcap {

namespace {

using RowMajor = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// View of a vector on C^{d_b} (x) C^{d_e} as a d_b x d_e matrix.
Matrix reshape_bipartite(const Vector& y, int d_b, int d_e) {
  return Eigen::Map<const RowMajor>(y.data(), d_b, d_e);
}

Vector flatten_bipartite(const Matrix& m) {
  RowMajor r = m;
  return Eigen::Map<const Vector>(r.data(), r.size());
}

struct BipartiteInput {
  Matrix rho;
  int d_b;
  int d_e;
};

BipartiteInput split_first(const DensityMatrix& rho) {
  const auto& dims = rho.dims().dims();
  if (dims.size() < 2) throw DimensionError("bipartite state needs at least two labels");
  const int d_b = dims.front();
  return {rho.matrix(), d_b, rho.dim() / d_b};
}

void check_bipartite(const Matrix& rho, int d_b, int d_e) {
  if (d_b < 1 || d_e < 1 || rho.rows() != static_cast<Eigen::Index>(d_b) * d_e) {
    throw DimensionError("bipartite dimensions do not match the state");
  }
  check_density(rho);
}

Decomposition decomposition_from(const Matrix& w, const Matrix& v, int d_b, int d_e) {
  Decomposition out;
  const SystemDims dims({"B", "E"}, {d_b, d_e});
  for (Eigen::Index j = 0; j < v.rows(); ++j) {
    const Vector y = w * v.row(j).adjoint();
    const double p = y.squaredNorm();
    if (p < 1e-14) continue;
    out.probs.push_back(p);
    out.states.emplace_back(y / std::sqrt(p), dims);
  }
  double total = 0.0;
  for (double p : out.probs) total += p;
  for (double& p : out.probs) p /= total;
  return out;
}

int resolve_elements(int requested, int d_e) {
  const int n = requested > 0 ? requested : d_e * d_e;
  if (n < d_e) throw ConfigError("POVM element count must be at least d_E");
  return n;
}

}  // namespace

Matrix Decomposition::reconstruct() const {
  if (states.empty()) return Matrix();
  const auto d = states.front().vector().size();
  Matrix m = Matrix::Zero(d, d);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& s = states[i].vector();
    m += probs[i] * s * s.adjoint();
  }
  return m;
}

Povm povm_from_isometry(const Matrix& v) {
  Povm p;
  for (Eigen::Index j = 0; j < v.rows(); ++j) {
    const Vector w = v.row(j).adjoint();
    p.elements.push_back(w * w.adjoint());
  }
  return p;
}

void check_povm(const Povm& p, double tol) {
  if (p.elements.empty()) throw InvariantViolation("empty POVM");
  const auto d = p.elements.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& e : p.elements) {
    if (e.rows() != d || e.cols() != d) throw DimensionError("POVM elements differ in size");
    if (hermitian_eigen(hermitian_part(e)).values.minCoeff() < -kEigClip) {
      throw InvariantViolation("POVM element is not PSD");
    }
    sum += e;
  }
  if ((sum - Matrix::Identity(d, d)).norm() > tol) {
    throw InvariantViolation("POVM elements do not sum to the identity");
  }
}

double eof_decomposition_value(const Matrix& w, const Matrix& v, int d_b, int d_e) {
  return detail::eof_objective(w, v, d_b, d_e, nullptr, nullptr);
}

EofResult entanglement_of_formation(const DensityMatrix& rho_BE,
                                    const EntanglementOptions& opts) {
  const auto in = split_first(rho_BE);
  return entanglement_of_formation(in.rho, in.d_b, in.d_e, opts);
}

EofResult entanglement_of_formation(const Matrix& rho, int d_b, int d_e,
                                    const EntanglementOptions& opts) {
  check_bipartite(rho, d_b, d_e);
  const Matrix w = eigen_purification(hermitian_part(rho));
  const int r = static_cast<int>(w.cols());
  EofResult out;
  if (r == 1) {
    const Matrix v = Matrix::Identity(1, 1);
    out.value = detail::eof_objective(w, v, d_b, d_e, nullptr, nullptr);
    out.best_isometry = v;
    out.best_decomposition = decomposition_from(w, v, d_b, d_e);
    out.diagnostics.starts = 0;
    out.diagnostics.converged = true;
    return out;
  }
  const int m = opts.decomposition_size > 0 ? opts.decomposition_size : r * r;
  if (m < r) throw ConfigError("decomposition size must be at least the rank");

  const IsometryParam param(m, r);
  const Objective f = [&](const RealVector& x, RealVector* grad) {
    const auto p = param.evaluate(x);
    Matrix gv;
    const double val = detail::eof_objective(w, p.v, d_b, d_e, grad ? &gv : nullptr, nullptr);
    if (grad) *grad = param.pullback(p, gv);
    return val;
  };
  OptimOptions o = opts.optim;
  o.target_value = std::max(o.target_value, 1e-12);
  const std::vector<RealVector> starts{param.encode(Matrix::Identity(r, r))};
  const auto run = multi_start_minimize(
      f, starts, [&](std::mt19937_64& rng) { return gaussian_vector(rng, param.size()); }, o);
  const Matrix v = param.evaluate(run.best.x).v;
  out.value = std::max(0.0, run.best.value);
  out.best_isometry = v;
  out.best_decomposition = decomposition_from(w, v, d_b, d_e);
  out.diagnostics = diagnostics_from(run, false);
  return out;
}

namespace detail {

double eof_objective(const Matrix& w, const Matrix& v, int d_b, int d_e, Matrix* grad_v,
                     Matrix* grad_w) {
  double total = 0.0;
  const bool need = grad_v != nullptr || grad_w != nullptr;
  if (grad_v) grad_v->resize(v.rows(), v.cols());
  if (grad_w) *grad_w = Matrix::Zero(w.rows(), w.cols());
  for (Eigen::Index j = 0; j < v.rows(); ++j) {
    const Vector y = w * v.row(j).adjoint();
    const Matrix psi = reshape_bipartite(y, d_b, d_e);
    const auto h = weighted_entropy(psi * psi.adjoint(), need);
    total += h.value;
    if (need) {
      const Vector z = flatten_bipartite(h.gradient * psi);
      if (grad_v) grad_v->row(j) = 2.0 * (z.adjoint() * w);
      if (grad_w) *grad_w += 2.0 * z * v.row(j);
    }
  }
  return total;
}

double povm_objective(const Matrix& sigma, int d_b, int d_e, const Matrix& v,
                      Matrix* grad_v, Matrix* grad_sigma) {
  // blocks[e * d_e + f](b, c) = sigma((b, e), (c, f))
  std::vector<Matrix> blocks(static_cast<std::size_t>(d_e * d_e), Matrix(d_b, d_b));
  for (int e = 0; e < d_e; ++e) {
    for (int f = 0; f < d_e; ++f) {
      auto& blk = blocks[static_cast<std::size_t>(e * d_e + f)];
      for (int b = 0; b < d_b; ++b) {
        for (int c = 0; c < d_b; ++c) blk(b, c) = sigma(b * d_e + e, c * d_e + f);
      }
    }
  }
  const bool need_grad = grad_v != nullptr || grad_sigma != nullptr;
  if (grad_v) grad_v->resize(v.rows(), v.cols());
  if (grad_sigma) *grad_sigma = Matrix::Zero(sigma.rows(), sigma.cols());
  double total = 0.0;
  for (Eigen::Index j = 0; j < v.rows(); ++j) {
    Matrix x = Matrix::Zero(d_b, d_b);
    for (int e = 0; e < d_e; ++e) {
      for (int f = 0; f < d_e; ++f) {
        const cplx coef = v(j, e) * std::conj(v(j, f));
        if (coef != cplx(0.0)) x += coef * blocks[static_cast<std::size_t>(e * d_e + f)];
      }
    }
    const auto h = weighted_entropy(hermitian_part(x), need_grad);
    total += h.value;
    if (grad_v) {
      Matrix t(d_e, d_e);
      for (int e = 0; e < d_e; ++e) {
        for (int f = 0; f < d_e; ++f) {
          t(e, f) = h.gradient.cwiseProduct(blocks[static_cast<std::size_t>(e * d_e + f)]
                                                .transpose())
                        .sum();
        }
      }
      grad_v->row(j) = 2.0 * (v.row(j) * t);
    }
    if (grad_sigma) {
      const Vector w = v.row(j).adjoint();
      *grad_sigma += kron(h.gradient, Matrix(w * w.adjoint()));
    }
  }
  return total;
}

Matrix eigenbasis_povm(const Matrix& sigma, int d_b, int d_e, int elements) {
  const auto eig = hermitian_eigen(hermitian_part(trace_out_left(sigma, d_b, d_e)));
  Matrix v = Matrix::Zero(elements, d_e);
  v.topRows(d_e) = eig.vectors.adjoint();
  return v;
}

PovmMin minimize_povm(const Matrix& sigma, int d_b, int d_e, int elements,
                      const std::vector<Matrix>& warm, const OptimOptions& opts) {
  const IsometryParam param(elements, d_e);
  const Objective f = [&](const RealVector& x, RealVector* grad) {
    const auto p = param.evaluate(x);
    Matrix gv;
    const double val = povm_objective(sigma, d_b, d_e, p.v, grad ? &gv : nullptr, nullptr);
    if (grad) *grad = param.pullback(p, gv);
    return val;
  };
  std::vector<RealVector> starts;
  for (const auto& w : warm) {
    if (w.rows() == elements && w.cols() == d_e) starts.push_back(param.encode(w));
  }
  starts.push_back(param.encode(eigenbasis_povm(sigma, d_b, d_e, elements)));
  OptimOptions o = opts;
  o.target_value = std::max(o.target_value, 1e-13);
  PovmMin out;
  out.run = multi_start_minimize(
      f, starts, [&](std::mt19937_64& rng) { return gaussian_vector(rng, param.size()); }, o);
  out.v = param.evaluate(out.run.best.x).v;
  out.value = out.run.best.value;
  return out;
}

}  // namespace detail

CArrowResult c_arrow(const DensityMatrix& sigma_BE, const CArrowOptions& opts) {
  const auto in = split_first(sigma_BE);
  return c_arrow(in.rho, in.d_b, in.d_e, opts);
}

CArrowResult c_arrow(const Matrix& sigma, int d_b, int d_e, const CArrowOptions& opts) {
  check_bipartite(sigma, d_b, d_e);
  const int n = resolve_elements(opts.elements, d_e);
  CArrowResult out;
  out.entropy_b = entropy(trace_out_right(sigma, d_b, d_e));
  const auto best = detail::minimize_povm(sigma, d_b, d_e, n, {}, opts.optim);
  out.min_conditional = std::clamp(best.value, 0.0, out.entropy_b);
  out.value = out.entropy_b - out.min_conditional;
  out.povm = povm_from_isometry(best.v);
  for (Eigen::Index j = 0; j < best.v.rows(); ++j) {
    const Vector w = best.v.row(j).adjoint();
    const Matrix proj = kron(Matrix::Identity(d_b, d_b), Matrix(w));
    const Matrix x = proj.adjoint() * sigma * proj;
    const double r = x.trace().real();
    out.outcome_probs.push_back(r);
    out.conditional_states.push_back(r > 1e-14 ? Matrix(x / r) : x);
  }
  out.diagnostics = diagnostics_from(best.run, false);
  for (auto& v : out.diagnostics.restart_values) v = out.entropy_b - v;
  return out;
}

GMeasureResult g_measure(const DensityMatrix& rho_BE, const GMeasureOptions& opts) {
  const auto in = split_first(rho_BE);
  return g_measure(in.rho, in.d_b, in.d_e, opts);
}

GMeasureResult g_measure(const Matrix& rho, int d_b, int d_e, const GMeasureOptions& opts) {
  check_bipartite(rho, d_b, d_e);
  const Matrix w = eigen_purification(hermitian_part(rho));
  const int r = static_cast<int>(w.cols());
  const int n = d_e * d_e;
  const int k = opts.components > 0 ? opts.components : r * r;
  const int s = opts.component_rank > 0 ? opts.component_rank : std::min(r, 2);
  if (k * s < r) throw ConfigError("G measure: components * rank must cover the state rank");

  GMeasureResult out;
  EntanglementOptions eo;
  eo.optim = opts.optim;
  eo.decomposition_size = std::max(k, r);
  const auto eof = entanglement_of_formation(rho, d_b, d_e, eo);
  out.eof_value = eof.value;

  auto use_eof = [&] {
    out.value = eof.value;
    out.probs = eof.best_decomposition.probs;
    out.components.clear();
    out.component_c_arrow.clear();
    for (const auto& st : eof.best_decomposition.states) {
      out.components.push_back(st.vector() * st.vector().adjoint());
      const Matrix psi = reshape_bipartite(st.vector(), d_b, d_e);
      out.component_c_arrow.push_back(entropy(Matrix(psi * psi.adjoint())));
    }
  };
  if (r == 1 || eof.value <= 1e-12) {
    // Pure inputs admit only the trivial decomposition; a zero E_F forces G = 0.
    use_eof();
    out.diagnostics = eof.diagnostics;
    return out;
  }

  const IsometryParam param(k * s, r);
  const Matrix identity_e = Matrix::Identity(d_e, d_e);
  std::vector<Matrix> warm(static_cast<std::size_t>(k));
  OptimOptions inner;
  inner.restarts = 0;
  inner.max_iterations = opts.inner_iterations;
  inner.stall_window = 10;

  // Sum over components of S(B)_g minus the (warm-started) inner minimum.
  // The inner minimizer's gradient with respect to omega_g follows from
  // Danskin's theorem.
  const Objective f = [&](const RealVector& x, RealVector* grad) {
    const auto p = param.evaluate(x);
    const auto dp = decompose(w, p.v, k, s);
    std::vector<Matrix> grads(static_cast<std::size_t>(k));
    double total = 0.0;
    for (int g = 0; g < k; ++g) {
      const auto gi = static_cast<std::size_t>(g);
      const Matrix& omega = dp.states[gi];
      const auto hb = weighted_entropy(trace_out_right(omega, d_b, d_e), grad != nullptr);
      if (omega.trace().real() < 1e-14) {
        if (grad) grads[gi] = Matrix::Zero(omega.rows(), omega.cols());
        continue;
      }
      std::vector<Matrix> seeds;
      if (warm[gi].size() > 0) seeds.push_back(warm[gi]);
      const auto best = detail::minimize_povm(omega, d_b, d_e, n, seeds, inner);
      warm[gi] = best.v;
      Matrix gs;
      const double m = detail::povm_objective(omega, d_b, d_e, best.v, nullptr,
                                              grad ? &gs : nullptr);
      total += hb.value - m;
      if (grad) grads[gi] = kron(hb.gradient, identity_e) - gs;
    }
    if (grad) *grad = param.pullback(p, decomposition_pullback(w, p.v, k, s, grads));
    return total;
  };

  // The exact E_F point has empty second rows where the objective is not
  // smooth; start from a slightly mixed neighbour instead.
  Matrix seed = 1e-2 * random_gaussian(k * s, r, opts.optim.seed ^ 0x9e3779b97f4a7c15ULL);
  for (Eigen::Index g = 0; g < eof.best_isometry.rows() && g < k; ++g) {
    seed.row(g * s) = eof.best_isometry.row(g);
  }
  const std::vector<RealVector> starts{param.encode(seed)};
  OptimOptions o = opts.optim;
  o.target_value = std::max(o.target_value, 1e-12);
  const auto run = multi_start_minimize(
      f, starts, [&](std::mt19937_64& rng) { return gaussian_vector(rng, param.size()); }, o);
  out.diagnostics = diagnostics_from(run, false);

  // Re-evaluate the best decomposition with a full inner search.
  const Matrix v = param.evaluate(run.best.x).v;
  const auto dp = decompose(w, v, k, s);
  OptimOptions final_inner = opts.optim;
  final_inner.restarts = opts.final_inner_restarts;
  double value = 0.0;
  for (int g = 0; g < k; ++g) {
    const Matrix& omega = dp.states[static_cast<std::size_t>(g)];
    const double p = omega.trace().real();
    if (p < 1e-14) continue;
    final_inner.seed = opts.optim.seed + 7919ULL * static_cast<std::uint64_t>(g + 1);
    const auto best = detail::minimize_povm(omega, d_b, d_e, n,
                                            {warm[static_cast<std::size_t>(g)]}, final_inner);
    const double hb = weighted_entropy(trace_out_right(omega, d_b, d_e), false).value;
    const double c = std::clamp(hb - best.value, 0.0, hb);
    value += c;
    out.probs.push_back(p);
    out.components.push_back(omega / p);
    out.component_c_arrow.push_back(c / p);
  }
  out.value = value;
  if (out.value > eof.value) use_eof();
  return out;
}

PptResult ppt_check(const DensityMatrix& rho, const std::vector<std::string>& cut,
                    double tol) {
  const auto& dims = rho.dims().dims();
  Matrix m = rho.matrix();
  int d_cut = 1;
  for (const auto& label : cut) {
    const auto idx = rho.dims().index_of(label);
    m = partial_transpose(m, dims, idx);
    d_cut *= dims[idx];
  }
  const int d_rest = rho.dim() / d_cut;
  PptResult out;
  out.min_eigenvalue = hermitian_eigen(hermitian_part(m)).values(0);
  out.is_ppt = out.min_eigenvalue >= -tol;
  const int lo = std::min(d_cut, d_rest), hi = std::max(d_cut, d_rest);
  out.decidable = lo == 1 || (lo == 2 && hi <= 3);
  out.status = out.decidable ? "decidable" : "ppt_only";
  return out;
}

PptResult ppt_check(const Matrix& rho, int d_a, int d_b, double tol) {
  const DensityMatrix dm(rho, SystemDims({"A", "B"}, {d_a, d_b}));
  return ppt_check(dm, {"B"}, tol);
}

}  // namespace potcap
