#include "potcap/capacities.hpp"

#include <algorithm>
#include <cmath>

#include "potcap/entanglement.hpp"
#include "potcap/entropics.hpp"
#include "potcap/error.hpp"
#include "potcap/parametrize.hpp"

namespace potcap {

namespace {

Sampler gaussian_sampler(Eigen::Index n) {
  return [n](std::mt19937_64& rng) { return gaussian_vector(rng, n); };
}

Ensemble ensemble_from(const std::vector<Matrix>& omegas) {
  Ensemble e;
  for (const auto& w : omegas) {
    const double p = w.trace().real();
    if (p < 1e-12) continue;
    e.probs.push_back(p);
    e.states.push_back(w / p);
  }
  double total = 0.0;
  for (double p : e.probs) total += p;
  for (double& p : e.probs) p /= total;
  return e;
}

std::vector<RealVector> encode_warm(const EnsembleParam& param, const std::vector<Ensemble>& warm) {
  std::vector<RealVector> out;
  for (const auto& e : warm) {
    if (e.states.empty() || e.states.front().rows() != param.dim()) continue;
    std::vector<Matrix> factors;
    for (std::size_t g = 0; g < e.states.size(); ++g) {
      factors.push_back(detail::state_factor(e.probs[g] * e.states[g], param.rank()));
    }
    out.push_back(param.encode(factors));
  }
  return out;
}

CapacityReport make_report(std::string quantity, const KrausChannel& ch) {
  CapacityReport r;
  r.quantity = std::move(quantity);
  r.channel = ch.name();
  return r;
}

}  // namespace

Matrix Ensemble::average() const {
  if (states.empty()) return Matrix();
  Matrix m = Matrix::Zero(states.front().rows(), states.front().cols());
  for (std::size_t i = 0; i < states.size(); ++i) m += probs[i] * states[i];
  return m;
}

namespace detail {

Matrix state_factor(const Matrix& rho, int rank) {
  const auto eig = hermitian_eigen(hermitian_part(rho));
  const auto d = rho.rows();
  Matrix f = Matrix::Zero(d, rank);
  for (int c = 0; c < rank && c < d; ++c) {
    const auto idx = d - 1 - c;  // descending eigenvalues
    f.col(c) = std::sqrt(std::max(eig.values(idx), 0.0)) * eig.vectors.col(idx);
  }
  return f;
}

ConcaveMax maximize_concave(const StateFunctional& f, int d, const std::vector<Matrix>& warm,
                            const OptimOptions& opts, bool include_mixed) {
  const EnsembleParam param(1, d, d);
  const Objective obj = [&](const RealVector& x, RealVector* grad) {
    const auto p = param.evaluate(x);
    Matrix g;
    const double v = f(p.states[0], grad ? &g : nullptr);
    if (grad) *grad = param.pullback(p, {Matrix(-g)});
    return -v;
  };
  std::vector<RealVector> starts;
  for (const auto& w : warm) {
    if (w.rows() != d) continue;
    const Matrix smooth = (1.0 - 1e-7) * w + (1e-7 / d) * Matrix::Identity(d, d);
    starts.push_back(param.encode({state_factor(smooth, d)}));
  }
  if (include_mixed || starts.empty()) starts.push_back(param.encode({Matrix::Identity(d, d)}));
  ConcaveMax out;
  out.run = multi_start_minimize(obj, starts, gaussian_sampler(param.size()), opts);
  out.rho = param.evaluate(out.run.best.x).states[0];
  Matrix g;
  out.value = f(out.rho, &g);
  const double lmax = hermitian_eigen(hermitian_part(g)).values.maxCoeff();
  out.gap = std::max(0.0, lmax - (g * out.rho).trace().real());
  return out;
}

}  // namespace detail

ConcaveMax max_output_entropy(const KrausChannel& ch, const OptimOptions& opts) {
  OptimOptions o = opts;
  o.restarts = 0;
  return detail::maximize_concave(
      [&](const Matrix& rho, Matrix* grad) {
        const auto h = entropy_with_gradient(potcap::apply(ch, rho));
        if (grad) *grad = apply_adjoint(ch, h.gradient);
        return h.value;
      },
      ch.d_in(), {}, o);
}

CapacityReport holevo_capacity(const KrausChannel& ch, const CapacityOptions& opts) {
  const int d = ch.d_in();
  const int k = opts.ensemble_size > 0 ? opts.ensemble_size : d * d;
  const EnsembleParam param(k, d, 1);
  const Objective f = [&](const RealVector& x, RealVector* grad) {
    const auto p = param.evaluate(x);
    Matrix rho = Matrix::Zero(d, d);
    for (const auto& w : p.states) rho += w;
    const auto ht = weighted_entropy(potcap::apply(ch, rho), grad != nullptr);
    double val = ht.value;
    std::vector<Matrix> grads;
    const Matrix gt = grad ? apply_adjoint(ch, ht.gradient) : Matrix();
    for (const auto& w : p.states) {
      const auto hg = weighted_entropy(potcap::apply(ch, w), grad != nullptr);
      val -= hg.value;
      if (grad) grads.push_back(apply_adjoint(ch, hg.gradient) - gt);
    }
    if (grad) *grad = param.pullback(p, grads);
    return -val;
  };
  auto starts = encode_warm(param, opts.warm_starts);
  starts.push_back(param.encode({}));
  const auto run = multi_start_minimize(f, starts, gaussian_sampler(param.size()), opts.optim);
  const auto best = param.evaluate(run.best.x);

  auto r = make_report("chi", ch);
  r.raw_value = -run.best.value;
  r.value = std::max(0.0, r.raw_value);
  r.bound_direction = BoundDirection::certified_lower;
  r.diagnostics = diagnostics_from(run, true);
  r.best_ensemble = ensemble_from(best.states);
  r.best_input = r.best_ensemble.average();
  return r;
}

CapacityReport msw_chi(const KrausChannel& ch, const CapacityOptions& opts) {
  // max_rho [S(B) - min_V E(rho, V)] is a joint maximum over (rho, V), where
  // V is a pure decomposition of the dilated output. The best input is then
  // re-scored with a full E_F search.
  const int d = ch.d_in();
  const int d_b = ch.d_out();
  const int d_e = ch.num_kraus();
  const int m = opts.ensemble_size > 0 ? opts.ensemble_size : d * d;
  const Matrix u = kraus_to_stinespring(ch).matrix;
  const IsometryParam iso(m, d);
  const Eigen::Index nm = 2LL * d * d;

  const Objective f = [&](const RealVector& x, RealVector* grad) {
    const Matrix mm = unpack_matrix(x, 0, d, d);
    const auto p = iso.evaluate(x.segment(nm, iso.size()));
    const double t = mm.squaredNorm();
    const Matrix w = u * mm / std::sqrt(t);
    Matrix gv, gw;
    const double e = detail::eof_objective(w, p.v, d_b, d_e, grad ? &gv : nullptr,
                                           grad ? &gw : nullptr);
    const Matrix rho_b = trace_out_right(w * w.adjoint(), d_b, d_e);
    const auto hb = weighted_entropy(rho_b, grad != nullptr);
    const double val = hb.value - e;
    if (grad) {
      // Gradient of -(S(B) - E) with respect to W.
      const Matrix gamma_w =
          gw - 2.0 * kron(hb.gradient, Matrix(Matrix::Identity(d_e, d_e))) * w;
      const Matrix gamma_m = u.adjoint() * gamma_w / std::sqrt(t) -
                             ((gamma_w.adjoint() * u * mm).trace().real() / std::pow(t, 1.5)) * mm;
      grad->resize(x.size());
      pack_matrix(gamma_m, *grad, 0);
      grad->segment(nm, iso.size()) = iso.pullback(p, gv);
    }
    return -val;
  };

  std::vector<RealVector> starts;
  for (const auto& e : opts.warm_starts) {
    if (e.states.empty() || e.states.front().rows() != d) continue;
    RealVector x(nm + iso.size());
    const Matrix avg = (1.0 - 1e-7) * e.average() + (1e-7 / d) * Matrix::Identity(d, d);
    pack_matrix(detail::state_factor(avg, d), x, 0);
    x.segment(nm, iso.size()) = iso.encode(Matrix::Identity(d, d));
    starts.push_back(x);
  }
  const auto run = multi_start_minimize(f, starts, gaussian_sampler(nm + iso.size()), opts.optim);

  const Matrix mm = unpack_matrix(run.best.x, 0, d, d);
  const Matrix rho = mm * mm.adjoint() / mm.squaredNorm();
  const Matrix rho_be = u * rho * u.adjoint();
  EntanglementOptions eo;
  eo.optim = opts.optim;
  eo.decomposition_size = m;
  const double rescored = entropy(potcap::apply(ch, rho)) -
                          entanglement_of_formation(hermitian_part(rho_be), d_b, d_e, eo).value;

  auto r = make_report("msw_chi", ch);
  r.raw_value = std::max(-run.best.value, rescored);
  r.value = std::max(0.0, r.raw_value);
  r.bound_direction = BoundDirection::certified_lower;
  r.diagnostics = diagnostics_from(run, true);
  r.best_input = rho;
  return r;
}

CapacityReport q1(const KrausChannel& ch, const CapacityOptions& opts) {
  const int d = ch.d_in();
  const KrausChannel comp = complementary(ch);
  const EnsembleParam param(1, d, d);
  const Objective f = [&](const RealVector& x, RealVector* grad) {
    const auto p = param.evaluate(x);
    const Matrix& rho = p.states[0];
    const auto hb = weighted_entropy(potcap::apply(ch, rho), grad != nullptr);
    const auto he = weighted_entropy(potcap::apply(comp, rho), grad != nullptr);
    if (grad) {
      *grad = param.pullback(
          p, {Matrix(apply_adjoint(comp, he.gradient) - apply_adjoint(ch, hb.gradient))});
    }
    return he.value - hb.value;
  };
  std::vector<Ensemble> warm;
  for (const auto& e : opts.warm_starts) {
    if (!e.states.empty()) warm.push_back({{1.0}, {e.average()}});
  }
  auto starts = encode_warm(param, warm);
  starts.push_back(param.encode({Matrix::Identity(d, d)}));
  const auto run = multi_start_minimize(f, starts, gaussian_sampler(param.size()), opts.optim);

  auto r = make_report("q1", ch);
  r.raw_value = -run.best.value;
  r.value = std::max(0.0, r.raw_value);
  r.bound_direction = BoundDirection::certified_lower;
  r.diagnostics = diagnostics_from(run, true);
  r.best_input = param.evaluate(run.best.x).states[0];
  r.best_ensemble = {{1.0}, {r.best_input}};
  return r;
}

CapacityReport p1(const KrausChannel& ch, const CapacityOptions& opts) {
  const int d = ch.d_in();
  const int k = opts.ensemble_size > 0 ? opts.ensemble_size : d * d;
  const KrausChannel comp = complementary(ch);
  const EnsembleParam param(k, d, d);
  const Objective f = [&](const RealVector& x, RealVector* grad) {
    const auto p = param.evaluate(x);
    Matrix rho = Matrix::Zero(d, d);
    for (const auto& w : p.states) rho += w;
    const bool g = grad != nullptr;
    const auto hb = weighted_entropy(potcap::apply(ch, rho), g);
    const auto he = weighted_entropy(potcap::apply(comp, rho), g);
    double val = hb.value - he.value;
    Matrix g_avg;
    if (g) g_avg = apply_adjoint(ch, hb.gradient) - apply_adjoint(comp, he.gradient);
    std::vector<Matrix> grads;
    for (const auto& w : p.states) {
      const auto hbt = weighted_entropy(potcap::apply(ch, w), g);
      const auto het = weighted_entropy(potcap::apply(comp, w), g);
      val -= hbt.value - het.value;
      if (g) {
        grads.push_back(apply_adjoint(ch, hbt.gradient) - apply_adjoint(comp, het.gradient) -
                        g_avg);
      }
    }
    if (g) *grad = param.pullback(p, grads);
    return -val;
  };

  // Pure-state splits of the best coherent-information input reach q1.
  const auto base = q1(ch, opts);
  std::vector<Ensemble> seeds = opts.warm_starts;
  {
    const auto eig = hermitian_eigen(hermitian_part(base.best_input));
    Ensemble split;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
      const double lam = std::max(eig.values(i), 0.0);
      if (lam < 1e-14) continue;
      split.probs.push_back(lam);
      split.states.push_back(eig.vectors.col(i) * eig.vectors.col(i).adjoint());
    }
    seeds.insert(seeds.begin(), split);
  }
  auto starts = encode_warm(param, seeds);
  const auto run = multi_start_minimize(f, starts, gaussian_sampler(param.size()), opts.optim);
  const auto best = param.evaluate(run.best.x);

  auto r = make_report("p1", ch);
  r.raw_value = -run.best.value;
  r.value = std::max(0.0, r.raw_value);
  r.bound_direction = BoundDirection::certified_lower;
  r.diagnostics = diagnostics_from(run, true);
  r.best_ensemble = ensemble_from(best.states);
  r.best_input = r.best_ensemble.average();
  return r;
}

CapacityReport c_e(const KrausChannel& ch, const CapacityOptions& opts) {
  const KrausChannel comp = complementary(ch);
  const auto f = [&](const Matrix& rho, Matrix* grad) {
    const auto ha = entropy_with_gradient(rho);
    const auto hb = entropy_with_gradient(potcap::apply(ch, rho));
    const auto he = entropy_with_gradient(potcap::apply(comp, rho));
    if (grad) {
      *grad = ha.gradient + apply_adjoint(ch, hb.gradient) - apply_adjoint(comp, he.gradient);
    }
    return ha.value + hb.value - he.value;
  };
  std::vector<Matrix> warm;
  for (const auto& e : opts.warm_starts) {
    if (!e.states.empty()) warm.push_back(e.average());
  }
  OptimOptions o = opts.optim;
  o.restarts = 0;
  const auto best = detail::maximize_concave(f, ch.d_in(), warm, o);

  auto r = make_report("c_e", ch);
  r.raw_value = best.value;
  r.value = std::max(0.0, best.value);
  r.upper_estimate = best.value + best.gap;
  r.bound_direction = best.gap < opts.certificate_tol ? BoundDirection::certified_exact
                                                      : BoundDirection::certified_lower;
  r.diagnostics = diagnostics_from(best.run, true);
  r.diagnostics.duality_gap = best.gap;
  r.best_input = best.rho;
  r.best_ensemble = {{1.0}, {best.rho}};
  return r;
}

CapacityReport q_a(const KrausChannel& ch, const CapacityOptions& opts) {
  // max_rho min{S(rho), S(N(rho))} = min_lambda max_rho [lambda S(rho) +
  // (1 - lambda) S(N(rho))]; the inner problem is concave and the outer one
  // convex in lambda.
  const int d = ch.d_in();
  OptimOptions o = opts.optim;
  o.restarts = 0;
  std::vector<Matrix> warm;
  for (const auto& e : opts.warm_starts) {
    if (!e.states.empty()) warm.push_back(e.average());
  }
  double primal = -1.0, dual = std::numeric_limits<double>::infinity();
  Matrix best_rho = maximally_mixed(d);
  ConcaveMax last;
  auto consider = [&](const Matrix& rho) {
    const double v = std::min(entropy(rho), entropy(potcap::apply(ch, rho)));
    if (v > primal) {
      primal = v;
      best_rho = rho;
    }
  };
  consider(maximally_mixed(d));
  for (const auto& w : warm) consider(w);
  const auto phi = [&](double lambda) {
    const auto f = [&](const Matrix& rho, Matrix* grad) {
      const auto ha = entropy_with_gradient(rho);
      const auto hb = entropy_with_gradient(potcap::apply(ch, rho));
      if (grad) *grad = lambda * ha.gradient + (1.0 - lambda) * apply_adjoint(ch, hb.gradient);
      return lambda * ha.value + (1.0 - lambda) * hb.value;
    };
    last = detail::maximize_concave(f, d, warm, o);
    warm.assign(1, last.rho);
    consider(last.rho);
    dual = std::min(dual, last.value + last.gap);
    return last.value;
  };
  golden_section(phi, 0.0, 1.0, 1e-5);

  auto r = make_report("q_a", ch);
  r.raw_value = primal;
  r.value = std::max(0.0, primal);
  r.upper_estimate = dual;
  r.bound_direction = dual - primal < std::max(opts.certificate_tol, 1e-5)
                          ? BoundDirection::certified_exact
                          : BoundDirection::certified_lower;
  r.diagnostics = diagnostics_from(last.run, true);
  r.diagnostics.duality_gap = std::max(0.0, dual - primal);
  r.best_input = best_rho;
  r.best_ensemble = {{1.0}, {best_rho}};
  return r;
}

CapacityReport compute_capacity(const std::string& quantity, const KrausChannel& ch,
                                const CapacityOptions& opts) {
  if (quantity == "chi") return holevo_capacity(ch, opts);
  if (quantity == "msw_chi") return msw_chi(ch, opts);
  if (quantity == "q1") return q1(ch, opts);
  if (quantity == "p1") return p1(ch, opts);
  if (quantity == "c_e") return c_e(ch, opts);
  if (quantity == "q_a") return q_a(ch, opts);
  throw ConfigError("unknown capacity quantity '" + quantity + "'");
}

}  // namespace potcap
