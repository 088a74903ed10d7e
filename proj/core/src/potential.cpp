#include "potcap/potential.hpp"

#include <algorithm>
#include <cmath>

#include "potcap/entanglement.hpp"
#include "potcap/entropics.hpp"
#include "potcap/error.hpp"
#include "potcap/parametrize.hpp"
#include "potcap/zoo.hpp"

namespace potcap {

namespace {

Sampler gaussian_sampler(Eigen::Index n) {
  return [n](std::mt19937_64& rng) { return gaussian_vector(rng, n); };
}

Matrix rotated_kraus(const std::vector<Matrix>& kraus, const Matrix& u, Eigen::Index j) {
  Matrix k = Matrix::Zero(kraus.front().rows(), kraus.front().cols());
  for (std::size_t i = 0; i < kraus.size(); ++i) {
    const cplx c = u(j, static_cast<Eigen::Index>(i));
    if (c != cplx(0.0)) k += c * kraus[i];
  }
  return k;
}

// sum_j H(K'_j rho K'_j^dagger) with gradients in rho and u.
double lifted_eval(const std::vector<Matrix>& kraus, const Matrix& u, const Matrix& rho,
                   Matrix* grad_rho, Matrix* grad_u) {
  const bool need = grad_rho != nullptr || grad_u != nullptr;
  if (grad_rho) *grad_rho = Matrix::Zero(rho.rows(), rho.cols());
  if (grad_u) grad_u->resize(u.rows(), u.cols());
  double total = 0.0;
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    const Matrix kp = rotated_kraus(kraus, u, j);
    const auto h = weighted_entropy(kp * rho * kp.adjoint(), need);
    total += h.value;
    if (grad_rho) *grad_rho += kp.adjoint() * h.gradient * kp;
    if (grad_u) {
      const Matrix a = rho * kp.adjoint() * h.gradient;
      for (std::size_t i = 0; i < kraus.size(); ++i) {
        (*grad_u)(j, static_cast<Eigen::Index>(i)) = 2.0 * std::conj((a * kraus[i]).trace());
      }
    }
  }
  return total;
}

Matrix identity_rotation(int m, int k) {
  Matrix u = Matrix::Zero(m, k);
  u.topRows(k) = Matrix::Identity(k, k);
  return u;
}

BoundReport make_bound(std::string target, const KrausChannel& ch) {
  BoundReport r;
  r.target = std::move(target);
  r.channel = ch.name();
  return r;
}

}  // namespace

double BoundReport::component(const std::string& name) const {
  for (const auto& [k, v] : components) {
    if (k == name) return v;
  }
  throw Error("bound report has no component '" + name + "'");
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::undecided: return "undecided";
  }
  return "undecided";
}

BoundReport q_a_potential(const KrausChannel& ch, const OptimOptions& opts) {
  const auto mo = max_output_entropy(ch, opts);
  auto r = make_bound("qa_p", ch);
  const double log_in = std::log2(static_cast<double>(ch.d_in()));
  r.value = std::max(log_in, mo.value);
  r.bound_direction = BoundDirection::certified_exact;
  r.components = {{"log_d_in", log_in},
                  {"max_output_entropy", mo.value},
                  {"max_output_entropy_gap", mo.gap}};
  r.diagnostics = diagnostics_from(mo.run, true);
  r.diagnostics.duality_gap = mo.gap;
  r.best_input = mo.rho;
  return r;
}

ActivationWitness activation_witness_qa(const KrausChannel& ch, const OptimOptions& opts) {
  CapacityOptions co;
  co.optim = opts;
  const auto pot = q_a_potential(ch, opts);
  const auto own = q_a(ch, co);
  ActivationWitness w{"trivial", identity_channel(1), pot.value, 0.0, 0.0, false};
  const double log_in = pot.component("log_d_in");
  const double max_out = pot.component("max_output_entropy");
  if (own.value >= pot.value - 1e-4) {
    w.kind = "trivial";
    w.aux = identity_channel(1).renamed("identity(1)");
  } else if (log_in >= max_out) {
    // Extra output entropy on B' lifts S(BB') above the input entropy.
    w.kind = "prepare_mixed";
    w.aux = prepare_mixed_channel(ch.d_in());
  } else {
    // Extra input entropy on A' lifts S(AA') above the output entropy.
    w.kind = "trace_out";
    w.aux = trace_channel(ch.d_out());
  }
  w.aux_q_a = q_a(w.aux, co).value;
  w.achieved = q_a(tensor_channels(ch, w.aux), co).value;
  w.verified = w.achieved >= w.target - 1e-3 && w.aux_q_a <= 1e-6;
  return w;
}

LiftedChannel canonical_lift(const KrausChannel& ch, const std::optional<Matrix>& u) {
  const KrausChannel base = u ? kraus_rotate(ch, *u) : ch;
  const int m = base.num_kraus();
  std::vector<Matrix> kraus;
  for (int j = 0; j < m; ++j) {
    kraus.push_back(kron(base.kraus(j), Matrix(basis_vector(m, j))));
  }
  const std::string name = ch.name().empty() ? std::string("lift") : "lift[" + ch.name() + "]";
  return {ch, KrausChannel(std::move(kraus), name),
          u ? *u : Matrix(Matrix::Identity(ch.num_kraus(), ch.num_kraus()))};
}

double lifted_objective(const KrausChannel& ch, const Matrix& u, const Matrix& rho) {
  return lifted_eval(ch.kraus(), u, rho, nullptr, nullptr);
}

BoundReport channel_eof(const KrausChannel& ch, const PotentialOptions& opts) {
  const int d = ch.d_in();
  const int k = ch.num_kraus();
  const int m = opts.rotation_size > 0 ? opts.rotation_size : k * ch.d_out();
  if (m < k) throw ConfigError("rotation size must be at least the Kraus count");
  const auto& kraus = ch.kraus();

  OptimOptions inner = opts.optim;
  inner.restarts = 0;
  inner.max_iterations = std::max(opts.inner_iterations, 1) * 3;
  inner.stall_window = 15;

  // min over rotations of the (concave) max over inputs.
  const IsometryParam iso(m, k);
  Matrix warm_rho = maximally_mixed(d);
  const Objective outer_u = [&](const RealVector& x, RealVector* grad) {
    const auto p = iso.evaluate(x);
    const auto best = detail::maximize_concave(
        [&](const Matrix& rho, Matrix* g) { return lifted_eval(kraus, p.v, rho, g, nullptr); }, d,
        {warm_rho}, inner, false);
    warm_rho = best.rho;
    Matrix gu;
    const double v = lifted_eval(kraus, p.v, best.rho, nullptr, grad ? &gu : nullptr);
    if (grad) *grad = iso.pullback(p, gu);
    return v;
  };
  const auto run_u = multi_start_minimize(outer_u, {iso.encode(identity_rotation(m, k))},
                                          gaussian_sampler(iso.size()), opts.optim);
  const Matrix u_best = iso.evaluate(run_u.best.x).v;
  OptimOptions certify = opts.optim;
  certify.restarts = 0;
  const auto top = detail::maximize_concave(
      [&](const Matrix& rho, Matrix* g) { return lifted_eval(kraus, u_best, rho, g, nullptr); }, d,
      {warm_rho}, certify, true);
  const double min_max = top.value + top.gap;

  // max over inputs of the min over rotations.
  const EnsembleParam ep(1, d, d);
  Matrix warm_u = u_best;
  const auto inner_min = [&](const Matrix& rho, const OptimOptions& o) {
    const Objective f = [&](const RealVector& x, RealVector* grad) {
      const auto p = iso.evaluate(x);
      Matrix gu;
      const double v = lifted_eval(kraus, p.v, rho, nullptr, grad ? &gu : nullptr);
      if (grad) *grad = iso.pullback(p, gu);
      return v;
    };
    const auto r = multi_start_minimize(
        f, {iso.encode(warm_u), iso.encode(identity_rotation(m, k))},
        gaussian_sampler(iso.size()), o);
    return iso.evaluate(r.best.x).v;
  };
  const Objective outer_rho = [&](const RealVector& x, RealVector* grad) {
    const auto p = ep.evaluate(x);
    const Matrix& rho = p.states[0];
    warm_u = inner_min(rho, inner);
    Matrix g;
    const double v = lifted_eval(kraus, warm_u, rho, grad ? &g : nullptr, nullptr);
    if (grad) *grad = ep.pullback(p, {Matrix(-g)});
    return -v;
  };
  const std::vector<RealVector> rho_starts{ep.encode({detail::state_factor(top.rho, d)}),
                                           ep.encode({Matrix::Identity(d, d)})};
  const auto run_rho =
      multi_start_minimize(outer_rho, rho_starts, gaussian_sampler(ep.size()), opts.optim);
  const Matrix rho_best = ep.evaluate(run_rho.best.x).states[0];
  OptimOptions final_inner = opts.optim;
  final_inner.restarts = opts.final_inner_restarts;
  const double max_min = lifted_eval(kraus, inner_min(rho_best, final_inner), rho_best, nullptr,
                                     nullptr);

  auto r = make_bound("channel_eof", ch);
  r.value = std::max(0.0, min_max);
  r.bound_direction = BoundDirection::certified_upper;
  r.components = {{"min_max", min_max},
                  {"max_min", max_min},
                  {"minimax_gap", min_max - max_min},
                  {"inner_gap", top.gap},
                  {"rotation_size", static_cast<double>(m)}};
  r.diagnostics = diagnostics_from(run_u, false);
  r.diagnostics.duality_gap = top.gap;
  r.best_input = top.rho;
  r.kraus_rotation = u_best;
  return r;
}

BoundReport qp_upper(const KrausChannel& ch, const PotentialOptions& opts) {
  auto r = channel_eof(ch, opts);
  r.target = "qp_upper";
  return r;
}

BoundReport pp_upper(const KrausChannel& ch, const PotentialOptions& opts) {
  auto r = channel_eof(ch, opts);
  r.target = "pp_upper";
  return r;
}

BoundReport chi_p_upper(const KrausChannel& ch, const PotentialOptions& opts) {
  // max over input ensembles {omega_g} of S(N(rho)) - sum_g C_<-(U omega_g U^dagger);
  // each ensemble is a decomposition of the dilated output of rho = sum omega_g.
  const int d = ch.d_in();
  const int d_b = ch.d_out();
  const int d_e = ch.num_kraus();
  const int count = opts.ensemble_size > 0 ? opts.ensemble_size : d * d;
  const int n = d_e * d_e;
  const Matrix u = kraus_to_stinespring(ch).matrix;
  const EnsembleParam ep(count, d, d);

  std::vector<Matrix> warm(static_cast<std::size_t>(count));
  OptimOptions inner = opts.optim;
  inner.restarts = 0;
  inner.max_iterations = opts.inner_iterations;
  inner.stall_window = 10;

  // Returns S(N(rho)) - sum_g C_<- with the inner POVM searches given by `solve`.
  const auto score = [&](const std::vector<Matrix>& omegas, bool full,
                         std::vector<Matrix>* grads) {
    Matrix rho = Matrix::Zero(d, d);
    for (const auto& w : omegas) rho += w;
    const bool g = grads != nullptr;
    const auto ht = weighted_entropy(potcap::apply(ch, rho), g);
    const Matrix gt = g ? apply_adjoint(ch, ht.gradient) : Matrix();
    double val = ht.value;
    if (g) grads->assign(omegas.size(), Matrix());
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      const Matrix sigma = u * omegas[i] * u.adjoint();
      if (sigma.trace().real() < 1e-14) {
        if (g) (*grads)[i] = gt;
        continue;
      }
      const auto hb = weighted_entropy(potcap::apply(ch, omegas[i]), g);
      OptimOptions o = inner;
      if (full) {
        o = opts.optim;
        o.restarts = opts.final_inner_restarts;
        o.seed = opts.optim.seed + 104729ULL * (i + 1);
      }
      std::vector<Matrix> seeds;
      if (warm[i].size() > 0) seeds.push_back(warm[i]);
      const auto best = detail::minimize_povm(sigma, d_b, d_e, n, seeds, o);
      warm[i] = best.v;
      Matrix gs;
      const double mval =
          detail::povm_objective(sigma, d_b, d_e, best.v, nullptr, g ? &gs : nullptr);
      val -= std::clamp(hb.value - mval, 0.0, hb.value);
      if (g) {
        (*grads)[i] = gt - apply_adjoint(ch, hb.gradient) + u.adjoint() * gs * u;
      }
    }
    return val;
  };

  const Objective f = [&](const RealVector& x, RealVector* grad) {
    const auto p = ep.evaluate(x);
    std::vector<Matrix> grads;
    const double v = score(p.states, false, grad ? &grads : nullptr);
    if (grad) {
      for (auto& g : grads) g = -g;
      *grad = ep.pullback(p, grads);
    }
    return -v;
  };

  // Seed with the best pure-state ensemble: there C_<- of each component is
  // its output entropy and the objective equals the Holevo quantity.
  CapacityOptions co;
  co.optim = opts.optim;
  co.ensemble_size = count;
  const auto chi = holevo_capacity(ch, co);
  std::vector<Matrix> seed_factors;
  std::vector<Matrix> seed_states;
  for (std::size_t g = 0; g < chi.best_ensemble.states.size(); ++g) {
    const Matrix w = chi.best_ensemble.probs[g] * chi.best_ensemble.states[g];
    seed_factors.push_back(detail::state_factor(w, d));
    seed_states.push_back(w);
  }
  const auto run = multi_start_minimize(f, {ep.encode(seed_factors)},
                                        gaussian_sampler(ep.size()), opts.optim);
  const auto best = ep.evaluate(run.best.x);
  const double at_best = score(best.states, true, nullptr);
  std::fill(warm.begin(), warm.end(), Matrix());
  const double at_seed = score(seed_states, true, nullptr);

  auto r = make_bound("chi_p_upper", ch);
  r.value = std::max({at_best, at_seed, 0.0});
  r.bound_direction = BoundDirection::heuristic;
  r.components = {{"holevo_seed", chi.value},
                  {"search_value", -run.best.value},
                  {"rescored_best", at_best},
                  {"rescored_seed", at_seed}};
  r.diagnostics = diagnostics_from(run, true);
  Matrix rho = Matrix::Zero(d, d);
  for (const auto& w : (at_best >= at_seed ? best.states : seed_states)) rho += w;
  r.best_input = rho;
  return r;
}

namespace {

// Sufficient separability test: all outputs are diagonal in one common basis,
// which makes the Choi matrix block-diagonal with PSD blocks on the output side.
bool has_classical_output(const KrausChannel& ch, std::string* evidence) {
  const int d = ch.d_in();
  std::vector<Matrix> herm;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const Matrix o = potcap::apply(ch, Matrix(basis_vector(d, a) * basis_vector(d, b).adjoint()));
      herm.push_back(o + o.adjoint());
      herm.push_back(cplx(0.0, 1.0) * (o - o.adjoint()));
    }
  }
  for (std::size_t i = 0; i < herm.size(); ++i) {
    for (std::size_t j = i + 1; j < herm.size(); ++j) {
      if ((herm[i] * herm[j] - herm[j] * herm[i]).norm() > 1e-9) return false;
    }
  }
  Matrix combo = Matrix::Zero(ch.d_out(), ch.d_out());
  for (std::size_t i = 0; i < herm.size(); ++i) combo += (1.0 / (1.0 + std::sqrt(2.0 + i))) * herm[i];
  const Matrix basis = hermitian_eigen(combo).vectors;
  for (const auto& h : herm) {
    Matrix t = basis.adjoint() * h * basis;
    t.diagonal().setZero();
    if (t.norm() > 1e-8) return false;
  }
  if (evidence) *evidence = "all outputs commute and are diagonal in a common basis";
  return true;
}

}  // namespace

ClassifyReport is_entanglement_breaking(const KrausChannel& ch) {
  ClassifyReport r;
  if (ch.d_in() == 1 || ch.d_out() == 1) {
    r.verdict = Verdict::yes;
    r.method = "trivial";
    r.evidence = "one-dimensional input or output";
    return r;
  }
  const auto choi = choi_of(ch, true);
  const auto ppt = ppt_check(choi.matrix, ch.d_in(), ch.d_out());
  r.ppt_min_eigenvalue = ppt.min_eigenvalue;
  if (!ppt.is_ppt) {
    r.verdict = Verdict::no;
    r.method = "npt";
    r.evidence = "Choi matrix has a negative partial transpose";
    return r;
  }
  if (ppt.decidable) {
    r.verdict = Verdict::yes;
    r.method = "ppt_decidable";
    r.evidence = "PPT Choi matrix in a dimension where PPT implies separability";
    return r;
  }
  if (has_classical_output(ch, &r.evidence)) {
    r.verdict = Verdict::yes;
    r.method = "classical_output";
    return r;
  }
  r.verdict = Verdict::undecided;
  r.method = "ppt_only";
  r.evidence = "Choi matrix is PPT; separability is not decidable here";
  return r;
}

ClassifyReport is_hadamard(const KrausChannel& ch) {
  auto r = is_entanglement_breaking(complementary(ch));
  r.evidence = "complementary channel: " + r.evidence;
  return r;
}

double degrading_residual(const KrausChannel& ch, const KrausChannel& d) {
  const Matrix target = choi_of(complementary(ch), false).matrix;
  const Matrix got = choi_of(compose(ch, d), false).matrix;
  return (got - target).norm();
}

namespace {

// Best measure-and-prepare map in the computational output basis by linear
// least squares over the prepared states, projected back onto states.
std::optional<KrausChannel> measure_prepare_fit(const KrausChannel& ch, const Matrix& target) {
  const int d_in = ch.d_in(), d_b = ch.d_out(), d_e = ch.num_kraus();
  std::vector<Matrix> q(static_cast<std::size_t>(d_b), Matrix(d_in, d_in));
  for (int b = 0; b < d_b; ++b) {
    for (int a = 0; a < d_in; ++a) {
      for (int c = 0; c < d_in; ++c) {
        cplx s = 0.0;
        for (const auto& k : ch.kraus()) s += k(b, a) * std::conj(k(b, c));
        q[static_cast<std::size_t>(b)](a, c) = s;
      }
    }
  }
  Matrix gram(d_b, d_b);
  std::vector<Matrix> rhs;
  for (int b = 0; b < d_b; ++b) {
    for (int c = 0; c < d_b; ++c) {
      gram(b, c) = (q[static_cast<std::size_t>(b)].adjoint() * q[static_cast<std::size_t>(c)]).trace();
    }
    const Matrix lhs = kron(Matrix(q[static_cast<std::size_t>(b)].adjoint()),
                            Matrix(Matrix::Identity(d_e, d_e)));
    rhs.push_back(trace_out_left(lhs * target, d_in, d_e));
  }
  const Matrix inv = gram.completeOrthogonalDecomposition().pseudoInverse();
  std::vector<Matrix> kraus;
  for (int b = 0; b < d_b; ++b) {
    Matrix tau = Matrix::Zero(d_e, d_e);
    for (int c = 0; c < d_b; ++c) tau += inv(b, c) * rhs[static_cast<std::size_t>(c)];
    auto eig = hermitian_eigen(hermitian_part(tau));
    RealVector lam = eig.values.cwiseMax(0.0);
    if (lam.sum() <= 1e-12) {
      lam.setConstant(1.0);
      eig.vectors = Matrix::Identity(d_e, d_e);
    }
    lam /= lam.sum();
    for (int t = 0; t < d_e; ++t) {
      kraus.push_back(std::sqrt(lam(t)) * eig.vectors.col(t) * basis_vector(d_b, b).adjoint());
    }
  }
  try {
    return KrausChannel(std::move(kraus), "measure_prepare_degrading");
  } catch (const InvariantViolation&) {
    return std::nullopt;
  }
}

}  // namespace

DegradabilityReport is_degradable(const KrausChannel& ch, const DegradabilityOptions& opts) {
  const int d_in = ch.d_in(), d_b = ch.d_out(), d_e = ch.num_kraus();
  const Matrix target = choi_of(complementary(ch), false).matrix;
  DegradabilityReport r;

  const auto mp = measure_prepare_fit(ch, target);
  if (mp) {
    const double res = degrading_residual(ch, *mp);
    if (res < opts.threshold) {
      r.degradable = true;
      r.verdict = "degradable";
      r.method = "measure_prepare";
      r.residual = res;
      r.degrading_map = *mp;
      return r;
    }
  }

  // General CPTP map B -> E through its Stinespring isometry: L = d_b d_e
  // Kraus operators stacked as an (L d_e) x d_b isometry.
  const int l_count = d_b * d_e;
  const IsometryParam iso(l_count * d_e, d_b);
  const auto& kraus = ch.kraus();
  const Objective f = [&](const RealVector& x, RealVector* grad) {
    const auto p = iso.evaluate(x);
    Matrix c = -target;
    std::vector<Vector> vs;
    for (int l = 0; l < l_count; ++l) {
      const Matrix dl = p.v.middleRows(l * d_e, d_e);
      for (const auto& k : kraus) {
        const Matrix a = dl * k;
        const Vector v = Eigen::Map<const Vector>(a.data(), a.size());
        c.noalias() += v * v.adjoint();
        vs.push_back(v);
      }
    }
    const double val = c.squaredNorm();
    if (grad) {
      Matrix gv = Matrix::Zero(p.v.rows(), p.v.cols());
      std::size_t idx = 0;
      for (int l = 0; l < l_count; ++l) {
        for (const auto& k : kraus) {
          const Vector gvec = 4.0 * (c * vs[idx++]);
          const Matrix ga = Eigen::Map<const Matrix>(gvec.data(), d_e, d_in);
          gv.middleRows(l * d_e, d_e) += ga * k.adjoint();
        }
      }
      *grad = iso.pullback(p, gv);
    }
    return val;
  };
  OptimOptions o = opts.optim;
  o.target_value = std::max(o.target_value, 1e-4 * opts.threshold * opts.threshold);
  o.ftol = std::min(o.ftol, 1e-24);
  o.gtol = std::min(o.gtol, 1e-15);
  std::vector<RealVector> starts;
  if (mp) {
    Matrix v(l_count * d_e, d_b);
    for (int l = 0; l < l_count; ++l) v.middleRows(l * d_e, d_e) = mp->kraus(l);
    starts.push_back(iso.encode(v));
  }
  const auto run = multi_start_minimize(f, starts, gaussian_sampler(iso.size()), o);
  const Matrix v = iso.evaluate(run.best.x).v;
  std::vector<Matrix> dk;
  for (int l = 0; l < l_count; ++l) dk.push_back(v.middleRows(l * d_e, d_e));
  for (double val : run.restart_values) r.restart_residuals.push_back(std::sqrt(std::max(val, 0.0)));
  r.method = "fit";
  r.degrading_map = KrausChannel(std::move(dk), "degrading_map");
  r.residual = degrading_residual(ch, *r.degrading_map);
  r.degradable = r.residual < opts.threshold;
  r.verdict = r.degradable ? "degradable" : "no_map_found";
  return r;
}

PerfectionAudit perfection_audit(const KrausChannel& ch, const PotentialOptions& opts) {
  PerfectionAudit a;
  a.channel = ch.name();
  a.d_min = std::min(ch.d_in(), ch.d_out());
  a.log_d_min = std::log2(static_cast<double>(a.d_min));
  CapacityOptions co;
  co.optim.seed = opts.optim.seed;
  const auto chi = holevo_capacity(ch, co);
  const auto cq = q1(ch, co);
  const auto cp = p1(ch, co);
  const auto chip = chi_p_upper(ch, opts);
  const auto eof = channel_eof(ch, opts);
  auto qp = eof;
  qp.target = "qp_upper";
  auto pp = eof;
  pp.target = "pp_upper";
  a.capacities = {chi, cq, cp};
  a.bounds = {chip, qp, pp};

  const auto entry = [&](std::string cap, const CapacityReport& lo, const BoundReport& up) {
    AuditEntry e;
    e.capacity = std::move(cap);
    e.lower_name = lo.quantity;
    e.lower = lo.value;
    e.upper_name = up.target;
    e.upper = up.value;
    e.margin = a.log_d_min - up.value;
    if (lo.value >= a.log_d_min - a.margin_threshold) {
      e.verdict = "perfect";
    } else if (up.value < a.margin_threshold) {
      e.verdict = "zero_potential";
    } else if (e.margin > a.margin_threshold) {
      e.verdict = "not_activatable_to_perfect";
    } else {
      e.verdict = "inconclusive";
    }
    return e;
  };
  a.entries = {entry("classical", chi, chip), entry("quantum", cq, qp), entry("private", cp, pp)};
  return a;
}

}  // namespace potcap
