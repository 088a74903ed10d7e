#include "potcap/optimize.hpp"

#include <cmath>
#include <deque>
#include <limits>

namespace potcap {

RealVector central_difference_gradient(const Objective& f, const RealVector& x,
                                       double step) {
  RealVector g(x.size());
  RealVector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double orig = probe(i);
    probe(i) = orig + step;
    const double fp = f(probe, nullptr);
    probe(i) = orig - step;
    const double fm = f(probe, nullptr);
    probe(i) = orig;
    g(i) = (fp - fm) / (2.0 * step);
  }
  return g;
}

namespace {

struct Evaluator {
  const Objective& f;
  const OptimOptions& opts;
  int count = 0;

  double operator()(const RealVector& x, RealVector& grad) {
    ++count;
    if (opts.numerical_gradient) {
      const double v = f(x, nullptr);
      grad = central_difference_gradient(f, x, opts.fd_step);
      count += static_cast<int>(2 * x.size());
      return v;
    }
    grad.resize(x.size());
    return f(x, &grad);
  }
};

struct Pair {
  RealVector s;
  RealVector y;
  double rho;
};

RealVector two_loop(const std::deque<Pair>& mem, const RealVector& g) {
  RealVector q = g;
  std::vector<double> alpha(mem.size());
  for (std::size_t i = mem.size(); i-- > 0;) {
    alpha[i] = mem[i].rho * mem[i].s.dot(q);
    q -= alpha[i] * mem[i].y;
  }
  if (!mem.empty()) {
    const auto& last = mem.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const double beta = mem[i].rho * mem[i].y.dot(q);
    q += (alpha[i] - beta) * mem[i].s;
  }
  return -q;
}

}  // namespace

LocalResult minimize_lbfgs(const Objective& f, RealVector x0, const OptimOptions& opts) {
  Evaluator eval{f, opts};
  LocalResult res;
  RealVector x = std::move(x0);
  RealVector g;
  double fx = eval(x, g);
  if (!std::isfinite(fx)) {
    res.x = x;
    res.value = fx;
    res.evaluations = eval.count;
    return res;
  }
  std::deque<Pair> mem;
  std::deque<double> history{fx};
  constexpr double c1 = 1e-4;
  int it = 0;
  bool converged = false;
  for (; it < opts.max_iterations; ++it) {
    const double gnorm = g.norm();
    if (gnorm <= opts.gtol || fx <= opts.target_value) {
      converged = true;
      break;
    }
    RealVector d = two_loop(mem, g);
    double slope = d.dot(g);
    if (!(slope < 0.0)) {
      mem.clear();
      d = -g;
      slope = -gnorm * gnorm;
    }
    double t = mem.empty() ? std::min(1.0, 1.0 / gnorm) : 1.0;
    RealVector x_new, g_new;
    double f_new = fx;
    bool accepted = false;
    for (int ls = 0; ls < 50; ++ls) {
      x_new = x + t * d;
      f_new = eval(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= fx + c1 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (!mem.empty()) {
        mem.clear();
        continue;
      }
      converged = true;  // no descent possible at working precision
      break;
    }
    RealVector s = x_new - x;
    RealVector y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      mem.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(mem.size()) > opts.lbfgs_memory) mem.pop_front();
    }
    x = std::move(x_new);
    g = std::move(g_new);
    fx = f_new;
    history.push_back(fx);
    if (static_cast<int>(history.size()) > opts.stall_window + 1) history.pop_front();
    if (static_cast<int>(history.size()) == opts.stall_window + 1 &&
        history.front() - fx < opts.ftol) {
      converged = true;
      ++it;
      break;
    }
  }
  res.x = std::move(x);
  res.value = fx;
  res.iterations = it;
  res.evaluations = eval.count;
  res.grad_norm = g.norm();
  res.converged = converged;
  return res;
}

RealVector gaussian_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

MultiStartResult multi_start_minimize(const Objective& f,
                                      const std::vector<RealVector>& starts,
                                      const Sampler& sampler, const OptimOptions& opts) {
  MultiStartResult out;
  out.best.value = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(opts.seed);
  auto run = [&](RealVector x0) {
    LocalResult r = minimize_lbfgs(f, std::move(x0), opts);
    out.restart_values.push_back(r.value);
    out.total_iterations += r.iterations;
    out.total_evaluations += r.evaluations;
    if (r.value < out.best.value || out.restart_values.size() == 1) {
      out.best_start = static_cast<int>(out.restart_values.size()) - 1;
      out.best = std::move(r);
    }
  };
  for (const auto& s : starts) run(s);
  for (int r = 0; r < opts.restarts; ++r) run(sampler(rng));
  if (out.restart_values.empty()) throw Error("multi_start_minimize: no starting points");
  return out;
}

ScalarMin golden_section(const std::function<double(double)>& f, double lo, double hi,
                         double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  ScalarMin best{c, fc};
  if (fd < best.value) best = {d, fd};
  const double fa = f(lo), fb = f(hi);
  if (fa < best.value) best = {lo, fa};
  if (fb < best.value) best = {hi, fb};
  return best;
}

}  // namespace potcap
