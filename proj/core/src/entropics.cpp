#include "potcap/entropics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace potcap {

namespace {

// Floor for log2 in gradients; the true derivative diverges on the kernel.
constexpr double kLogFloor = 1e-30;

double clipped(double lambda) {
  if (lambda < -kEigClip) {
    std::ostringstream os;
    os << "entropy: eigenvalue " << lambda << " is below the PSD tolerance";
    throw InvariantViolation(os.str());
  }
  return lambda < 0.0 ? 0.0 : lambda;
}

}  // namespace

double entropy_of_spectrum(const RealVector& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double p = clipped(eigenvalues(i));
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

double entropy(const Matrix& rho) {
  if (rho.rows() == 1) return 0.0;
  return entropy_of_spectrum(hermitian_eigen(rho).values);
}

double entropy(const DensityMatrix& rho) { return entropy(rho.matrix()); }

double conditional_entropy(const DensityMatrix& rho, const std::vector<std::string>& a,
                           const std::vector<std::string>& b) {
  std::vector<std::string> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  return entropy(partial_trace(rho, ab)) - entropy(partial_trace(rho, b));
}

double mutual_information(const DensityMatrix& rho, const std::vector<std::string>& a,
                          const std::vector<std::string>& b) {
  std::vector<std::string> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  return entropy(partial_trace(rho, a)) + entropy(partial_trace(rho, b)) -
         entropy(partial_trace(rho, ab));
}

double conditional_mutual_information(const DensityMatrix& rho,
                                      const std::vector<std::string>& a,
                                      const std::vector<std::string>& b,
                                      const std::vector<std::string>& c) {
  auto join = [](std::vector<std::string> x, const std::vector<std::string>& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  const auto ac = join(a, c);
  const auto bc = join(b, c);
  const auto abc = join(join(a, b), c);
  return entropy(partial_trace(rho, ac)) + entropy(partial_trace(rho, bc)) -
         entropy(partial_trace(rho, abc)) - entropy(partial_trace(rho, c));
}

double coherent_information(const KrausChannel& ch, const Matrix& rho) {
  const auto u = kraus_to_stinespring(ch);
  const Matrix out = u.matrix * rho * u.matrix.adjoint();
  const Matrix b = trace_out_right(out, u.d_out(), u.d_env());
  const Matrix e = trace_out_left(out, u.d_out(), u.d_env());
  return entropy(hermitian_part(b)) - entropy(hermitian_part(e));
}

double coherent_information(const KrausChannel& ch, const DensityMatrix& rho) {
  return coherent_information(ch, rho.matrix());
}

WeightedEntropy weighted_entropy(const Matrix& x, bool with_gradient) {
  WeightedEntropy out;
  const auto n = x.rows();
  const auto eig = hermitian_eigen(x);
  double trace = 0.0;
  RealVector lam(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lam(i) = clipped(eig.values(i));
    trace += lam(i);
  }
  if (trace <= 0.0) {
    out.value = 0.0;
    if (with_gradient) out.gradient = Matrix::Zero(n, n);
    return out;
  }
  const double log_trace = std::log2(trace);
  double value = trace * log_trace;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lam(i) > 0.0) value -= lam(i) * std::log2(lam(i));
  }
  out.value = value;
  if (with_gradient) {
    RealVector g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      g(i) = log_trace - std::log2(std::max(lam(i), kLogFloor));
    }
    out.gradient = eig.vectors * g.asDiagonal() * eig.vectors.adjoint();
  }
  return out;
}

WeightedEntropy entropy_with_gradient(const Matrix& rho) {
  WeightedEntropy out;
  const auto n = rho.rows();
  const auto eig = hermitian_eigen(rho);
  RealVector g(n);
  double value = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = clipped(eig.values(i));
    if (p > 0.0) value -= p * std::log2(p);
    g(i) = -std::log2(std::max(p, kLogFloor)) - 1.0 / std::numbers::ln2;
  }
  out.value = value;
  out.gradient = eig.vectors * g.asDiagonal() * eig.vectors.adjoint();
  return out;
}

}  // namespace potcap
