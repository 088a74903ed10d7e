#include "potcap/channels.hpp"

#include <cmath>
#include <sstream>

namespace potcap {

CptpReport validate_cptp(const std::vector<Matrix>& kraus, double tol) {
  if (kraus.empty()) return {false, 1.0};
  const auto d_in = kraus.front().cols();
  Matrix sum = Matrix::Zero(d_in, d_in);
  for (const auto& k : kraus) {
    if (k.cols() != d_in || k.rows() != kraus.front().rows()) return {false, 1.0};
    sum += k.adjoint() * k;
  }
  const double dev = (sum - Matrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff();
  return {dev <= tol, dev};
}

CptpReport validate_cptp(const KrausChannel& ch, double tol) {
  return validate_cptp(ch.kraus(), tol);
}

KrausChannel::KrausChannel(std::vector<Matrix> kraus, std::string name)
    : kraus_(std::move(kraus)), name_(std::move(name)) {
  if (kraus_.empty()) throw InvariantViolation("channel needs at least one Kraus operator");
  d_out_ = static_cast<int>(kraus_.front().rows());
  d_in_ = static_cast<int>(kraus_.front().cols());
  if (d_in_ < 1 || d_out_ < 1) throw DimensionError("Kraus operators must be non-empty");
  for (const auto& k : kraus_) {
    if (k.rows() != d_out_ || k.cols() != d_in_) {
      throw DimensionError("Kraus operators have inconsistent shapes");
    }
    if (!k.allFinite()) throw InvariantViolation("Kraus operator has non-finite entries");
  }
  const auto report = validate_cptp(kraus_);
  if (!report.passed) {
    std::ostringstream os;
    os << "Kraus set is not trace preserving (deviation " << report.deviation << ")";
    throw InvariantViolation(os.str());
  }
}

KrausChannel KrausChannel::renamed(std::string name) const {
  KrausChannel out = *this;
  out.name_ = std::move(name);
  return out;
}

StinespringIsometry kraus_to_stinespring(const KrausChannel& ch) {
  const int k = ch.num_kraus();
  const int d_out = ch.d_out();
  Matrix u = Matrix::Zero(d_out * k, ch.d_in());
  for (int i = 0; i < k; ++i) {
    for (int b = 0; b < d_out; ++b) u.row(b * k + i) = ch.kraus(i).row(b);
  }
  return {std::move(u), SystemDims({"B", "E"}, {d_out, k}), ch.d_in()};
}

KrausChannel complementary(const KrausChannel& ch) {
  const int k = ch.num_kraus();
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(ch.d_out()));
  for (int b = 0; b < ch.d_out(); ++b) {
    Matrix f(k, ch.d_in());
    for (int e = 0; e < k; ++e) f.row(e) = ch.kraus(e).row(b);
    out.push_back(std::move(f));
  }
  const std::string name = ch.name().empty() ? std::string{} : ch.name() + "^c";
  return KrausChannel(std::move(out), name);
}

Matrix apply(const KrausChannel& ch, const Matrix& rho) {
  if (rho.rows() != ch.d_in() || rho.cols() != ch.d_in()) {
    throw DimensionError("apply: input dimension does not match channel");
  }
  Matrix out = Matrix::Zero(ch.d_out(), ch.d_out());
  for (const auto& k : ch.kraus()) out.noalias() += k * rho * k.adjoint();
  return out;
}

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho, std::string out_label) {
  return DensityMatrix(hermitian_part(apply(ch, rho.matrix())),
                       SystemDims::single(std::move(out_label), ch.d_out()));
}

Matrix apply_adjoint(const KrausChannel& ch, const Matrix& x) {
  if (x.rows() != ch.d_out() || x.cols() != ch.d_out()) {
    throw DimensionError("apply_adjoint: operator dimension does not match channel output");
  }
  Matrix out = Matrix::Zero(ch.d_in(), ch.d_in());
  for (const auto& k : ch.kraus()) out.noalias() += k.adjoint() * x * k;
  return out;
}

Matrix apply_to_half(const KrausChannel& ch, const Matrix& rho, int d_rest) {
  if (rho.rows() != d_rest * ch.d_in()) {
    throw DimensionError("apply_to_half: input dimension does not match");
  }
  const Matrix id = Matrix::Identity(d_rest, d_rest);
  Matrix out = Matrix::Zero(d_rest * ch.d_out(), d_rest * ch.d_out());
  for (const auto& k : ch.kraus()) {
    const Matrix big = kron(id, k);
    out.noalias() += big * rho * big.adjoint();
  }
  return out;
}

DensityMatrix apply_to_half(const KrausChannel& ch, const DensityMatrix& rho,
                            std::string out_label) {
  const auto& dims = rho.dims();
  if (dims.dims().back() != ch.d_in()) {
    throw DimensionError("apply_to_half: last subsystem does not match channel input");
  }
  auto labels = dims.labels();
  auto sizes = dims.dims();
  labels.back() = std::move(out_label);
  sizes.back() = ch.d_out();
  const int d_rest = dims.total() / ch.d_in();
  return DensityMatrix(hermitian_part(apply_to_half(ch, rho.matrix(), d_rest)),
                       SystemDims(std::move(labels), std::move(sizes)));
}

KrausChannel tensor_channels(const KrausChannel& a, const KrausChannel& b) {
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(a.num_kraus() * b.num_kraus()));
  for (const auto& ka : a.kraus()) {
    for (const auto& kb : b.kraus()) out.push_back(kron(ka, kb));
  }
  std::string name;
  if (!a.name().empty() || !b.name().empty()) name = a.name() + "*" + b.name();
  return KrausChannel(std::move(out), std::move(name));
}

KrausChannel kraus_rotate(const KrausChannel& ch, const Matrix& u) {
  if (u.cols() != ch.num_kraus()) {
    throw DimensionError("kraus_rotate: isometry column count must equal Kraus count");
  }
  if (!is_isometry(u, 1e-8)) throw InvariantViolation("kraus_rotate: u is not an isometry");
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(u.rows()));
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    Matrix kj = Matrix::Zero(ch.d_out(), ch.d_in());
    for (int i = 0; i < ch.num_kraus(); ++i) kj += u(j, i) * ch.kraus(i);
    out.push_back(std::move(kj));
  }
  return KrausChannel(std::move(out), ch.name());
}

ChoiMatrix choi_of(const KrausChannel& ch, bool normalized) {
  const int din = ch.d_in();
  const int dout = ch.d_out();
  // C = sum_k vec(K_k) vec(K_k)^dagger with vec indexed (a, b) -> a * dout + b.
  Matrix c = Matrix::Zero(din * dout, din * dout);
  for (const auto& k : ch.kraus()) {
    Vector v(din * dout);
    for (int a = 0; a < din; ++a) {
      for (int b = 0; b < dout; ++b) v(a * dout + b) = k(b, a);
    }
    c.noalias() += v * v.adjoint();
  }
  if (normalized) c /= static_cast<double>(din);
  return {std::move(c), din, dout, normalized};
}

KrausChannel kraus_from_choi(const ChoiMatrix& choi, std::string name) {
  const int din = choi.d_in;
  const int dout = choi.d_out;
  if (choi.matrix.rows() != din * dout) throw DimensionError("Choi matrix has wrong size");
  Matrix c = choi.matrix;
  if (choi.normalized) c *= static_cast<double>(din);
  const auto eig = hermitian_eigen(hermitian_part(c));
  if (eig.values(0) < -1e-8) throw InvariantViolation("Choi matrix is not PSD");
  const Matrix marginal = trace_out_right(c, din, dout);
  if ((marginal - Matrix::Identity(din, din)).cwiseAbs().maxCoeff() > 1e-8) {
    throw InvariantViolation("Choi matrix is not trace preserving");
  }
  std::vector<Matrix> kraus;
  for (Eigen::Index idx = eig.values.size(); idx-- > 0;) {
    const double lambda = eig.values(idx);
    if (lambda <= kKrausRankCutoff) continue;
    Matrix k(dout, din);
    for (int a = 0; a < din; ++a) {
      for (int b = 0; b < dout; ++b) k(b, a) = std::sqrt(lambda) * eig.vectors(a * dout + b, idx);
    }
    kraus.push_back(std::move(k));
  }
  return KrausChannel(std::move(kraus), std::move(name));
}

Matrix apply_via_choi(const ChoiMatrix& choi, const Matrix& rho) {
  Matrix c = choi.matrix;
  if (choi.normalized) c *= static_cast<double>(choi.d_in);
  const Matrix big = kron(Matrix(rho.transpose()), Matrix(Matrix::Identity(choi.d_out, choi.d_out))) * c;
  return trace_out_left(big, choi.d_in, choi.d_out);
}

KrausChannel compose(const KrausChannel& first, const KrausChannel& second) {
  if (first.d_out() != second.d_in()) throw DimensionError("compose: dimension mismatch");
  std::vector<Matrix> out;
  for (const auto& b : second.kraus()) {
    for (const auto& a : first.kraus()) out.push_back(b * a);
  }
  return KrausChannel(std::move(out), second.name() + "o" + first.name());
}

}  // namespace potcap
