#include "potcap/zoo.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "potcap/error.hpp"
#include "potcap/io.hpp"

namespace potcap {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\n\r");
  const auto e = s.find_last_not_of(" \t\n\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void require_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(std::string(what) + " must lie in [0, 1], got " + fmt(p));
  }
}

int require_dim(double d, const char* what) {
  if (!(d >= 1.0) || d != std::floor(d) || d > 64) {
    throw ConfigError(std::string(what) + " must be an integer in [1, 64], got " + fmt(d));
  }
  return static_cast<int>(d);
}

void require_arity(const ChannelSpec& s, std::size_t lo, std::size_t hi) {
  if (s.params.size() < lo || s.params.size() > hi) {
    throw ConfigError("channel '" + s.kind + "' takes " + std::to_string(lo) +
                      (lo == hi ? "" : "-" + std::to_string(hi)) + " numeric arguments");
  }
}

Matrix pauli(char which) {
  Matrix m(2, 2);
  const cplx i(0.0, 1.0);
  switch (which) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

}  // namespace

const std::vector<std::string>& zoo_kinds() {
  static const std::vector<std::string> kinds{
      "identity",      "dephasing",       "depolarizing", "amplitude_damping",
      "erasure",       "measure_prepare", "full_dephasing", "random",
      "custom",        "constant",        "trace",        "prepare_mixed"};
  return kinds;
}

std::string ChannelSpec::to_string() const {
  std::string out = kind + "(";
  bool first = true;
  if (!text_arg.empty()) {
    out += text_arg;
    first = false;
  }
  for (double p : params) {
    if (!first) out += ",";
    out += fmt(p);
    first = false;
  }
  return out + ")";
}

ChannelSpec ChannelSpec::parse(const std::string& text) {
  const std::string t = trim(text);
  ChannelSpec s;
  const auto open = t.find('(');
  if (open == std::string::npos) {
    s.kind = t;
  } else {
    if (t.back() != ')') throw ConfigError("channel spec '" + t + "': missing ')'");
    s.kind = trim(t.substr(0, open));
    const std::string body = t.substr(open + 1, t.size() - open - 2);
    if (s.kind == "custom") {
      s.text_arg = trim(body);
    } else {
      std::stringstream ss(body);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end != item.c_str() + item.size()) {
          if (!s.text_arg.empty() || !s.params.empty()) {
            throw ConfigError("channel spec '" + t + "': bad argument '" + item + "'");
          }
          s.text_arg = item;
        } else {
          s.params.push_back(v);
        }
      }
    }
  }
  bool known = false;
  for (const auto& k : zoo_kinds()) known = known || k == s.kind;
  if (!known) throw ConfigError("unknown channel kind '" + s.kind + "'");
  return s;
}

KrausChannel identity_channel(int d) {
  return KrausChannel({Matrix::Identity(d, d)}, "identity(" + std::to_string(d) + ")");
}

KrausChannel dephasing_channel(double p) {
  require_prob(p, "dephasing probability");
  std::vector<Matrix> k{std::sqrt(1.0 - p) * Matrix::Identity(2, 2)};
  if (p > 0.0) k.push_back(std::sqrt(p) * pauli('z'));
  return KrausChannel(std::move(k), "dephasing(" + fmt(p) + ")");
}

KrausChannel depolarizing_channel(double p, int d) {
  require_prob(p, "depolarizing probability");
  // (1 - p) rho + p I/d written with the d^2 Weyl operators X^a Z^b.
  const double w_other = p / (d * d);
  const double w_id = 1.0 - p + w_other;
  Matrix x = Matrix::Zero(d, d), z = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    x((j + 1) % d, j) = 1.0;
    z(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / d);
  }
  std::vector<Matrix> kraus;
  Matrix xa = Matrix::Identity(d, d);
  for (int a = 0; a < d; ++a) {
    Matrix op = xa;
    for (int b = 0; b < d; ++b) {
      const double w = (a == 0 && b == 0) ? w_id : w_other;
      if (w > 0.0) kraus.push_back(std::sqrt(w) * op);
      op = op * z;
    }
    xa = x * xa;
  }
  return KrausChannel(std::move(kraus), "depolarizing(" + fmt(p) + "," + std::to_string(d) + ")");
}

KrausChannel amplitude_damping_channel(double gamma) {
  require_prob(gamma, "damping parameter");
  Matrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return KrausChannel({k0, k1}, "amplitude_damping(" + fmt(gamma) + ")");
}

KrausChannel erasure_channel(double p, int d) {
  require_prob(p, "erasure probability");
  std::vector<Matrix> kraus;
  Matrix keep = Matrix::Zero(d + 1, d);
  keep.topRows(d) = Matrix::Identity(d, d);
  kraus.push_back(std::sqrt(1.0 - p) * keep);
  if (p > 0.0) {
    for (int i = 0; i < d; ++i) {
      Matrix k = Matrix::Zero(d + 1, d);
      k(d, i) = std::sqrt(p);
      kraus.push_back(std::move(k));
    }
  }
  return KrausChannel(std::move(kraus), "erasure(" + fmt(p) + "," + std::to_string(d) + ")");
}

KrausChannel full_dephasing_channel(int d) {
  std::vector<Matrix> kraus;
  for (int i = 0; i < d; ++i) {
    Matrix k = Matrix::Zero(d, d);
    k(i, i) = 1.0;
    kraus.push_back(std::move(k));
  }
  return KrausChannel(std::move(kraus), "full_dephasing(" + std::to_string(d) + ")");
}

KrausChannel measure_prepare_channel(const std::string& basis, int d) {
  Matrix b;  // columns are the measurement basis
  if (basis == "z" || basis == "computational") {
    b = Matrix::Identity(d, d);
  } else if (basis == "fourier" || (basis == "x" && d != 2)) {
    b.resize(d, d);
    for (int j = 0; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        b(j, k) = std::polar(1.0 / std::sqrt(d), 2.0 * std::numbers::pi * j * k / d);
      }
    }
  } else if ((basis == "x" || basis == "y") && d == 2) {
    b = hermitian_eigen(pauli(basis[0])).vectors;
  } else {
    throw ConfigError("unknown measurement basis '" + basis + "'");
  }
  std::vector<Matrix> kraus;
  for (int i = 0; i < d; ++i) kraus.push_back(basis_vector(d, i) * b.col(i).adjoint());
  return KrausChannel(std::move(kraus),
                      "measure_prepare(" + basis + "," + std::to_string(d) + ")");
}

KrausChannel random_channel(int d_in, int d_out, int k, std::uint64_t seed) {
  const Matrix v = random_isometry(d_in, d_out * k, seed);
  std::vector<Matrix> kraus(static_cast<std::size_t>(k), Matrix(d_out, d_in));
  for (int i = 0; i < k; ++i) {
    for (int b = 0; b < d_out; ++b) kraus[static_cast<std::size_t>(i)].row(b) = v.row(b * k + i);
  }
  return KrausChannel(std::move(kraus), "random(" + std::to_string(d_in) + "," +
                                            std::to_string(d_out) + "," + std::to_string(k) +
                                            "," + std::to_string(seed) + ")");
}

KrausChannel constant_channel(int d_in, int d_out) {
  std::vector<Matrix> kraus;
  for (int a = 0; a < d_in; ++a) {
    Matrix k = Matrix::Zero(d_out, d_in);
    k(0, a) = 1.0;
    kraus.push_back(std::move(k));
  }
  return KrausChannel(std::move(kraus),
                      "constant(" + std::to_string(d_in) + "," + std::to_string(d_out) + ")");
}

KrausChannel trace_channel(int d) {
  std::vector<Matrix> kraus;
  for (int a = 0; a < d; ++a) kraus.push_back(basis_vector(d, a).adjoint());
  return KrausChannel(std::move(kraus), "trace(" + std::to_string(d) + ")");
}

KrausChannel prepare_mixed_channel(int d) {
  std::vector<Matrix> kraus;
  for (int a = 0; a < d; ++a) kraus.push_back(basis_vector(d, a) / std::sqrt(double(d)));
  return KrausChannel(std::move(kraus), "prepare_mixed(" + std::to_string(d) + ")");
}

KrausChannel zoo(const ChannelSpec& s) {
  const auto& p = s.params;
  auto dim_or = [&](std::size_t i, int def, const char* what) {
    return p.size() > i ? require_dim(p[i], what) : def;
  };
  if (s.kind == "identity") {
    require_arity(s, 0, 1);
    return identity_channel(dim_or(0, 2, "dimension"));
  }
  if (s.kind == "dephasing") {
    require_arity(s, 1, 1);
    return dephasing_channel(p[0]);
  }
  if (s.kind == "depolarizing") {
    require_arity(s, 1, 2);
    return depolarizing_channel(p[0], dim_or(1, 2, "dimension"));
  }
  if (s.kind == "amplitude_damping") {
    require_arity(s, 1, 1);
    return amplitude_damping_channel(p[0]);
  }
  if (s.kind == "erasure") {
    require_arity(s, 1, 2);
    return erasure_channel(p[0], dim_or(1, 2, "dimension"));
  }
  if (s.kind == "full_dephasing") {
    require_arity(s, 0, 1);
    return full_dephasing_channel(dim_or(0, 2, "dimension"));
  }
  if (s.kind == "measure_prepare") {
    require_arity(s, 0, 1);
    return measure_prepare_channel(s.text_arg.empty() ? "z" : s.text_arg,
                                   dim_or(0, 2, "dimension"));
  }
  if (s.kind == "random") {
    require_arity(s, 4, 4);
    if (p[3] < 0 || p[3] != std::floor(p[3])) throw ConfigError("random seed must be a non-negative integer");
    return random_channel(require_dim(p[0], "d_in"), require_dim(p[1], "d_out"),
                          require_dim(p[2], "Kraus count"), static_cast<std::uint64_t>(p[3]));
  }
  if (s.kind == "constant") {
    require_arity(s, 0, 2);
    return constant_channel(dim_or(0, 2, "d_in"), dim_or(1, 2, "d_out"));
  }
  if (s.kind == "trace") {
    require_arity(s, 0, 1);
    return trace_channel(dim_or(0, 2, "dimension"));
  }
  if (s.kind == "prepare_mixed") {
    require_arity(s, 0, 1);
    return prepare_mixed_channel(dim_or(0, 2, "dimension"));
  }
  if (s.kind == "custom") {
    if (s.text_arg.empty()) throw ConfigError("custom channel needs a file path");
    return read_channel_file(s.text_arg);
  }
  throw ConfigError("unknown channel kind '" + s.kind + "'");
}

KrausChannel zoo(const std::string& text) { return zoo(ChannelSpec::parse(text)); }

}  // namespace potcap
