#include "potcap/structure.hpp"

#include <cmath>
#include <random>

#include "potcap/entropics.hpp"
#include "potcap/error.hpp"

namespace potcap {

Matrix BlockDecomposition::embedding(std::size_t i) const {
  if (!embeddings.empty()) return embeddings.at(i);
  int offset = 0;
  for (std::size_t j = 0; j < i; ++j) offset += blocks[j].d_left * blocks[j].d_right;
  const int n = blocks.at(i).d_left * blocks.at(i).d_right;
  Matrix v = Matrix::Zero(d_b, n);
  for (int c = 0; c < n; ++c) v(offset + c, c) = 1.0;
  return v;
}

Block make_block(double prob, const Matrix& left_state, const Vector& psi, int d_right) {
  Block b;
  b.prob = prob;
  b.left_state = left_state;
  b.phi = psi * psi.adjoint();
  b.d_left = static_cast<int>(left_state.rows());
  b.d_right = d_right;
  return b;
}

void check_block_decomposition(const BlockDecomposition& bd, double tol) {
  if (bd.d_b < 1 || bd.d_e < 1) throw DimensionError("block decomposition needs d_b, d_e >= 1");
  if (bd.blocks.empty()) throw DimensionError("block decomposition has no blocks");
  if (!bd.embeddings.empty() && bd.embeddings.size() != bd.blocks.size()) {
    throw DimensionError("one embedding per block is required");
  }
  double total = 0.0;
  int stacked = 0;
  for (std::size_t i = 0; i < bd.blocks.size(); ++i) {
    const auto& b = bd.blocks[i];
    const std::string tag = "block " + std::to_string(i);
    if (b.d_left < 1 || b.d_right < 1) throw DimensionError(tag + ": dimensions must be >= 1");
    if (b.left_state.rows() != b.d_left || b.left_state.cols() != b.d_left) {
      throw DimensionError(tag + ": left state is not d_left x d_left");
    }
    const int n_phi = b.d_right * bd.d_e;
    if (b.phi.rows() != n_phi || b.phi.cols() != n_phi) {
      throw DimensionError(tag + ": phi is not (d_right d_e) square");
    }
    if (b.prob < -tol) throw InvariantViolation(tag + ": negative probability");
    check_density(b.left_state);
    check_density(b.phi);
    if (std::abs((b.phi * b.phi).trace().real() - 1.0) > tol) {
      throw InvariantViolation(tag + ": phi is not pure");
    }
    total += b.prob;
    stacked += b.d_left * b.d_right;
  }
  if (std::abs(total - 1.0) > tol) throw InvariantViolation("block probabilities do not sum to 1");
  if (bd.embeddings.empty()) {
    if (stacked > bd.d_b) throw DimensionError("blocks do not fit inside B");
    return;
  }
  for (std::size_t i = 0; i < bd.blocks.size(); ++i) {
    const Matrix& v = bd.embeddings[i];
    const int n = bd.blocks[i].d_left * bd.blocks[i].d_right;
    if (v.rows() != bd.d_b || v.cols() != n) {
      throw DimensionError("embedding " + std::to_string(i) + " has the wrong shape");
    }
    if ((v.adjoint() * v - Matrix::Identity(n, n)).norm() > std::sqrt(tol)) {
      throw InvariantViolation("embedding " + std::to_string(i) + " is not an isometry");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if ((bd.embeddings[j].adjoint() * v).norm() > std::sqrt(tol)) {
        throw InvariantViolation("embeddings " + std::to_string(j) + " and " + std::to_string(i) +
                                 " overlap");
      }
    }
  }
}

DensityMatrix construct_block_state(const BlockDecomposition& bd) {
  check_block_decomposition(bd);
  const int n = bd.d_b * bd.d_e;
  Matrix rho = Matrix::Zero(n, n);
  const Matrix id_e = Matrix::Identity(bd.d_e, bd.d_e);
  for (std::size_t i = 0; i < bd.blocks.size(); ++i) {
    const auto& b = bd.blocks[i];
    const Matrix v = kron(bd.embedding(i), id_e);
    rho += b.prob * v * kron(b.left_state, b.phi) * v.adjoint();
  }
  return DensityMatrix(hermitian_part(rho), SystemDims({"B", "E"}, {bd.d_b, bd.d_e}));
}

double block_entropy_sum(const BlockDecomposition& bd) {
  double s = 0.0;
  for (const auto& b : bd.blocks) {
    if (b.prob > 0.0) s += b.prob * entropy(trace_out_right(b.phi, b.d_right, bd.d_e));
  }
  return s;
}

double coherent_difference(const Matrix& rho, int d_b, int d_e) {
  return entropy(trace_out_right(rho, d_b, d_e)) - entropy(rho);
}

std::string_view to_string(EqualityMeasure m) {
  switch (m) {
    case EqualityMeasure::c_arrow: return "c_arrow";
    case EqualityMeasure::g: return "g";
    case EqualityMeasure::eof: return "eof";
  }
  return "eof";
}

EqualityMeasure equality_measure_from_string(std::string_view s) {
  if (s == "c_arrow") return EqualityMeasure::c_arrow;
  if (s == "g") return EqualityMeasure::g;
  if (s == "eof") return EqualityMeasure::eof;
  throw ConfigError("unknown equality measure '" + std::string(s) + "'");
}

EqualityReport verify_equality_case(const Matrix& rho, int d_b, int d_e, EqualityMeasure which,
                                    const EqualityOptions& opts) {
  if (rho.rows() != static_cast<Eigen::Index>(d_b) * d_e) {
    throw DimensionError("state does not match d_b * d_e");
  }
  check_density(rho);
  EqualityReport r;
  r.which = which;
  r.lhs = coherent_difference(rho, d_b, d_e);
  switch (which) {
    case EqualityMeasure::c_arrow: {
      const auto c = c_arrow(rho, d_b, d_e, opts.c_arrow);
      r.rhs = c.value;
      r.rhs_direction = c.direction;
      break;
    }
    case EqualityMeasure::g: {
      const auto g = g_measure(rho, d_b, d_e, opts.g);
      r.rhs = g.value;
      r.rhs_direction = g.direction;
      break;
    }
    case EqualityMeasure::eof: {
      const auto e = entanglement_of_formation(rho, d_b, d_e, opts.eof);
      r.rhs = e.value;
      r.rhs_direction = e.direction;
      break;
    }
  }
  r.gap = r.rhs - r.lhs;
  r.candidate = std::abs(r.gap) < 1e-3;
  return r;
}

BlockVerification verify_block_form(const Matrix& rho, const BlockDecomposition& candidate,
                                    double tol) {
  BlockVerification v;
  if (rho.rows() != static_cast<Eigen::Index>(candidate.d_b) * candidate.d_e) {
    v.problems.push_back("candidate dimensions do not match the state");
    return v;
  }
  try {
    check_block_decomposition(candidate, tol);
    v.invariants_ok = true;
  } catch (const Error& e) {
    v.problems.push_back(e.what());
    return v;
  }
  v.distance = (construct_block_state(candidate).matrix() - rho).norm();
  if (v.distance >= tol) v.problems.push_back("assembled candidate differs from the state");
  v.passed = v.problems.empty();
  return v;
}

namespace {

// Orthonormal basis (as matrices) of {Y : [Y, A] = 0 for all A}.
std::vector<Matrix> commutant(const std::vector<Matrix>& ops, int d) {
  const int n = d * d;
  Matrix stacked(static_cast<Eigen::Index>(ops.size()) * n, n);
  const Matrix id = Matrix::Identity(d, d);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    // vec(A Y - Y A) = (I (x) A - A^T (x) I) vec(Y), column-major.
    stacked.middleRows(static_cast<Eigen::Index>(i) * n, n) =
        kron(id, ops[i]) - kron(Matrix(ops[i].transpose()), id);
  }
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cut = std::max(1e-9, 1e-7 * (s.size() > 0 ? s(0) : 0.0));
  std::vector<Matrix> out;
  for (int c = 0; c < n; ++c) {
    if (c < s.size() && s(c) > cut) continue;
    const Vector col = svd.matrixV().col(c);
    out.push_back(Eigen::Map<const Matrix>(col.data(), d, d));
  }
  return out;
}

std::optional<BlockDecomposition> propose(const Matrix& rho, int d_b, int d_e,
                                          std::uint64_t seed) {
  std::vector<Matrix> ops;
  for (int a = 0; a < d_e; ++a) {
    for (int b = 0; b < d_e; ++b) {
      Matrix x = Matrix::Zero(d_e, d_e);
      x(a, b) = 1.0;
      ops.push_back(trace_out_right(kron(Matrix(Matrix::Identity(d_b, d_b)), x) * rho, d_b, d_e));
    }
  }
  const auto basis = commutant(ops, d_b);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix y = Matrix::Zero(d_b, d_b);
  for (const auto& m : basis) y += normal(rng) * (m + m.adjoint());
  const auto eig = hermitian_eigen(y);
  const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());

  BlockDecomposition bd;
  bd.d_b = d_b;
  bd.d_e = d_e;
  const Matrix id_e = Matrix::Identity(d_e, d_e);
  Eigen::Index start = 0;
  while (start < d_b) {
    Eigen::Index end = start + 1;
    while (end < d_b && eig.values(end) - eig.values(end - 1) < 1e-6 * scale) ++end;
    const Matrix w = eig.vectors.middleCols(start, end - start);
    start = end;
    const Matrix wk = kron(w, id_e);
    const Matrix sigma = wk.adjoint() * rho * wk;
    const double p = sigma.trace().real();
    if (p < 1e-12) continue;
    const auto te = hermitian_eigen(hermitian_part(sigma / p));
    const int nk = static_cast<int>(w.cols());
    std::vector<Vector> us;
    std::vector<double> lams;
    for (Eigen::Index t = te.values.size() - 1; t >= 0; --t) {
      if (te.values(t) <= 1e-9) break;
      us.push_back(te.vectors.col(t));
      lams.push_back(te.values(t));
    }
    const auto as_matrix = [&](const Vector& u) {
      Matrix m(nk, d_e);
      for (int b = 0; b < nk; ++b) {
        for (int e = 0; e < d_e; ++e) m(b, e) = u(b * d_e + e);
      }
      return m;
    };
    Eigen::JacobiSVD<Matrix> svd(as_matrix(us.front()), Eigen::ComputeFullU | Eigen::ComputeFullV);
    std::vector<int> keep;
    for (Eigen::Index j = 0; j < svd.singularValues().size(); ++j) {
      if (svd.singularValues()(j) > 1e-7) keep.push_back(static_cast<int>(j));
    }
    const int r = static_cast<int>(us.size());
    const int s = static_cast<int>(keep.size());
    if (r * s > nk) return std::nullopt;
    Matrix cols(nk, r * s);
    Vector psi = Vector::Zero(s * d_e);
    for (int j = 0; j < s; ++j) {
      const double sj = svd.singularValues()(keep[j]);
      const Vector bj = svd.matrixV().col(keep[j]);
      for (int e = 0; e < d_e; ++e) psi(j * d_e + e) = sj * std::conj(bj(e));
      for (int t = 0; t < r; ++t) cols.col(t * s + j) = as_matrix(us[t]) * bj / sj;
    }
    double lam_total = 0.0;
    for (double l : lams) lam_total += l;
    Matrix left = Matrix::Zero(r, r);
    for (int t = 0; t < r; ++t) left(t, t) = lams[t] / lam_total;
    bd.blocks.push_back(make_block(p, left, psi.normalized(), s));
    bd.embeddings.push_back(w * cols);
  }
  if (bd.blocks.empty()) return std::nullopt;
  double total = 0.0;
  for (const auto& b : bd.blocks) total += b.prob;
  for (auto& b : bd.blocks) b.prob /= total;
  return bd;
}

}  // namespace

DiscoveryResult discover_block_form(const Matrix& rho, int d_b, int d_e, std::uint64_t seed,
                                    double tol) {
  if (rho.rows() != static_cast<Eigen::Index>(d_b) * d_e) {
    throw DimensionError("state does not match d_b * d_e");
  }
  check_density(rho);
  DiscoveryResult res;
  res.status = "undecided";
  const auto bd = propose(rho, d_b, d_e, seed);
  if (!bd) {
    res.verification.problems.push_back("no tensor factorization found for a block");
    return res;
  }
  res.verification = verify_block_form(rho, *bd, tol);
  res.decomposition = bd;
  if (res.verification.passed) res.status = "verified";
  return res;
}

}  // namespace potcap

namespace potcap {

BlockDecomposition random_block_decomposition(int d_b, int d_e, std::uint64_t seed,
                                              int max_blocks) {
  if (d_b < 1 || d_e < 1 || max_blocks < 1) throw DimensionError("invalid block dimensions");
  std::mt19937_64 rng(seed);
  // Partition d_b into block sizes, then factor each size as d_left * d_right.
  std::vector<int> sizes;
  int remaining = d_b;
  while (remaining > 0) {
    if (static_cast<int>(sizes.size()) + 1 == max_blocks || remaining == 1) {
      sizes.push_back(remaining);
      break;
    }
    std::uniform_int_distribution<int> pick(1, remaining);
    const int s = pick(rng);
    sizes.push_back(s);
    remaining -= s;
  }
  BlockDecomposition bd;
  bd.d_b = d_b;
  bd.d_e = d_e;
  std::uniform_real_distribution<double> unit(0.2, 1.0);
  double total = 0.0;
  std::uint64_t sub = 0;
  for (int size : sizes) {
    std::vector<int> divisors;
    for (int q = 1; q <= size; ++q) {
      if (size % q == 0) divisors.push_back(q);
    }
    std::uniform_int_distribution<std::size_t> pick(0, divisors.size() - 1);
    const int d_left = divisors[pick(rng)];
    const int d_right = size / d_left;
    const Matrix left = random_density(SystemDims::single("L", d_left), seed ^ (0x1000 + sub++)).matrix();
    const Vector psi =
        random_pure(SystemDims({"R", "E"}, {d_right, d_e}), seed ^ (0x2000 + sub++)).vector();
    const double p = unit(rng);
    total += p;
    bd.blocks.push_back(make_block(p, left, psi, d_right));
  }
  for (auto& b : bd.blocks) b.prob /= total;
  const Matrix u = random_unitary(d_b, seed ^ 0x3000);
  int offset = 0;
  for (const auto& b : bd.blocks) {
    const int n = b.d_left * b.d_right;
    bd.embeddings.push_back(u.middleCols(offset, n));
    offset += n;
  }
  return bd;
}

}  // namespace potcap
