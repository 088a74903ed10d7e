#pragma once

#include <string>
#include <vector>

#include "potcap/linops.hpp"

namespace potcap {

inline constexpr double kTolCptp = 1e-8;
// Choi eigenvalues below this are dropped when extracting Kraus operators.
inline constexpr double kKrausRankCutoff = 1e-10;

/// CPTP map stored as Kraus operators K_i (d_out x d_in), the source of truth
/// for every other representation. The i-th operator is attached to the
/// environment basis vector |i>.
class KrausChannel {
 public:
  KrausChannel(std::vector<Matrix> kraus, std::string name = {});

  int d_in() const { return d_in_; }
  int d_out() const { return d_out_; }
  int num_kraus() const { return static_cast<int>(kraus_.size()); }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  const Matrix& kraus(int i) const { return kraus_[static_cast<std::size_t>(i)]; }
  const std::string& name() const { return name_; }

  KrausChannel renamed(std::string name) const;

 private:
  std::vector<Matrix> kraus_;
  int d_in_ = 0;
  int d_out_ = 0;
  std::string name_;
};

struct CptpReport {
  bool passed = false;
  double deviation = 0.0;  // max-abs entry of sum K^dagger K - I
};

CptpReport validate_cptp(const std::vector<Matrix>& kraus, double tol = kTolCptp);
CptpReport validate_cptp(const KrausChannel& ch, double tol = kTolCptp);

/// U = sum_i K_i (x) |i>^E, acting A -> B (x) E.
struct StinespringIsometry {
  Matrix matrix;
  SystemDims dims;  // {"B", d_out}, {"E", d_env}
  int d_in = 0;

  int d_out() const { return dims.dims()[0]; }
  int d_env() const { return dims.dims()[1]; }
};

StinespringIsometry kraus_to_stinespring(const KrausChannel& ch);

/// Channel A -> E obtained by tracing B out of the Stinespring output.
KrausChannel complementary(const KrausChannel& ch);

Matrix apply(const KrausChannel& ch, const Matrix& rho);
DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho,
                    std::string out_label = "B");
/// Heisenberg picture N^dagger(X) = sum_i K_i^dagger X K_i.
Matrix apply_adjoint(const KrausChannel& ch, const Matrix& x);

/// (id (x) N) acting on the last subsystem of rho.
Matrix apply_to_half(const KrausChannel& ch, const Matrix& rho, int d_rest);
DensityMatrix apply_to_half(const KrausChannel& ch, const DensityMatrix& rho,
                            std::string out_label = "B");

KrausChannel tensor_channels(const KrausChannel& a, const KrausChannel& b);

/// K'_j = sum_i u_{ji} K_i for an m x k isometry u.
KrausChannel kraus_rotate(const KrausChannel& ch, const Matrix& u);

struct ChoiMatrix {
  Matrix matrix;  // on A (x) B
  int d_in = 0;
  int d_out = 0;
  bool normalized = false;  // trace 1 if true, trace d_in otherwise
};

ChoiMatrix choi_of(const KrausChannel& ch, bool normalized = false);
KrausChannel kraus_from_choi(const ChoiMatrix& choi, std::string name = {});

/// N(rho) = tr_A[(rho^T (x) I) C] with C the unnormalized Choi matrix.
Matrix apply_via_choi(const ChoiMatrix& choi, const Matrix& rho);

/// Compose: (second o first).
KrausChannel compose(const KrausChannel& first, const KrausChannel& second);

}  // namespace potcap
