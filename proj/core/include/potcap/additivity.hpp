#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "potcap/capacities.hpp"
#include "potcap/channels.hpp"
#include "potcap/potential.hpp"

namespace potcap {

/// One tensor-product experiment. In "additivity" mode sum_of_parts is
/// f(A) + f(B); in "activation" mode it is f(B) alone, so gap is the gain
/// f(A (x) B) - f(B) contributed by the auxiliary B.
struct GapRecord {
  std::string quantity;
  std::string mode;  // additivity, activation
  std::string channel_a;
  std::string channel_b;
  double joint_value = 0.0;
  double value_a = 0.0;
  double value_b = 0.0;
  double sum_of_parts = 0.0;
  double gap = 0.0;
  std::uint64_t seed = 0;
  OptimDiagnostics joint_diagnostics;
};

struct AdditivityOptions {
  CapacityOptions capacity;
  // Cap on the total input dimension of any tensor channel.
  int max_dim = 16;
};

/// Quantities with product strategies, hence gap >= 0 up to optimizer error.
bool is_superadditive(const std::string& quantity);

/// f(A (x) B) against f(A) + f(B) with identical budgets; the joint search
/// is seeded with the product of the two marginal optima.
GapRecord additivity_gap(const std::string& quantity, const KrausChannel& a, const KrausChannel& b,
                         const AdditivityOptions& opts = {});

/// Zoo channels with input dimension <= max_dim plus `random_per_dim`
/// seeded random channels per dimension 2..max_dim.
std::vector<KrausChannel> default_aux_family(int max_dim = 3, int random_per_dim = 50,
                                             std::uint64_t seed = 0x5eed);

struct ActivationResult {
  GapRecord best;
  std::vector<GapRecord> records;  // one per evaluated auxiliary
  int skipped = 0;                 // auxiliaries over the dimension cap
};

/// max over the family of f(ch (x) M) - f(M): a lower-bound witness for the
/// potential capacity, never a claim about the supremum.
ActivationResult activation_search(const std::string& quantity, const KrausChannel& ch,
                                   const std::vector<KrausChannel>& family,
                                   const AdditivityOptions& opts = {});

/// Upper bound on the potential version of `quantity` (chi, q1, p1, q_a, c_e).
BoundReport potential_upper_bound(const std::string& quantity, const KrausChannel& ch,
                                  const PotentialOptions& opts = {});

struct ChainEntry {
  std::string quantity;
  double single = 0.0;       // f(ch)
  double half_double = 0.0;  // f(ch (x) ch) / 2
  std::string upper_name;
  double upper = 0.0;
  bool lower_ok = false;  // single <= half_double + tol
  bool upper_ok = false;  // half_double <= upper + tol
};

struct ChainReport {
  std::string channel;
  double tol = 5e-3;
  std::vector<ChainEntry> entries;
  bool passed = false;
};

struct ChainOptions {
  AdditivityOptions additivity;
  PotentialOptions potential;
  double tol = 5e-3;
};

/// Checks f(ch) <= f(ch (x) ch) / 2 <= potential upper bound for chi, q1, p1.
ChainReport chain_check(const KrausChannel& ch, const ChainOptions& opts = {});

struct SubadditivityReport {
  std::string channel_a;
  std::string channel_b;
  double eof_a = 0.0;
  double eof_b = 0.0;
  double eof_joint = 0.0;
  double slack = 0.0;  // eof_a + eof_b - eof_joint
  double tol = 5e-3;
  bool holds = false;
};

/// channel_eof(A (x) B) <= channel_eof(A) + channel_eof(B) + tol.
SubadditivityReport subadditivity_check_potential_proxy(const KrausChannel& a,
                                                        const KrausChannel& b,
                                                        const PotentialOptions& opts = {},
                                                        double tol = 5e-3, int max_dim = 16);

/// One header line plus one row per record.
std::string gap_records_csv(const std::vector<GapRecord>& records);

}  // namespace potcap
