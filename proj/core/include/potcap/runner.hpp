#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "potcap/io.hpp"

namespace potcap {

/// Everything a command needs. Unset optimizer knobs keep each operation's
/// own defaults.
struct RunConfig {
  std::string command;  // capacity, potential, lift, classify, additivity, structure
  std::vector<std::string> channels;
  std::vector<std::string> states;       // structure only
  std::vector<std::string> quantities;   // capacity and additivity
  std::vector<std::string> experiments;  // additivity: gap, chain, activation, subadditivity
  std::uint64_t seed = 1;
  std::optional<int> restarts;
  std::optional<int> max_iterations;
  std::optional<double> tol;  // optimizer gradient tolerance
  int max_dim = 16;
  int aux_max_dim = 3;
  int aux_random_per_dim = 50;
  std::string output;  // empty: standard output
  std::string csv;     // optional CSV table (additivity)
};

const std::vector<std::string>& run_commands();

Json to_json(const RunConfig& c);
/// Validates fields; errors name the field and, when `source` is the raw
/// text the JSON came from, its line.
RunConfig run_config_from_json(const Json& j, const std::string& source = {});
RunConfig read_run_config(const std::string& path);

/// Fills command-dependent defaults and checks the config; throws ConfigError.
RunConfig normalized(RunConfig c);

struct RunOutput {
  Json report;      // includes a "timestamp" field
  std::string csv;  // empty unless the command produces a table
};

RunOutput run(const RunConfig& config);

/// The report without its timestamp, for reproducibility comparisons.
Json report_payload(const Json& report);

/// Bipartite test state from text: bell, product, isotropic(v), werner(p),
/// random(d_b,d_e,rank,seed), block(d_b,d_e,seed), separable(d_b,d_e,terms,seed),
/// custom(path to {d_b, d_e, state}).
struct StateSpec {
  std::string name;
  Matrix rho;
  int d_b = 0;
  int d_e = 0;
};
StateSpec state_from_spec(const std::string& text);

}  // namespace potcap
