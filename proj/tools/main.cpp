#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "potcap/error.hpp"
#include "potcap/runner.hpp"

namespace {

struct Flags {
  std::vector<std::string> channels;
  std::vector<std::string> states;
  std::vector<std::string> quantities;
  std::vector<std::string> experiments;
  std::string config;
  std::string out;
  std::string csv;
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::optional<double> tol;
  std::optional<int> max_dim;
  std::optional<int> aux_random;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--channel", f.channels, "Channel spec, e.g. dephasing(0.1); repeatable");
  sub->add_option("--config", f.config, "JSON run config; flags override its fields");
  sub->add_option("--out", f.out, "Report path (default: standard output)");
  sub->add_option("--seed", f.seed, "Master seed");
  sub->add_option("--restarts", f.restarts, "Random restarts per optimization")->check(CLI::NonNegativeNumber);
  sub->add_option("--tol", f.tol, "Optimizer gradient tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--max-dim", f.max_dim, "Cap on joint input dimension")->check(CLI::PositiveNumber);
}

potcap::RunConfig build_config(const std::string& command, const Flags& f) {
  potcap::RunConfig c;
  if (!f.config.empty()) c = potcap::read_run_config(f.config);
  if (!c.command.empty() && c.command != command) {
    throw potcap::ConfigError("config command '" + c.command + "' does not match '" + command + "'");
  }
  c.command = command;
  if (!f.channels.empty()) c.channels = f.channels;
  if (!f.states.empty()) c.states = f.states;
  if (!f.quantities.empty()) c.quantities = f.quantities;
  if (!f.experiments.empty()) c.experiments = f.experiments;
  if (!f.out.empty()) c.output = f.out;
  if (!f.csv.empty()) c.csv = f.csv;
  if (f.seed) c.seed = *f.seed;
  if (f.restarts) c.restarts = *f.restarts;
  if (f.tol) c.tol = *f.tol;
  if (f.max_dim) c.max_dim = *f.max_dim;
  if (f.aux_random) c.aux_random_per_dim = *f.aux_random;
  return c;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw potcap::ConfigError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacities, potential-capacity bounds and additivity experiments for quantum channels"};
  app.require_subcommand(1);
  Flags f;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"capacity", "Single-letter capacities (chi, q1, p1, c_e, q_a)"},
      {"potential", "Potential-capacity bounds, activation witness and perfection audit"},
      {"lift", "Optimal canonical lifting and its coherent information"},
      {"classify", "Hadamard, entanglement-breaking and degradability tests"},
      {"additivity", "Additivity gaps, regularization chain, activation search"},
      {"structure", "Equality-case checks and block-form discovery for bipartite states"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, f);
    if (name == "capacity" || name == "additivity") {
      sub->add_option("--quantity", f.quantities, "Quantity (chi, msw_chi, q1, p1, c_e, q_a); repeatable");
    }
    if (name == "additivity") {
      sub->add_option("--experiment", f.experiments, "gap, chain, activation or subadditivity; repeatable");
      sub->add_option("--csv", f.csv, "Also write the gap records as CSV");
      sub->add_option("--aux-random", f.aux_random, "Random auxiliaries per dimension for activation");
    }
    if (name == "structure") {
      sub->add_option("--state", f.states, "State spec, e.g. bell, isotropic(0.9), block(4,2,7); repeatable");
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }
  try {
    const auto* sub = app.get_subcommands().front();
    const auto config = build_config(sub->get_name(), f);
    const auto result = potcap::run(config);
    const std::string text = result.report.dump(2) + "\n";
    if (config.output.empty()) {
      std::cout << text;
    } else {
      write_text(config.output, text);
    }
    if (!config.csv.empty() && !result.csv.empty()) write_text(config.csv, result.csv);
    return 0;
  } catch (const potcap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const potcap::DimensionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const potcap::LabelError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 3;
  } catch (const potcap::Error& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
