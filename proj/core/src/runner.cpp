#include "potcap/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "potcap/additivity.hpp"
#include "potcap/error.hpp"
#include "potcap/reports.hpp"
#include "potcap/seeding.hpp"
#include "potcap/structure.hpp"
#include "potcap/zoo.hpp"

namespace potcap {

namespace {

const std::vector<std::string> kQuantities{"chi", "msw_chi", "q1", "p1", "c_e", "q_a"};
const std::vector<std::string> kExperiments{"gap", "chain", "activation", "subadditivity"};
const std::vector<std::string> kFields{
    "schema_version", "command",  "channels",    "states",      "quantities",
    "experiments",    "seed",     "restarts",    "max_iterations", "tol",
    "max_dim",        "aux_max_dim", "aux_random_per_dim", "output", "csv"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

int line_of(const std::string& source, const std::string& key) {
  const auto pos = source.find("\"" + key + "\"");
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(source.begin(), source.begin() + pos, '\n'));
}

[[noreturn]] void field_error(const std::string& source, const std::string& key,
                              const std::string& msg) {
  const int line = line_of(source, key);
  std::string where = "field '" + key + "'";
  if (line > 0) where = "line " + std::to_string(line) + ", " + where;
  throw ConfigError(where + ": " + msg);
}

std::vector<std::string> string_list(const Json& j, const std::string& key,
                                     const std::string& source) {
  if (!j.is_array()) field_error(source, key, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) field_error(source, key, "expected an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

int int_field(const Json& j, const std::string& key, const std::string& source, int min) {
  if (!j.is_number_integer()) field_error(source, key, "expected an integer");
  const auto v = j.get<long long>();
  if (v < min || v > 1000000000LL) {
    field_error(source, key, "must be at least " + std::to_string(min));
  }
  return static_cast<int>(v);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

OptimOptions optim_for(const RunConfig& c, OptimOptions base, const std::string& op,
                       std::uint64_t index) {
  base.seed = derive_seed(c.seed, op, index);
  if (c.restarts) base.restarts = *c.restarts;
  if (c.max_iterations) base.max_iterations = *c.max_iterations;
  if (c.tol) base.gtol = *c.tol;
  return base;
}

Json channel_header(const std::string& spec, const KrausChannel& ch) {
  return Json{{"channel", spec}, {"name", ch.name()}, {"d_in", ch.d_in()},
              {"d_out", ch.d_out()}, {"num_kraus", ch.num_kraus()}};
}

Json run_capacity(const RunConfig& c) {
  Json results = Json::array();
  for (std::size_t i = 0; i < c.channels.size(); ++i) {
    const auto ch = zoo(c.channels[i]);
    Json entry = channel_header(c.channels[i], ch);
    Json reports = Json::array();
    for (const auto& q : c.quantities) {
      CapacityOptions co;
      co.optim = optim_for(c, co.optim, "capacity:" + q, i);
      reports.push_back(to_json(compute_capacity(q, ch, co)));
    }
    entry["reports"] = reports;
    results.push_back(entry);
  }
  return results;
}

Json run_potential(const RunConfig& c) {
  Json results = Json::array();
  for (std::size_t i = 0; i < c.channels.size(); ++i) {
    const auto ch = zoo(c.channels[i]);
    PotentialOptions po;
    po.optim = optim_for(c, po.optim, "potential", i);
    const OptimOptions qo = optim_for(c, OptimOptions{}, "qa_p", i);
    const auto qa = q_a_potential(ch, qo);
    const auto witness = activation_witness_qa(ch, qo);
    const auto audit = perfection_audit(ch, po);
    Json bounds = Json::array({to_json(qa)});
    for (const auto& b : audit.bounds) bounds.push_back(to_json(b));
    Json entry = channel_header(c.channels[i], ch);
    entry["bounds"] = bounds;
    entry["activation_witness"] = to_json(witness);
    entry["perfection_audit"] = to_json(audit);
    results.push_back(entry);
  }
  return results;
}

Json run_lift(const RunConfig& c) {
  Json results = Json::array();
  for (std::size_t i = 0; i < c.channels.size(); ++i) {
    const auto ch = zoo(c.channels[i]);
    PotentialOptions po;
    po.optim = optim_for(c, po.optim, "lift:eof", i);
    const auto eof = channel_eof(ch, po);
    const auto lift = canonical_lift(ch, eof.kraus_rotation);
    CapacityOptions co;
    co.optim = optim_for(c, co.optim, "lift:q1", i);
    co.warm_starts.push_back({{1.0}, {eof.best_input}});
    const auto lq = q1(lift.lifted, co);
    Json entry = channel_header(c.channels[i], ch);
    entry["channel_eof"] = to_json(eof);
    entry["lift"] = to_json(lift);
    entry["lifted_q1"] = to_json(lq);
    entry["lifted_is_hadamard"] = to_json(is_hadamard(lift.lifted));
    entry["agreement"] = std::abs(lq.value - eof.value);
    results.push_back(entry);
  }
  return results;
}

Json run_classify(const RunConfig& c) {
  Json results = Json::array();
  for (std::size_t i = 0; i < c.channels.size(); ++i) {
    const auto ch = zoo(c.channels[i]);
    DegradabilityOptions dopt;
    dopt.optim = optim_for(c, dopt.optim, "classify:degradable", i);
    DegradabilityOptions aopt;
    aopt.optim = optim_for(c, aopt.optim, "classify:anti_degradable", i);
    Json entry = channel_header(c.channels[i], ch);
    entry["hadamard"] = to_json(is_hadamard(ch));
    entry["entanglement_breaking"] = to_json(is_entanglement_breaking(ch));
    entry["degradable"] = to_json(is_degradable(ch, dopt));
    entry["anti_degradable"] = to_json(is_degradable(complementary(ch), aopt));
    results.push_back(entry);
  }
  return results;
}

Json run_additivity(const RunConfig& c, std::string* csv) {
  std::vector<KrausChannel> chans;
  for (const auto& s : c.channels) chans.push_back(zoo(s));
  std::vector<GapRecord> table;
  Json out = Json::object();
  std::uint64_t counter = 0;
  const auto add_opts = [&](const std::string& op) {
    AdditivityOptions ao;
    ao.max_dim = c.max_dim;
    ao.capacity.optim = optim_for(c, ao.capacity.optim, op, counter++);
    return ao;
  };
  if (contains(c.experiments, "gap")) {
    Json gaps = Json::array();
    for (std::size_t i = 0; i < chans.size(); ++i) {
      for (std::size_t j = i + 1; j < chans.size(); ++j) {
        for (const auto& q : c.quantities) {
          const auto g = additivity_gap(q, chans[i], chans[j], add_opts("additivity:gap"));
          gaps.push_back(to_json(g));
          table.push_back(g);
        }
      }
    }
    out["gaps"] = gaps;
  }
  if (contains(c.experiments, "chain")) {
    Json chains = Json::array();
    for (const auto& ch : chans) {
      ChainOptions co;
      co.additivity = add_opts("additivity:chain");
      co.potential.optim = optim_for(c, co.potential.optim, "additivity:chain_bound", counter++);
      chains.push_back(to_json(chain_check(ch, co)));
    }
    out["chains"] = chains;
  }
  if (contains(c.experiments, "activation")) {
    const auto family = default_aux_family(c.aux_max_dim, c.aux_random_per_dim,
                                           derive_seed(c.seed, "additivity:aux_family"));
    Json acts = Json::array();
    for (const auto& ch : chans) {
      for (const auto& q : c.quantities) {
        const auto r = activation_search(q, ch, family, add_opts("additivity:activation"));
        acts.push_back(to_json(r));
        table.insert(table.end(), r.records.begin(), r.records.end());
      }
    }
    out["activations"] = acts;
  }
  if (contains(c.experiments, "subadditivity")) {
    Json subs = Json::array();
    for (std::size_t i = 0; i < chans.size(); ++i) {
      for (std::size_t j = i + 1; j < chans.size(); ++j) {
        PotentialOptions po;
        po.optim = optim_for(c, po.optim, "additivity:subadditivity", counter++);
        subs.push_back(
            to_json(subadditivity_check_potential_proxy(chans[i], chans[j], po, 5e-3, c.max_dim)));
      }
    }
    out["subadditivity"] = subs;
  }
  if (csv && !table.empty()) *csv = gap_records_csv(table);
  return out;
}

Json run_structure(const RunConfig& c) {
  Json results = Json::array();
  for (std::size_t i = 0; i < c.states.size(); ++i) {
    const auto st = state_from_spec(c.states[i]);
    EqualityOptions eo;
    eo.c_arrow.optim = optim_for(c, eo.c_arrow.optim, "structure:c_arrow", i);
    eo.g.optim = optim_for(c, eo.g.optim, "structure:g", i);
    eo.eof.optim = optim_for(c, eo.eof.optim, "structure:eof", i);
    Json checks = Json::array();
    double values[3] = {0.0, 0.0, 0.0};
    int k = 0;
    double lhs = 0.0;
    for (auto which : {EqualityMeasure::c_arrow, EqualityMeasure::g, EqualityMeasure::eof}) {
      const auto r = verify_equality_case(st.rho, st.d_b, st.d_e, which, eo);
      lhs = r.lhs;
      values[k++] = r.rhs;
      checks.push_back(to_json(r));
    }
    const auto disc = discover_block_form(st.rho, st.d_b, st.d_e, derive_seed(c.seed, "structure:discover", i));
    Json entry{{"state", c.states[i]}, {"d_b", st.d_b}, {"d_e", st.d_e}};
    entry["coherent_difference"] = lhs;
    entry["equality_checks"] = checks;
    entry["chain_holds"] = lhs <= values[1] + 1e-3 && values[1] <= values[2] + 1e-3;
    entry["block_form"] = to_json(disc);
    results.push_back(entry);
  }
  return results;
}

std::vector<double> numeric_args(const std::string& body, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b, item.find_last_not_of(" \t") - b + 1);
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end != item.c_str() + item.size()) {
      throw ConfigError("state spec '" + text + "': bad argument '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

int dim_arg(double v, const std::string& text) {
  if (v < 1 || v > 64 || v != std::floor(v)) {
    throw ConfigError("state spec '" + text + "': dimensions must be integers in [1, 64]");
  }
  return static_cast<int>(v);
}

}  // namespace

const std::vector<std::string>& run_commands() {
  static const std::vector<std::string> c{"capacity", "potential", "lift",
                                          "classify", "additivity", "structure"};
  return c;
}

Json to_json(const RunConfig& c) {
  const auto opt_int = [](const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"schema_version", kSchemaVersion},
              {"command", c.command},
              {"channels", c.channels},
              {"states", c.states},
              {"quantities", c.quantities},
              {"experiments", c.experiments},
              {"seed", c.seed},
              {"restarts", opt_int(c.restarts)},
              {"max_iterations", opt_int(c.max_iterations)},
              {"tol", c.tol ? Json(*c.tol) : Json(nullptr)},
              {"max_dim", c.max_dim},
              {"aux_max_dim", c.aux_max_dim},
              {"aux_random_per_dim", c.aux_random_per_dim},
              {"output", c.output},
              {"csv", c.csv}};
}

RunConfig run_config_from_json(const Json& j, const std::string& source) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (!contains(kFields, key)) field_error(source, key, "unknown field");
    if (value.is_null()) continue;
    if (key == "schema_version") {
      if (!value.is_number_integer() || value.get<int>() != kSchemaVersion) {
        field_error(source, key, "unsupported schema version");
      }
    } else if (key == "command" || key == "output" || key == "csv") {
      if (!value.is_string()) field_error(source, key, "expected a string");
      (key == "command" ? c.command : key == "output" ? c.output : c.csv) = value.get<std::string>();
    } else if (key == "channels") {
      c.channels = string_list(value, key, source);
    } else if (key == "states") {
      c.states = string_list(value, key, source);
    } else if (key == "quantities") {
      c.quantities = string_list(value, key, source);
    } else if (key == "experiments") {
      c.experiments = string_list(value, key, source);
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) field_error(source, key, "expected a non-negative integer");
      c.seed = value.get<std::uint64_t>();
    } else if (key == "restarts") {
      c.restarts = int_field(value, key, source, 0);
    } else if (key == "max_iterations") {
      c.max_iterations = int_field(value, key, source, 1);
    } else if (key == "tol") {
      if (!value.is_number() || !(value.get<double>() > 0.0)) {
        field_error(source, key, "expected a positive number");
      }
      c.tol = value.get<double>();
    } else if (key == "max_dim") {
      c.max_dim = int_field(value, key, source, 1);
    } else if (key == "aux_max_dim") {
      c.aux_max_dim = int_field(value, key, source, 1);
    } else if (key == "aux_random_per_dim") {
      c.aux_random_per_dim = int_field(value, key, source, 0);
    }
  }
  return c;
}

RunConfig read_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(byte > 0 ? byte - 1 : 0), '\n');
    throw ConfigError(path + ": line " + std::to_string(line) + ": invalid JSON");
  }
  try {
    return run_config_from_json(j, text);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

RunConfig normalized(RunConfig c) {
  if (!contains(run_commands(), c.command)) {
    throw ConfigError("field 'command': unknown command '" + c.command + "'");
  }
  if (c.quantities.empty()) {
    if (c.command == "capacity") c.quantities = {"chi", "q1", "p1", "c_e", "q_a"};
    if (c.command == "additivity") c.quantities = {"q1", "p1"};
  }
  for (const auto& q : c.quantities) {
    if (!contains(kQuantities, q)) throw ConfigError("field 'quantities': unknown quantity '" + q + "'");
  }
  if (c.command == "additivity" && c.experiments.empty()) c.experiments = {"gap"};
  for (const auto& e : c.experiments) {
    if (!contains(kExperiments, e)) {
      throw ConfigError("field 'experiments': unknown experiment '" + e + "'");
    }
  }
  for (const auto& s : c.channels) ChannelSpec::parse(s);
  if (c.command == "structure") {
    if (c.states.empty()) throw ConfigError("field 'states': structure needs at least one state");
  } else if (c.channels.empty()) {
    throw ConfigError("field 'channels': at least one channel is required");
  }
  if (c.command == "additivity" && c.channels.size() < 2 &&
      (contains(c.experiments, "gap") || contains(c.experiments, "subadditivity"))) {
    throw ConfigError("field 'channels': pair experiments need at least two channels");
  }
  return c;
}

RunOutput run(const RunConfig& config) {
  const RunConfig c = normalized(config);
  RunOutput out;
  Json results;
  if (c.command == "capacity") results = run_capacity(c);
  else if (c.command == "potential") results = run_potential(c);
  else if (c.command == "lift") results = run_lift(c);
  else if (c.command == "classify") results = run_classify(c);
  else if (c.command == "additivity") results = run_additivity(c, &out.csv);
  else results = run_structure(c);
  out.report = Json{{"schema_version", kSchemaVersion},
                    {"command", c.command},
                    {"timestamp", utc_timestamp()},
                    {"config", to_json(c)},
                    {"results", results}};
  return out;
}

Json report_payload(const Json& report) {
  Json p = report;
  p.erase("timestamp");
  return p;
}

StateSpec state_from_spec(const std::string& text) {
  StateSpec st;
  st.name = text;
  std::string kind = text;
  std::string body;
  const auto open = text.find('(');
  if (open != std::string::npos) {
    if (text.back() != ')') throw ConfigError("state spec '" + text + "': missing ')'");
    kind = text.substr(0, open);
    body = text.substr(open + 1, text.size() - open - 2);
  }
  if (kind == "custom") {
    std::ifstream in(body);
    if (!in) throw ConfigError("cannot open state file '" + body + "'");
    try {
      const Json j = Json::parse(in);
      st.d_b = j.at("d_b").get<int>();
      st.d_e = j.at("d_e").get<int>();
      st.rho = matrix_from_json(j.at("state"));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("state file '" + body + "': " + e.what());
    }
    if (st.rho.rows() != st.d_b * st.d_e) throw ConfigError("state file '" + body + "': size mismatch");
    check_density(st.rho);
    return st;
  }
  const auto a = numeric_args(body, text);
  const auto need = [&](std::size_t n) {
    if (a.size() != n) {
      throw ConfigError("state spec '" + text + "': expected " + std::to_string(n) + " arguments");
    }
  };
  if (kind == "bell" || kind == "product") {
    need(0);
    st.d_b = st.d_e = 2;
    const Vector v = kind == "bell" ? Vector(maximally_entangled(2)) : Vector(basis_vector(4, 0));
    st.rho = v * v.adjoint();
  } else if (kind == "isotropic") {
    need(1);
    if (a[0] < 0.0 || a[0] > 1.0) throw ConfigError("state spec '" + text + "': visibility in [0, 1]");
    st.d_b = st.d_e = 2;
    const Vector v = maximally_entangled(2);
    st.rho = a[0] * v * v.adjoint() + (1.0 - a[0]) * Matrix(Matrix::Identity(4, 4)) / 4.0;
  } else if (kind == "random") {
    need(4);
    st.d_b = dim_arg(a[0], text);
    st.d_e = dim_arg(a[1], text);
    const int rank = dim_arg(a[2], text);
    st.rho = random_density(SystemDims({"B", "E"}, {st.d_b, st.d_e}), rank,
                            static_cast<std::uint64_t>(a[3]))
                 .matrix();
  } else if (kind == "block") {
    need(3);
    st.d_b = dim_arg(a[0], text);
    st.d_e = dim_arg(a[1], text);
    st.rho = construct_block_state(
                 random_block_decomposition(st.d_b, st.d_e, static_cast<std::uint64_t>(a[2])))
                 .matrix();
  } else if (kind == "separable") {
    need(4);
    st.d_b = dim_arg(a[0], text);
    st.d_e = dim_arg(a[1], text);
    const int terms = dim_arg(a[2], text);
    const auto seed = static_cast<std::uint64_t>(a[3]);
    st.rho = Matrix::Zero(st.d_b * st.d_e, st.d_b * st.d_e);
    for (int t = 0; t < terms; ++t) {
      const Matrix b = random_density(SystemDims::single("B", st.d_b), derive_seed(seed, "sep:b", t)).matrix();
      const Matrix e = random_density(SystemDims::single("E", st.d_e), derive_seed(seed, "sep:e", t)).matrix();
      st.rho += kron(b, e) / static_cast<double>(terms);
    }
  } else {
    throw ConfigError("unknown state kind '" + kind + "'");
  }
  return st;
}

}  // namespace potcap
