#include "potcap/reports.hpp"

#include <cmath>

#include "potcap/error.hpp"

namespace potcap {

namespace {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json nums(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

Json components_json(const std::vector<std::pair<std::string, double>>& c) {
  Json o = Json::object();
  for (const auto& [k, v] : c) o[k] = num(v);
  return o;
}

Json optional_matrix(const Matrix& m) { return m.size() > 0 ? matrix_to_json(m) : Json(nullptr); }

}  // namespace

Json to_json(const OptimDiagnostics& d) {
  return Json{{"starts", d.starts},
              {"iterations", d.iterations},
              {"evaluations", d.evaluations},
              {"restart_values", nums(d.restart_values)},
              {"spread", num(d.spread)},
              {"grad_norm", num(d.grad_norm)},
              {"converged", d.converged},
              {"duality_gap", d.duality_gap >= 0.0 ? num(d.duality_gap) : Json(nullptr)}};
}

Json to_json(const Ensemble& e) {
  Json states = Json::array();
  for (const auto& s : e.states) states.push_back(matrix_to_json(s));
  return Json{{"probs", nums(e.probs)}, {"states", states}};
}

Json to_json(const CapacityReport& r) {
  return Json{{"quantity", r.quantity},
              {"channel", r.channel},
              {"value", num(r.value)},
              {"raw_value", num(r.raw_value)},
              {"bound_direction", to_string(r.bound_direction)},
              {"upper_estimate", num(r.upper_estimate)},
              {"diagnostics", to_json(r.diagnostics)},
              {"best_input", optional_matrix(r.best_input)},
              {"best_ensemble", r.best_ensemble.states.empty() ? Json(nullptr)
                                                                : to_json(r.best_ensemble)}};
}

Json to_json(const BoundReport& r) {
  return Json{{"target", r.target},
              {"channel", r.channel},
              {"value", num(r.value)},
              {"bound_direction", to_string(r.bound_direction)},
              {"components", components_json(r.components)},
              {"diagnostics", to_json(r.diagnostics)},
              {"best_input", optional_matrix(r.best_input)},
              {"kraus_rotation", optional_matrix(r.kraus_rotation)}};
}

Json to_json(const ActivationWitness& w) {
  return Json{{"kind", w.kind},
              {"aux", w.aux.name()},
              {"target", num(w.target)},
              {"achieved", num(w.achieved)},
              {"aux_q_a", num(w.aux_q_a)},
              {"verified", w.verified}};
}

Json to_json(const LiftedChannel& l) {
  return Json{{"original", l.original.name()},
              {"kraus_choice", matrix_to_json(l.kraus_choice)},
              {"lifted", channel_to_json(l.lifted)}};
}

Json to_json(const ClassifyReport& r) {
  return Json{{"verdict", to_string(r.verdict)},
              {"method", r.method},
              {"ppt_min_eigenvalue", num(r.ppt_min_eigenvalue)},
              {"evidence", r.evidence}};
}

Json to_json(const DegradabilityReport& r) {
  return Json{{"degradable", r.degradable},
              {"verdict", r.verdict},
              {"method", r.method},
              {"residual", num(r.residual)},
              {"restart_residuals", nums(r.restart_residuals)},
              {"degrading_map",
               r.degrading_map ? channel_to_json(*r.degrading_map) : Json(nullptr)}};
}

Json to_json(const PerfectionAudit& a) {
  Json entries = Json::array();
  for (const auto& e : a.entries) {
    entries.push_back(Json{{"capacity", e.capacity},
                           {"lower_name", e.lower_name},
                           {"lower", num(e.lower)},
                           {"upper_name", e.upper_name},
                           {"upper", num(e.upper)},
                           {"margin", num(e.margin)},
                           {"verdict", e.verdict}});
  }
  Json bounds = Json::array();
  for (const auto& b : a.bounds) bounds.push_back(to_json(b));
  Json caps = Json::array();
  for (const auto& c : a.capacities) caps.push_back(to_json(c));
  return Json{{"channel", a.channel},
              {"d_min", a.d_min},
              {"log_d_min", num(a.log_d_min)},
              {"margin_threshold", num(a.margin_threshold)},
              {"entries", entries},
              {"bounds", bounds},
              {"capacities", caps}};
}

Json to_json(const GapRecord& g) {
  return Json{{"quantity", g.quantity},
              {"mode", g.mode},
              {"channels", Json::array({g.channel_a, g.channel_b})},
              {"joint_value", num(g.joint_value)},
              {"value_a", num(g.value_a)},
              {"value_b", num(g.value_b)},
              {"sum_of_parts", num(g.sum_of_parts)},
              {"gap", num(g.gap)},
              {"seed", g.seed},
              {"joint_diagnostics", to_json(g.joint_diagnostics)}};
}

Json to_json(const ActivationResult& r) {
  Json recs = Json::array();
  for (const auto& g : r.records) recs.push_back(to_json(g));
  return Json{{"best", to_json(r.best)}, {"skipped", r.skipped}, {"records", recs}};
}

Json to_json(const ChainReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back(Json{{"quantity", e.quantity},
                           {"single", num(e.single)},
                           {"half_double", num(e.half_double)},
                           {"upper_name", e.upper_name},
                           {"upper", num(e.upper)},
                           {"lower_ok", e.lower_ok},
                           {"upper_ok", e.upper_ok}});
  }
  return Json{{"channel", r.channel}, {"tol", num(r.tol)}, {"passed", r.passed},
              {"entries", entries}};
}

Json to_json(const SubadditivityReport& r) {
  return Json{{"channels", Json::array({r.channel_a, r.channel_b})},
              {"eof_a", num(r.eof_a)},
              {"eof_b", num(r.eof_b)},
              {"eof_joint", num(r.eof_joint)},
              {"slack", num(r.slack)},
              {"tol", num(r.tol)},
              {"holds", r.holds}};
}

Json to_json(const EqualityReport& r) {
  return Json{{"which", to_string(r.which)},
              {"lhs", num(r.lhs)},
              {"rhs", num(r.rhs)},
              {"gap", num(r.gap)},
              {"rhs_direction", to_string(r.rhs_direction)},
              {"candidate", r.candidate}};
}

Json to_json(const BlockVerification& v) {
  return Json{{"passed", v.passed},
              {"invariants_ok", v.invariants_ok},
              {"distance", num(v.distance)},
              {"problems", v.problems}};
}

Json to_json(const DiscoveryResult& r) {
  return Json{{"status", r.status},
              {"decomposition", r.decomposition ? to_json(*r.decomposition) : Json(nullptr)},
              {"verification", to_json(r.verification)}};
}

Json to_json(const BlockDecomposition& bd) {
  Json blocks = Json::array();
  for (const auto& b : bd.blocks) {
    blocks.push_back(Json{{"prob", num(b.prob)},
                          {"d_left", b.d_left},
                          {"d_right", b.d_right},
                          {"left_state", matrix_to_json(b.left_state)},
                          {"phi", matrix_to_json(b.phi)}});
  }
  Json emb = Json::array();
  for (const auto& e : bd.embeddings) emb.push_back(matrix_to_json(e));
  return Json{{"d_b", bd.d_b}, {"d_e", bd.d_e}, {"blocks", blocks}, {"embeddings", emb}};
}

BlockDecomposition block_decomposition_from_json(const Json& j) {
  try {
    BlockDecomposition bd;
    bd.d_b = j.at("d_b").get<int>();
    bd.d_e = j.at("d_e").get<int>();
    for (const auto& b : j.at("blocks")) {
      Block blk;
      blk.prob = b.at("prob").get<double>();
      blk.d_left = b.at("d_left").get<int>();
      blk.d_right = b.at("d_right").get<int>();
      blk.left_state = matrix_from_json(b.at("left_state"));
      blk.phi = matrix_from_json(b.at("phi"));
      bd.blocks.push_back(std::move(blk));
    }
    if (j.contains("embeddings")) {
      for (const auto& e : j.at("embeddings")) bd.embeddings.push_back(matrix_from_json(e));
    }
    return bd;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed block decomposition: ") + e.what());
  }
}

}  // namespace potcap
