#include "degenlab/run_config.hpp"

namespace degen {

using nlohmann::json;

namespace {

Vector vector_from_json(const json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError("'" + key + "' must be an array of numbers");
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError("'" + key + "' must contain only numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

json vector_to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(std::string("parameter '") + key + "' must be a number");
  return j[key].get<double>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

}  // namespace

STParams st_params_from_json(const json& j) {
  reject_unknown(j, {"a", "mu", "m"}, "st parameters");
  STParams p;
  p.a = number_or(j, "a", p.a);
  p.mu = number_or(j, "mu", p.mu);
  p.m = number_or(j, "m", p.m);
  p.validate();
  return p;
}

ClementParams clement_params_from_json(const json& j, const std::string& metric) {
  reject_unknown(j, {"m", "lambda", "mu", "zeta"}, "clement parameters");
  ClementParams p;
  p.m = number_or(j, "m", p.m);
  p.Lambda = number_or(j, "lambda", p.Lambda);
  p.mu = number_or(j, "mu", p.mu);
  p.zeta = number_or(j, "zeta", p.zeta);
  p.metric = metric.empty() ? MetricSignature::lorentzian() : MetricSignature::from_name(metric);
  p.validate();
  return p;
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");
  reject_unknown(j, {"model", "parameters", "metric", "initial", "formulations", "integrator", "output",
                     "projection", "expert_phase_point"},
                 "run config");
  RunConfig c;
  if (!j.contains("model") || !j["model"].is_string()) throw ConfigError("run config needs a string 'model'");
  c.model = j["model"].get<std::string>();
  if (j.contains("parameters")) {
    if (!j["parameters"].is_object()) throw ConfigError("'parameters' must be an object");
    c.parameters = j["parameters"];
  }
  if (j.contains("metric")) c.metric = j["metric"].get<std::string>();

  if (j.contains("initial")) {
    const json& ij = j["initial"];
    reject_unknown(ij, {"q", "qd", "qdd", "qddd"}, "initial");
    if (!ij.contains("q") || !ij.contains("qd")) throw ConfigError("'initial' needs at least q and qd");
    c.initial.q = vector_from_json(ij["q"], "initial.q");
    c.initial.qd = vector_from_json(ij["qd"], "initial.qd");
    const auto n = c.initial.q.size();
    c.initial.qdd = ij.contains("qdd") ? vector_from_json(ij["qdd"], "initial.qdd") : Vector(Vector::Zero(n));
    c.initial.qddd = ij.contains("qddd") ? vector_from_json(ij["qddd"], "initial.qddd") : Vector(Vector::Zero(n));
  } else if (!j.contains("expert_phase_point")) {
    throw ConfigError("run config needs 'initial' (or 'expert_phase_point' in expert mode)");
  }

  if (j.contains("formulations")) {
    c.formulations.clear();
    for (const auto& f : j["formulations"]) c.formulations.push_back(formulation_from_string(f.get<std::string>()));
  }
  if (j.contains("integrator")) {
    const json& ij = j["integrator"];
    reject_unknown(ij, {"method", "h", "rtol", "atol", "t_end", "stride"}, "integrator");
    if (ij.contains("method")) c.integrator.method = ij["method"].get<std::string>();
    c.integrator.h = number_or(ij, "h", c.integrator.h);
    c.integrator.rtol = number_or(ij, "rtol", c.integrator.rtol);
    c.integrator.atol = number_or(ij, "atol", c.integrator.atol);
    c.integrator.t_end = number_or(ij, "t_end", c.integrator.t_end);
    if (ij.contains("stride")) c.integrator.stride = ij["stride"].get<int>();
  }
  if (j.contains("output")) {
    const json& oj = j["output"];
    reject_unknown(oj, {"prefix"}, "output");
    if (oj.contains("prefix")) c.output_prefix = oj["prefix"].get<std::string>();
  }
  if (j.contains("projection")) c.projection = j["projection"].get<bool>();
  if (j.contains("expert_phase_point")) c.expert_phase_point = vector_from_json(j["expert_phase_point"], "expert_phase_point");
  c.validate();
  return c;
}

json RunConfig::to_json() const {
  json j;
  j["model"] = model;
  j["parameters"] = parameters;
  if (!metric.empty()) j["metric"] = metric;
  if (initial.q.size()) {
    j["initial"] = {{"q", vector_to_json(initial.q)},
                    {"qd", vector_to_json(initial.qd)},
                    {"qdd", vector_to_json(initial.qdd)},
                    {"qddd", vector_to_json(initial.qddd)}};
  }
  json f = json::array();
  for (auto x : formulations) f.push_back(to_string(x));
  j["formulations"] = f;
  j["integrator"] = {{"method", integrator.method}, {"h", integrator.h},         {"rtol", integrator.rtol},
                     {"atol", integrator.atol},     {"t_end", integrator.t_end}, {"stride", integrator.stride}};
  j["output"] = {{"prefix", output_prefix}};
  j["projection"] = projection;
  if (expert_phase_point) j["expert_phase_point"] = vector_to_json(*expert_phase_point);
  return j;
}

void RunConfig::validate() const {
  if (model != "st" && model != "clement") throw ConfigError("unknown model '" + model + "' (expected st or clement)");
  if (model == "st" && !metric.empty() && metric != "euclidean")
    throw ConfigError("the st model is defined with the euclidean metric only");
  if (formulations.empty()) throw ConfigError("at least one formulation is required");
  integrator.validate();
  if (initial.q.size()) {
    try {
      initial.validate();
    } catch (const NumericalError& e) {
      throw ConfigError(std::string("initial data: ") + e.what());
    }
  }
  if (expert_phase_point && !expert_phase_point->allFinite()) throw ConfigError("expert phase point must be finite");
  const int n = model == "st" ? 6 : 3;
  if (initial.q.size() && initial.dim() != n)
    throw ConfigError("initial data for '" + model + "' must have " + std::to_string(n) + " components per block");
}

RunConfig default_st_run() {
  RunConfig c;
  c.model = "st";
  c.parameters = {{"a", 1.0}, {"mu", 1.0}, {"m", 1.0}};
  c.metric = "euclidean";
  c.initial = Jet3State::zero(6);
  c.initial.q << 1, 0, 0, 0, 1, 0;
  c.initial.qd << 0, 1, 0, 0, 0, 1;
  c.output_prefix = "st";
  return c;
}

RunConfig default_clement_run() {
  RunConfig c;
  c.model = "clement";
  c.parameters = {{"m", 1.0}, {"lambda", 1.0}, {"mu", 1.0}, {"zeta", 1.0}};
  c.metric = "euclidean";
  c.initial = Jet3State::zero(3);
  c.initial.q << 1, 0, 0;
  c.initial.qd << 0, 1, 0;
  c.initial.qdd << 0, 0, 0.2;
  c.output_prefix = "clement";
  return c;
}

std::unique_ptr<ModelDriver> make_driver(const RunConfig& cfg) {
  if (cfg.model == "st") return std::make_unique<STDriver>(st_params_from_json(cfg.parameters));
  if (cfg.model == "clement") return std::make_unique<ClementDriver>(clement_params_from_json(cfg.parameters, cfg.metric));
  throw ConfigError("unknown model '" + cfg.model + "'");
}

}  // namespace degen
