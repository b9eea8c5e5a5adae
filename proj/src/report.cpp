#include "degenlab/report.hpp"

#include <cmath>

namespace degen {

Check& Report::below(const std::string& name, double value, double tolerance, const std::string& note) {
  checks.push_back({name, value, tolerance, std::isfinite(value) && value <= tolerance, false, note});
  return checks.back();
}

Check& Report::near(const std::string& name, double value, double target, double tolerance,
                    const std::string& note) {
  double d = std::abs(value - target);
  checks.push_back({name, value, tolerance, std::isfinite(d) && d <= tolerance, false, note});
  return checks.back();
}

Check& Report::flag(const std::string& name, bool ok, const std::string& note) {
  checks.push_back({name, ok ? 1.0 : 0.0, 1.0, ok, false, note});
  return checks.back();
}

Check& Report::info(const std::string& name, double value, const std::string& note) {
  checks.push_back({name, value, 0.0, true, true, note});
  return checks.back();
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (Check c : other.checks) {
    c.name = prefix + c.name;
    checks.push_back(c);
  }
  for (auto it = other.extra.begin(); it != other.extra.end(); ++it) extra[prefix + it.key()] = it.value();
}

const Check* Report::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.informational && !c.pass) return false;
  return true;
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["title"] = title;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json e = {{"name", c.name}, {"tolerance", c.tolerance}, {"pass", c.pass},
                        {"informational", c.informational}};
    // JSON has no NaN/Inf
    e["value"] = std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr);
    if (!c.note.empty()) e["note"] = c.note;
    arr.push_back(e);
  }
  j["checks"] = arr;
  j["all_pass"] = all_pass();
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

}  // namespace degen
