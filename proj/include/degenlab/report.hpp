#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace degen {

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool informational = false;  // reported, never fails the run
  std::string note;
};

struct Report {
  std::string title;
  std::vector<Check> checks;
  nlohmann::json extra = nlohmann::json::object();

  // value <= tolerance passes
  Check& below(const std::string& name, double value, double tolerance, const std::string& note = "");
  // |value - target| <= tolerance passes
  Check& near(const std::string& name, double value, double target, double tolerance, const std::string& note = "");
  Check& flag(const std::string& name, bool ok, const std::string& note = "");
  Check& info(const std::string& name, double value, const std::string& note = "");

  void merge(const Report& other, const std::string& prefix = "");
  const Check* find(const std::string& name) const;
  bool all_pass() const;
  nlohmann::json to_json() const;
};

}  // namespace degen
