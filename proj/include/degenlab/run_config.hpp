#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "degenlab/drivers.hpp"

namespace degen {

struct RunConfig {
  std::string model = "st";
  nlohmann::json parameters = nlohmann::json::object();
  std::string metric;  // empty: model default
  Jet3State initial;
  std::vector<Formulation> formulations{Formulation::el, Formulation::hamiltonian, Formulation::skinner_rusk};
  IntegratorConfig integrator;
  std::string output_prefix = "run";
  bool projection = false;
  std::optional<Vector> expert_phase_point;  // replaces the lift; Hamiltonian flow only

  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
};

// Reference runs used throughout the tests and the default CLI configs.
RunConfig default_st_run();
RunConfig default_clement_run();

std::unique_ptr<ModelDriver> make_driver(const RunConfig& cfg);
STParams st_params_from_json(const nlohmann::json& j);
ClementParams clement_params_from_json(const nlohmann::json& j, const std::string& metric);

}  // namespace degen
