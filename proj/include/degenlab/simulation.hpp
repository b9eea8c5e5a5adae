#pragma once

#include <string>
#include <vector>

#include "degenlab/report.hpp"
#include "degenlab/run_config.hpp"

namespace degen {

// Diagnostics layout per sample: energies, J1 J2 J3, |J-J0|, constraint group norms.
struct FormulationTrace {
  Formulation kind = Formulation::el;
  std::vector<std::string> state_names;
  std::vector<std::string> energy_names;
  std::vector<std::string> constraint_names;
  std::vector<Vector> states;
  std::vector<Vector> diagnostics;
  std::vector<Vector> phase;  // (q, qd, p0, p1) at each sample

  std::vector<std::string> diagnostic_names() const;
  int n_energies() const { return static_cast<int>(energy_names.size()); }
};

struct TrajectoryRecord {
  std::string model;
  int dim = 0;
  std::vector<std::string> base_names;
  std::vector<double> times;
  std::vector<FormulationTrace> traces;
  bool aborted = false;
  std::string abort_reason;
  nlohmann::json initial_data = nlohmann::json::object();

  const FormulationTrace* trace(Formulation f) const;
};

TrajectoryRecord integrate(const RunConfig& cfg);

struct CompareTolerances {
  double equivalence = 1e-5;
  double drift = 1e-6;
  double constraint = 1e-6;
  double lift = 1e-5;
};

// Pairwise sup-distance of the shared (q, qd) coordinates plus conservation and constraint checks.
Report compare_formulations(const TrajectoryRecord& rec, const CompareTolerances& tol = {});

// Two runs of the same model: base-coordinate sup-distance per shared formulation, with the
// first sample past tolerance in the note.
Report compare_records(const TrajectoryRecord& a, const TrajectoryRecord& b, double tol = 1e-5);

// %.17g
std::string format_double(double v);
void write_trajectory_csv(const TrajectoryRecord& rec, const std::string& path);

}  // namespace degen

namespace degen {

struct SweepPoint {
  nlohmann::json parameters;
  Report report;
};

// Cartesian grid over model parameters, e.g. {"mu": [0.5, 1, 2], "a": [1, 2]}. Each point is an
// independent run; results come back in grid order (last key varies fastest).
std::vector<SweepPoint> sweep(const RunConfig& base, const nlohmann::json& grid, unsigned threads = 0);

}  // namespace degen
