#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "degenlab/simulation.hpp"
#include "degenlab/verify.hpp"

using namespace degen;
using nlohmann::json;

namespace {

json read_json_arg(const std::string& arg) {
  // either a path or inline JSON
  std::ifstream in(arg);
  try {
    if (in) return json::parse(in);
    return json::parse(arg);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse JSON from '" + arg + "': " + e.what());
  }
}

RunConfig load_run(const std::string& config, const std::string& model) {
  if (!config.empty()) return RunConfig::from_json(read_json_arg(config));
  if (model == "st") return default_st_run();
  if (model == "clement") return default_clement_run();
  throw ConfigError("pass --config, or --model st|clement for the reference run");
}

void write_report(const Report& r, const std::string& prefix, std::uint64_t seed, const json& config) {
  json j = r.to_json();
  j["seed"] = seed;
  if (!config.is_null()) j["config"] = config;
  const std::string path = prefix + "_report.json";
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

void print_summary(const Report& r) {
  int fails = 0;
  for (const auto& c : r.checks) {
    if (c.informational) {
      std::cout << "  info  " << c.name << " = " << format_double(c.value) << '\n';
      continue;
    }
    if (!c.pass) ++fails;
    std::cout << (c.pass ? "  pass  " : "  FAIL  ") << c.name << " = " << format_double(c.value)
              << " (tol " << format_double(c.tolerance) << ")";
    if (!c.note.empty()) std::cout << "  # " << c.note;
    std::cout << '\n';
  }
  std::cout << r.title << ": " << (fails ? std::to_string(fails) + " failing" : std::string("all pass")) << '\n';
}

int run_trajectory(RunConfig cfg, const std::string& out, std::uint64_t seed, bool all_formulations) {
  if (!out.empty()) cfg.output_prefix = out;
  if (all_formulations && !cfg.expert_phase_point)
    cfg.formulations = {Formulation::el, Formulation::hamiltonian, Formulation::skinner_rusk};
  TrajectoryRecord rec = integrate(cfg);
  write_trajectory_csv(rec, cfg.output_prefix + "_trajectory.csv");
  Report r = compare_formulations(rec);
  write_report(r, cfg.output_prefix, seed, cfg.to_json());
  print_summary(r);
  return r.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"degenlab: degenerate second-order Lagrangian systems"};
  app.require_subcommand(1);

  std::string config, model = "st", out, grid;
  std::uint64_t seed = 1;
  int points = 100;
  unsigned threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "run config (JSON file or inline JSON)");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--out", out, "output path prefix");
  };

  CLI::App* sim = app.add_subcommand("simulate", "integrate the formulations listed in the config");
  add_common(sim);
  sim->add_option("--model", model, "reference run when no config is given (st|clement)");

  CLI::App* cmp = app.add_subcommand("compare", "integrate all three formulations and compare them");
  add_common(cmp);
  cmp->add_option("--model", model, "reference run when no config is given (st|clement)");

  CLI::App* ver = app.add_subcommand("verify", "run the invariant suite");
  ver->add_option("--model", model, "st|clement|reference|all")->check(CLI::IsMember({"st", "clement", "reference", "all"}));
  ver->add_option("--seed", seed, "random seed");
  ver->add_option("--points", points, "random points per check")->check(CLI::Range(10, 100000));
  ver->add_option("--out", out, "output path prefix");

  CLI::App* swp = app.add_subcommand("sweep", "parameter grid of compare runs");
  add_common(swp);
  swp->add_option("--model", model, "reference run when no config is given (st|clement)");
  swp->add_option("--grid", grid, "JSON object of parameter arrays (file or inline)")->required();
  swp->add_option("--threads", threads, "worker threads (0 = hardware)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return run_trajectory(load_run(config, model), out, seed, false);
    if (cmp->parsed()) return run_trajectory(load_run(config, model), out, seed, true);
    if (ver->parsed()) {
      Report r = verify_suite(model, seed, points);
      write_report(r, out.empty() ? "verify_" + model : out, seed, json());
      print_summary(r);
      return r.all_pass() ? 0 : 1;
    }
    if (swp->parsed()) {
      RunConfig base = load_run(config, model);
      if (!out.empty()) base.output_prefix = out;
      json g = read_json_arg(grid);
      std::vector<SweepPoint> pts = sweep(base, g, threads);
      Report all;
      all.title = "sweep " + base.model;
      json rows = json::array();
      for (size_t i = 0; i < pts.size(); ++i) {
        all.merge(pts[i].report, "point" + std::to_string(i) + ".");
        rows.push_back({{"parameters", pts[i].parameters}, {"pass", pts[i].report.all_pass()}});
      }
      all.extra["points"] = rows;
      write_report(all, base.output_prefix, seed, base.to_json());
      for (size_t i = 0; i < pts.size(); ++i)
        std::cout << "point" << i << ' ' << pts[i].parameters.dump() << ' '
                  << (pts[i].report.all_pass() ? "pass" : "FAIL") << '\n';
      return all.all_pass() ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
