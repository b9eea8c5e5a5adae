#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "degenlab/simulation.hpp"
#include "degenlab/verify.hpp"

using namespace degen;

namespace {
RunConfig short_run(RunConfig c, double t_end = 1.0) {
  c.integrator.t_end = t_end;
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("rk4 step on x' = x") {
  Rhs f = [](const Vector& x) { return x; };
  Vector x = Vector::Ones(1);
  CHECK(rk4_step(f, x, 0.1)[0] == doctest::Approx(1.1051708333333333).epsilon(1e-15));
  Rhs zero = [](const Vector& v) { return Vector(Vector::Zero(v.size())); };
  Vector y(3);
  y << 1, -2, 3;
  CHECK(rk4_step(zero, y, 0.5) == y);
}

TEST_CASE("dopri5 on x' = x reaches e") {
  Rhs f = [](const Vector& x) { return x; };
  Vector x1 = dopri5(f, Vector::Ones(1), 0.0, 1.0, 1e-12, 1e-14, 1e-2);
  CHECK(std::abs(x1[0] - std::exp(1.0)) < 1e-10);
}

TEST_CASE("integrator config validation") {
  IntegratorConfig c;
  c.h = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  IntegratorConfig d;
  d.method = "euler";
  CHECK_THROWS_AS(d.validate(), ConfigError);
}

TEST_CASE("rk4 is fourth order on the ST field equations") {
  Report r = verify_rk4_order();
  for (const char* name : {"rk4.order_0.01_0.005", "rk4.order_0.005_0.0025"}) {
    const Check* c = r.find(name);
    REQUIRE(c != nullptr);
    CHECK(c->value == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("zero-state lift is the origin") {
  STDriver st(STParams{});
  Jet3State z = Jet3State::zero(6);
  CHECK(st.legendre_lift(z).flat().norm() == 0.0);
  CHECK(st.lift_pontryagin(z).flat().norm() == 0.0);
}

TEST_CASE("ST formulations agree on the default run") {
  TrajectoryRecord rec = integrate(short_run(default_st_run()));
  CHECK_FALSE(rec.aborted);
  CHECK(rec.traces.size() == 3);
  Report rep = compare_formulations(rec);
  CHECK(rep.all_pass());
  const Check* c = rep.find("equivalence.el-hamiltonian");
  REQUIRE(c != nullptr);
  CHECK(c->value < 1e-5);
}

TEST_CASE("Clement formulations agree on the default run") {
  TrajectoryRecord rec = integrate(short_run(default_clement_run()));
  CHECK_FALSE(rec.aborted);
  Report rep = compare_formulations(rec);
  CHECK(rep.all_pass());
}

TEST_CASE("a formulation compared with itself is at distance zero") {
  RunConfig c = short_run(default_st_run(), 0.5);
  c.formulations = {Formulation::el, Formulation::el};
  Report rep = compare_formulations(integrate(c));
  const Check* e = rep.find("equivalence.el-el");
  REQUIRE(e != nullptr);
  CHECK(e->value == 0.0);
}

TEST_CASE("mismatched initial data are reported with a diagnosis") {
  RunConfig a = short_run(default_st_run(), 0.5);
  RunConfig b = a;
  b.initial.q[0] += 1e-3;
  Report rep = compare_records(integrate(a), integrate(b));
  CHECK_FALSE(rep.all_pass());
  const Check* c = rep.find("records.el");
  REQUIRE(c != nullptr);
  CHECK(c->value > 1e-5);
  CHECK(c->note.find("initial data differ") != std::string::npos);
  CHECK(compare_records(integrate(a), integrate(a)).all_pass());
}

TEST_CASE("runs are bit-for-bit deterministic") {
  RunConfig c = short_run(default_clement_run(), 0.5);
  write_trajectory_csv(integrate(c), "det_a.csv");
  write_trajectory_csv(integrate(c), "det_b.csv");
  std::string a = slurp("det_a.csv"), b = slurp("det_b.csv");
  CHECK_FALSE(a.empty());
  CHECK(a == b);
  CHECK(a.rfind("t,", 0) == 0);
  std::remove("det_a.csv");
  std::remove("det_b.csv");
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("Clement run started near the light cone aborts cleanly") {
  RunConfig c = short_run(default_clement_run());
  c.metric = "lorentzian";
  c.initial.q = Vec3(1, 1, 0);
  TrajectoryRecord rec = integrate(c);
  CHECK(rec.aborted);
  CHECK_FALSE(rec.abort_reason.empty());
  Report rep = compare_formulations(rec);
  CHECK_FALSE(rep.find("run.completed")->pass);
}

TEST_CASE("expert mode reports the constraint violation of a raw phase point") {
  RunConfig c = short_run(default_st_run(), 0.2);
  c.expert_phase_point = Vector::Constant(24, 0.1);
  TrajectoryRecord rec = integrate(c);
  CHECK(rec.initial_data["expert_mode"].get<bool>());
  CHECK(rec.initial_data["max_violation"].get<double>() > 1e-3);
  REQUIRE(rec.traces.size() == 1);
  CHECK(rec.traces[0].kind == Formulation::hamiltonian);
  CHECK(rec.times.size() > 1);
}

TEST_CASE("projection keeps the Hamiltonian run on the constraint surface") {
  RunConfig c = short_run(default_clement_run());
  c.projection = true;
  Report rep = compare_formulations(integrate(c));
  for (const auto& ch : rep.checks)
    if (ch.name.rfind("constraint.", 0) == 0) CHECK(ch.value < 1e-10);
}

TEST_CASE("config parsing") {
  nlohmann::json j = default_st_run().to_json();
  RunConfig back = RunConfig::from_json(j);
  CHECK(back.to_json() == j);
  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json{{"model", "st"}, {"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json{{"model", "st"}}), ConfigError);
  nlohmann::json bad = j;
  bad["formulations"] = {"lagrange"};
  CHECK_THROWS_AS(RunConfig::from_json(bad), ConfigError);
  nlohmann::json wrong_dim = j;
  wrong_dim["initial"]["q"] = {1, 2};
  CHECK_THROWS_AS(RunConfig::from_json(wrong_dim), ConfigError);
}

TEST_CASE("sweep returns one report per grid point in order") {
  RunConfig base = short_run(default_st_run(), 0.3);
  auto pts = sweep(base, nlohmann::json{{"mu", {0.5, 1.0}}, {"a", {1.0, 2.0}}}, 2);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0].parameters["a"] == 1.0);
  CHECK(pts[0].parameters["mu"] == 0.5);
  CHECK(pts[1].parameters["mu"] == 1.0);
  for (const auto& p : pts) CHECK(p.report.all_pass());
}
