// One PASS/FAIL line per acceptance criterion. Usage: acceptance [--criterion N] [--verbose]

#include <cstdlib>
#include <cstring>
#include <functional>
#include <iostream>
#include <string>

#include "degenlab/simulation.hpp"
#include "degenlab/verify.hpp"

using namespace degen;

namespace {

constexpr std::uint64_t kSeed = 20240611;
constexpr int kPoints = 100;
bool verbose = false;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// keep the checks whose name starts with one of the prefixes; all of them must pass
Outcome require(const Report& r, std::initializer_list<std::string> prefixes) {
  Outcome o;
  int n = 0;
  for (const auto& c : r.checks) {
    bool hit = false;
    for (const auto& p : prefixes) hit = hit || c.name.rfind(p, 0) == 0;
    if (!hit) continue;
    ++n;
    if (verbose || (!c.pass && !c.informational))
      std::cout << "    " << (c.informational ? "info" : c.pass ? "pass" : "FAIL") << "  " << c.name << " = "
                << format_double(c.value) << " (tol " << format_double(c.tolerance) << ")"
                << (c.note.empty() ? "" : "  # " + c.note) << '\n';
    if (!c.informational && !c.pass) {
      o.pass = false;
      if (!o.detail.empty()) o.detail += ", ";
      o.detail += c.name;
    }
  }
  if (n == 0) {
    o.pass = false;
    o.detail = "no matching checks";
  }
  return o;
}

Outcome both(Outcome a, const Outcome& b) {
  a.pass = a.pass && b.pass;
  if (!b.detail.empty()) a.detail += (a.detail.empty() ? "" : ", ") + b.detail;
  return a;
}

const Report& st_run() {
  static Report r = compare_formulations(integrate(default_st_run()));
  return r;
}
const Report& clement_run() {
  static Report r = compare_formulations(integrate(default_clement_run()));
  return r;
}

VerifyOptions opts() { return {kSeed, kPoints}; }

Outcome criterion(int n) {
  switch (n) {
    case 1:
      return require(st_run(), {"run.completed", "equivalence."});
    case 2: {
      Outcome o = require(clement_run(), {"run.completed", "equivalence."});
      // start on the light cone of the Lorentzian metric: the run must stop with a recorded reason
      RunConfig c = default_clement_run();
      c.metric = "lorentzian";
      c.initial.q << 1, 1, 0;
      Report guard;
      try {
        TrajectoryRecord rec = integrate(c);
        guard.flag("abort.light_cone", rec.aborted && !rec.abort_reason.empty(), rec.abort_reason);
      } catch (const std::exception& e) {
        guard.flag("abort.light_cone", false, std::string("threw: ") + e.what());
      }
      return both(o, require(guard, {"abort."}));
    }
    case 3:
      return both(require(st_run(), {"drift.el.E_ST", "drift.hamiltonian.E_ST", "drift.skinner_rusk.E_ST",
                                      "drift.el.J", "drift.hamiltonian.J", "drift.skinner_rusk.J"}),
                  require(clement_run(), {"drift.el.E_C", "drift.hamiltonian.E_C", "drift.skinner_rusk.E_C",
                                          "drift.el.J", "drift.hamiltonian.J", "drift.skinner_rusk.J"}));
    case 4:
      return both(require(st_run(), {"constraint.hamiltonian.|Phi|", "constraint.hamiltonian.|Psi|"}),
                  require(clement_run(), {"constraint.hamiltonian.|Phi|", "constraint.hamiltonian.|Phi_s|"}));
    case 5: {
      Report r = verify_dirac_brackets(opts());
      return require(r, {"dirac.st.defining", "dirac.st.antisymmetry", "dirac.st.jacobi", "dirac.clement.lorentzian.defining",
                         "dirac.clement.lorentzian.antisymmetry", "dirac.clement.lorentzian.jacobi",
                         "dirac.clement.euclidean.defining", "dirac.clement.euclidean.antisymmetry"});
    }
    case 6:
      return require(verify_tables(opts()), {"table."});
    case 7:
      return require(verify_ranks(opts()), {"rank.clement.legendre_map_is_9", "rank.clement.legendre_map_is_8",
                                            "rank.st.acceleration_hessian", "rank.clement.acceleration_hessian"});
    case 8:
      return require(verify_det_scaling(opts()), {"det."});
    case 9:
      return require(verify_multipliers(opts()), {"multiplier."});
    case 10:
      return require(verify_tangency(opts()), {"tangency."});
    case 11:
      return both(require(verify_oracles(opts()), {"oracle."}), require(verify_rk4_order(), {"rk4."}));
    case 12:
      return require(verify_zermelo(opts()), {"zermelo."});
    default:
      return {false, "unknown criterion"};
  }
}

const char* kTitles[] = {"",
                         "formulation equivalence (st)",
                         "formulation equivalence (clement) and light-cone abort",
                         "conservation of energy and J",
                         "constraint preservation along the Hamiltonian flow",
                         "Dirac bracket defining property, antisymmetry, Jacobi",
                         "closed-form bracket tables",
                         "rank claims",
                         "det of the constraint matrix",
                         "multiplier identities",
                         "Skinner-Rusk tangency and chain termination",
                         "oracle agreement and RK4 order",
                         "Zermelo conditions"};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) only = std::atoi(argv[++i]);
    else if (!std::strcmp(argv[i], "--verbose")) verbose = true;
  }
  int failed = 0;
  for (int n = 1; n <= 12; ++n) {
    if (only && n != only) continue;
    Outcome o;
    try {
      o = criterion(n);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << kTitles[n];
    if (!o.pass) std::cout << "  [" << o.detail << "]";
    std::cout << std::endl;
  }
  return failed ? 1 : 0;
}
