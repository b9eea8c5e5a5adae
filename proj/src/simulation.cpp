#include "degenlab/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace degen {

std::vector<std::string> FormulationTrace::diagnostic_names() const {
  std::vector<std::string> out = energy_names;
  for (const char* s : {"J1", "J2", "J3", "dJ"}) out.push_back(s);
  out.insert(out.end(), constraint_names.begin(), constraint_names.end());
  return out;
}

const FormulationTrace* TrajectoryRecord::trace(Formulation f) const {
  for (const auto& t : traces)
    if (t.kind == f) return &t;
  return nullptr;
}

namespace {

Vector diagnostics_at(const FormulationSystem& sys, const Vector& x, const Vec3& j0) {
  Vector e = sys.energies(x);
  Vec3 j = sys.angular_momentum(x);
  Vector c = sys.constraints ? sys.constraints(x) : Vector(0);
  Vector d(e.size() + 4 + c.size());
  d << e, j, (j - j0).norm(), c;
  return d;
}

FormulationTrace run_system(const FormulationSystem& sys, const IntegratorConfig& ic, bool project,
                            std::vector<double>& times, bool& aborted, std::string& reason) {
  FormulationTrace tr;
  tr.kind = sys.kind;
  tr.state_names = sys.state_names;
  tr.energy_names = sys.energy_names;
  tr.constraint_names = sys.constraint_names;
  std::function<Vector(const Vector&)> post;
  if (project && sys.project) post = sys.project;
  Samples s = integrate_samples(sys.rhs, sys.x0, ic, post);
  if (s.aborted) {
    aborted = true;
    if (reason.empty()) reason = to_string(sys.kind) + ": " + s.abort_reason;
  }
  Vec3 j0 = sys.angular_momentum(sys.x0);
  for (size_t k = 0; k < s.x.size(); ++k) {
    // a diagnostic can hit the singular set even when the step itself succeeded
    try {
      Vector d = diagnostics_at(sys, s.x[k], j0);
      Vector ph = sys.phase(s.x[k]);
      tr.states.push_back(s.x[k]);
      tr.diagnostics.push_back(d);
      tr.phase.push_back(ph);
    } catch (const SingularConfigurationError& e) {
      aborted = true;
      if (reason.empty()) reason = to_string(sys.kind) + ": " + e.what();
      break;
    }
  }
  if (tr.states.size() > times.size() || times.empty())
    times.assign(s.t.begin(), s.t.begin() + static_cast<long>(tr.states.size()));
  return tr;
}

void truncate_common(TrajectoryRecord& rec) {
  size_t n = rec.times.size();
  for (const auto& t : rec.traces) n = std::min(n, t.states.size());
  rec.times.resize(n);
  for (auto& t : rec.traces) {
    t.states.resize(n);
    t.diagnostics.resize(n);
    t.phase.resize(n);
  }
}

nlohmann::json vec_json(const Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

TrajectoryRecord integrate(const RunConfig& cfg) {
  cfg.validate();
  auto driver = make_driver(cfg);
  TrajectoryRecord rec;
  rec.model = driver->name();
  rec.dim = driver->dim();
  rec.base_names = driver->base_names();

  if (cfg.expert_phase_point) {
    // raw phase point: report how far it sits from the constraint surface and flow it anyway
    FormulationSystem sys = driver->hamiltonian_from_phase(*cfg.expert_phase_point);
    ConstraintSet cs = driver->phase_constraints();
    Vector v = cs.values(sys.x0);
    nlohmann::json viol = nlohmann::json::object();
    for (int i = 0; i < cs.size(); ++i) viol[cs[i].label] = v[i];
    rec.initial_data["expert_mode"] = true;
    rec.initial_data["constraint_values"] = viol;
    rec.initial_data["max_violation"] = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
    rec.traces.push_back(run_system(sys, cfg.integrator, cfg.projection, rec.times, rec.aborted, rec.abort_reason));
    truncate_common(rec);
    return rec;
  }

  Jet3State closed;
  try {
    closed = driver->close_jet(cfg.initial);
  } catch (const SingularConfigurationError& e) {
    // initial data already on the singular set: nothing to integrate
    rec.aborted = true;
    rec.abort_reason = std::string("initial data: ") + e.what();
    return rec;
  }
  rec.initial_data["given"] = {{"q", vec_json(cfg.initial.q)}, {"qd", vec_json(cfg.initial.qd)},
                               {"qdd", vec_json(cfg.initial.qdd)}, {"qddd", vec_json(cfg.initial.qddd)}};
  rec.initial_data["closed"] = {{"q", vec_json(closed.q)}, {"qd", vec_json(closed.qd)},
                                {"qdd", vec_json(closed.qdd)}, {"qddd", vec_json(closed.qddd)}};
  PhasePoint lift = driver->legendre_lift(closed);
  rec.initial_data["lift"] = vec_json(lift.flat());

  for (Formulation f : cfg.formulations) {
    FormulationSystem sys = driver->system(f, closed);
    rec.traces.push_back(run_system(sys, cfg.integrator, cfg.projection, rec.times, rec.aborted, rec.abort_reason));
  }
  truncate_common(rec);
  return rec;
}

namespace {

double sup_base_distance(const FormulationTrace& a, const FormulationTrace& b, int nb, size_t n, size_t* at) {
  double m = 0.0;
  for (size_t k = 0; k < n; ++k) {
    double d = (a.states[k].head(nb) - b.states[k].head(nb)).cwiseAbs().maxCoeff();
    if (d > m) {
      m = d;
      if (at) *at = k;
    }
  }
  return m;
}

}  // namespace

Report compare_formulations(const TrajectoryRecord& rec, const CompareTolerances& tol) {
  Report r;
  r.title = "compare " + rec.model;
  r.flag("run.completed", !rec.aborted, rec.abort_reason);
  r.extra["samples"] = rec.times.size();
  r.extra["t_final"] = rec.times.empty() ? 0.0 : rec.times.back();
  r.extra["initial_data"] = rec.initial_data;
  if (rec.aborted) r.extra["abort_reason"] = rec.abort_reason;
  const int nb = 2 * rec.dim;
  const size_t n = rec.times.size();
  if (n == 0) return r;

  for (size_t a = 0; a < rec.traces.size(); ++a)
    for (size_t b = a + 1; b < rec.traces.size(); ++b) {
      size_t at = 0;
      double d = sup_base_distance(rec.traces[a], rec.traces[b], nb, n, &at);
      std::string note;
      if (d > tol.equivalence) {
        // diagnosis: first sample past tolerance and the worst coordinate there
        size_t first = 0;
        for (; first < n; ++first)
          if ((rec.traces[a].states[first].head(nb) - rec.traces[b].states[first].head(nb)).cwiseAbs().maxCoeff() >
              tol.equivalence)
            break;
        Eigen::Index c = 0;
        (rec.traces[a].states[at].head(nb) - rec.traces[b].states[at].head(nb)).cwiseAbs().maxCoeff(&c);
        note = "exceeds tolerance from t=" + format_double(rec.times[first]) + "; worst at t=" +
               format_double(rec.times[at]) + " in " + rec.base_names[static_cast<size_t>(c)];
      }
      r.below("equivalence." + to_string(rec.traces[a].kind) + "-" + to_string(rec.traces[b].kind), d,
              tol.equivalence, note);
    }

  for (const auto& t : rec.traces) {
    const std::string f = to_string(t.kind);
    const Vector& d0 = t.diagnostics.front();
    const int ne = t.n_energies();
    for (int e = 0; e < ne; ++e) {
      double m = 0.0;
      for (const auto& d : t.diagnostics) m = std::max(m, std::abs(d[e] - d0[e]) / (1.0 + std::abs(d0[e])));
      r.below("drift." + f + "." + t.energy_names[e], m, tol.drift);
    }
    double jn = d0.segment(ne, 3).norm();
    double mj = 0.0;
    for (const auto& d : t.diagnostics) mj = std::max(mj, d[ne + 3] / (1.0 + jn));
    r.below("drift." + f + ".J", mj, tol.drift);
    for (size_t c = 0; c < t.constraint_names.size(); ++c) {
      double m = 0.0;
      for (const auto& d : t.diagnostics) m = std::max(m, d[ne + 4 + static_cast<long>(c)]);
      r.below("constraint." + f + "." + t.constraint_names[c], m, tol.constraint);
    }
  }

  const FormulationTrace* el = rec.trace(Formulation::el);
  const FormulationTrace* ham = rec.trace(Formulation::hamiltonian);
  if (el && ham) {
    double m = 0.0;
    for (size_t k = 0; k < n; ++k) m = std::max(m, (el->phase[k] - ham->phase[k]).cwiseAbs().maxCoeff());
    r.below("lift_then_flow", m, tol.lift);
  }
  return r;
}

Report compare_records(const TrajectoryRecord& a, const TrajectoryRecord& b, double tol) {
  Report r;
  r.title = "compare records";
  if (a.model != b.model || a.dim != b.dim) {
    r.flag("records.same_model", false, a.model + " vs " + b.model);
    return r;
  }
  const int nb = 2 * a.dim;
  const size_t n = std::min(a.times.size(), b.times.size());
  for (const auto& ta : a.traces) {
    const FormulationTrace* tb = b.trace(ta.kind);
    if (!tb) continue;
    double m = 0.0;
    size_t first = n;
    for (size_t k = 0; k < n; ++k) {
      double d = (ta.states[k].head(nb) - tb->states[k].head(nb)).cwiseAbs().maxCoeff();
      m = std::max(m, d);
      if (d > tol && first == n) first = k;
    }
    std::string note;
    if (first < n) {
      double d0 = (ta.states[0].head(nb) - tb->states[0].head(nb)).cwiseAbs().maxCoeff();
      note = d0 > tol ? "initial data differ by " + format_double(d0)
                      : "trajectories separate at t=" + format_double(a.times[first]);
    }
    r.below("records." + to_string(ta.kind), m, tol, note);
  }
  return r;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(const TrajectoryRecord& rec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  const int nb = 2 * rec.dim;
  const FormulationTrace* el = rec.trace(Formulation::el);
  const FormulationTrace* ham = rec.trace(Formulation::hamiltonian);

  out << "t";
  for (const auto& t : rec.traces) {
    const std::string f = to_string(t.kind);
    for (const auto& s : t.state_names) out << ',' << f << '.' << s;
    for (const auto& s : t.diagnostic_names()) out << ',' << f << '.' << s;
  }
  for (size_t a = 0; a < rec.traces.size(); ++a)
    for (size_t b = a + 1; b < rec.traces.size(); ++b)
      out << ",dist." << to_string(rec.traces[a].kind) << '-' << to_string(rec.traces[b].kind);
  if (el && ham) out << ",lift_dist";
  out << '\n';

  for (size_t k = 0; k < rec.times.size(); ++k) {
    out << format_double(rec.times[k]);
    for (const auto& t : rec.traces) {
      for (Eigen::Index i = 0; i < t.states[k].size(); ++i) out << ',' << format_double(t.states[k][i]);
      for (Eigen::Index i = 0; i < t.diagnostics[k].size(); ++i) out << ',' << format_double(t.diagnostics[k][i]);
    }
    for (size_t a = 0; a < rec.traces.size(); ++a)
      for (size_t b = a + 1; b < rec.traces.size(); ++b)
        out << ','
            << format_double(
                   (rec.traces[a].states[k].head(nb) - rec.traces[b].states[k].head(nb)).cwiseAbs().maxCoeff());
    if (el && ham) out << ',' << format_double((el->phase[k] - ham->phase[k]).cwiseAbs().maxCoeff());
    out << '\n';
  }
}

}  // namespace degen

#include <future>
#include <thread>

namespace degen {

std::vector<SweepPoint> sweep(const RunConfig& base, const nlohmann::json& grid, unsigned threads) {
  if (!grid.is_object() || grid.empty()) throw ConfigError("sweep grid must be a non-empty object of arrays");
  std::vector<std::string> keys;
  std::vector<std::vector<double>> values;
  for (auto it = grid.begin(); it != grid.end(); ++it) {
    if (!it.value().is_array() || it.value().empty())
      throw ConfigError("sweep grid entry '" + it.key() + "' must be a non-empty array");
    keys.push_back(it.key());
    values.push_back(it.value().get<std::vector<double>>());
  }
  std::vector<nlohmann::json> points;
  std::vector<size_t> idx(keys.size(), 0);
  while (true) {
    nlohmann::json p = base.parameters;
    for (size_t k = 0; k < keys.size(); ++k) p[keys[k]] = values[k][idx[k]];
    points.push_back(p);
    size_t k = keys.size();
    while (k > 0) {
      --k;
      if (++idx[k] < values[k].size()) break;
      idx[k] = 0;
      if (k == 0) goto done;
    }
  }
done:
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  auto run_one = [&base](const nlohmann::json& p) {
    RunConfig c = base;
    c.parameters = p;
    SweepPoint out{p, {}};
    try {
      out.report = compare_formulations(integrate(c));
    } catch (const std::exception& e) {
      out.report.title = "sweep point";
      out.report.flag("run.completed", false, e.what());
    }
    return out;
  };

  std::vector<SweepPoint> results(points.size());
  for (size_t start = 0; start < points.size(); start += threads) {
    std::vector<std::future<SweepPoint>> batch;
    for (size_t i = start; i < std::min(points.size(), start + threads); ++i)
      batch.push_back(std::async(std::launch::async, run_one, points[i]));
    for (size_t i = 0; i < batch.size(); ++i) results[start + i] = batch[i].get();
  }
  return results;
}

}  // namespace degen
