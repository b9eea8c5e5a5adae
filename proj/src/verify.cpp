#include "degenlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "degenlab/drivers.hpp"
#include "degenlab/reference_models.hpp"
#include "degenlab/run_config.hpp"
#include "degenlab/skinner_rusk.hpp"

namespace degen {

namespace {

constexpr double kOracleTol = 1e-7;

// parameter sets away from 1 so that misplaced factors show up
STParams st_test_params() { return {1.3, 0.8, 1.1}; }
ClementParams clement_test_params(MetricSignature g = MetricSignature::lorentzian()) {
  return {1.1, 0.7, 0.9, 1.2, g};
}

double rel_err(const Vector& a, const Vector& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}
double rel_err(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

Vec3 random_vec3(Rng& rng) { return random_vector(rng, 3).head<3>(); }

Vector lifted_st_phase(Rng& rng, const STParams& p, bool closed = false) {
  return st_momenta(p, STJet3::from_jet(random_st_jet(rng, p, closed))).flat();
}

Vector lifted_clement_phase(Rng& rng, const ClementParams& p, bool closed = false) {
  return c_legendre_lift(p, random_clement_jet(rng, p, 0.1, closed)).flat();
}

// worst mismatch between analytic and FD gradients of a constraint set
double constraint_gradient_error(const ConstraintSet& cs, const Vector& z) {
  double m = 0.0;
  for (const auto& c : cs) m = std::max(m, rel_err(c.fn.gradient(z), Vector(fd_gradient(c.fn, z))));
  return m;
}

double jet2_partial_error(const SecondOrderLagrangian& model, const Jet2State& j) {
  const int n = model.dim();
  auto L = [&](const Vector& v) { return model.lagrangian(Jet2State::from_flat(v, n)); };
  Vector g = fd_gradient(L, j.flat());
  double e = rel_err(model.dL_dq(j), Vector(g.segment(0, n)));
  e = std::max(e, rel_err(model.dL_dqd(j), Vector(g.segment(n, n))));
  e = std::max(e, rel_err(model.dL_dqdd(j), Vector(g.segment(2 * n, n))));
  return e;
}

double momenta_error(const SecondOrderLagrangian& model, const Jet3State& j) {
  MomentaPair c = *model.closed_form_momenta(j);
  MomentaPair g = generic_momenta(model, j);
  return std::max(rel_err(c.p0, g.p0), rel_err(c.p1, g.p1));
}

// enough generations to see termination after psi2, and no runaway if it is missed
ChainOptions chain_options() {
  ChainOptions c;
  c.max_generations = 4;
  return c;
}

std::string format_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

// ---- sampling ----

Jet3State random_st_jet(Rng& rng, const STParams& p, bool closed) {
  Jet3State j{random_vector(rng, 6), random_vector(rng, 6), random_vector(rng, 6), random_vector(rng, 6)};
  if (closed) {
    STJet3 s = STJet3::from_jet(j);
    auto [x3, y3] = st_el_closure(p, s.X, s.Y, s.Xdd, s.Ydd);
    s.Xddd = x3;
    s.Yddd = y3;
    j = s.to_jet();
  }
  return j;
}

Jet3State random_clement_jet(Rng& rng, const ClementParams& p, double min_square, bool closed) {
  Vec3 X;
  do {
    X = random_vec3(rng);
  } while (std::abs(metric_dot(X, X, p.metric)) <= min_square);
  Jet3State j{X, random_vector(rng, 3), random_vector(rng, 3), random_vector(rng, 3)};
  if (closed) {
    j.qdd = c_project_acceleration(p, j.q, j.qd, j.qdd);
    j.qddd = c_el_closure(p, j.q, j.qd, j.qdd);
  }
  return j;
}

// ---- geometry ----

Report verify_geometry(const VerifyOptions& o) {
  Report r;
  r.title = "geometry";
  Rng rng(o.seed);
  double anti = 0.0, orth = 0.0, triple = 0.0, hat_err = 0.0;
  for (const MetricSignature& g : {MetricSignature::euclidean(), MetricSignature::lorentzian()}) {
    for (int k = 0; k < 1000; ++k) {
      Vec3 u = random_vec3(rng), v = random_vec3(rng), w = random_vec3(rng);
      Vec3 a = metric_cross(u, v, g), b = metric_cross(v, u, g);
      anti = std::max(anti, (a + b).cwiseAbs().maxCoeff() / std::max(1e-300, a.cwiseAbs().maxCoeff()));
      orth = std::max(orth, std::abs(metric_dot(u, a, g)));
      triple = std::max(triple, std::abs(triple_product(u, v, w) - metric_dot(u, metric_cross(v, w, g), g)));
      Mat3 H = hat(u);
      hat_err = std::max({hat_err, (H + H.transpose()).cwiseAbs().maxCoeff(), (unhat(H) - u).cwiseAbs().maxCoeff(),
                          (H * v - metric_cross(u, v, MetricSignature::euclidean())).cwiseAbs().maxCoeff()});
    }
  }
  r.below("geometry.cross_antisymmetry", anti, 1e-14);
  r.below("geometry.cross_orthogonality", orth, 1e-12);
  r.below("geometry.triple_product_metric_cancellation", triple, 1e-12);
  r.below("geometry.hat_isomorphism", hat_err, 1e-15);

  // cubic: f = x^3 - 2x, f'(x) = 3x^2 - 2
  double fd_err = 0.0;
  for (int k = 0; k < 100; ++k) {
    Vector x = random_vector(rng, 1);
    auto f = [](const Vector& v) { return v[0] * v[0] * v[0] - 2.0 * v[0]; };
    double d = fd_directional_derivative(f, x, Vector::Ones(1), 1e-5);
    fd_err = std::max(fd_err, std::abs(d - (3.0 * x[0] * x[0] - 2.0)));
  }
  r.below("geometry.fd_cubic", fd_err, 1e-8);
  return r;
}

// ---- oracles ----

Report verify_oracles(const VerifyOptions& o) {
  Report r;
  r.title = "oracles";
  Rng rng(o.seed + 11);
  const int n = o.n_points;

  {
    const STParams p = st_test_params();
    STModel model(p);
    ConstraintSet prim = st_primary_constraints(p), sr = st_sr_constraints(p);
    double e_part = 0, e_mom = 0, e_th = 0, e_rhs = 0, e_cons = 0, e_el = 0, e_en = 0, e_j = 0;
    for (int k = 0; k < n; ++k) {
      Jet3State j = random_st_jet(rng, p, false);
      STJet3 s = STJet3::from_jet(j);
      e_part = std::max(e_part, jet2_partial_error(model, j.truncate()));
      e_mom = std::max(e_mom, momenta_error(model, j));
      STPhasePoint z = STPhasePoint::from_flat(random_vector(rng, 24));
      auto TH = [&](const Vector& v) { return st_total_h(p, STPhasePoint::from_flat(v)); };
      Vector gfd = fd_gradient(TH, z.flat());
      e_th = std::max(e_th, rel_err(st_total_h_gradient(p, z), gfd));
      e_rhs = std::max(e_rhs, rel_err(st_hamilton_rhs(p, z), symplectic_gradient(gfd)));
      e_cons = std::max({e_cons, constraint_gradient_error(prim, z.flat()),
                         constraint_gradient_error(sr, random_vector(rng, 36))});
      // on-shell jets: field equations, energy and J rates along the T3Q field
      STJet3 c = STJet3::from_jet(random_st_jet(rng, p, true));
      auto [rx, ry] = st_el_residual(p, c);
      e_el = std::max(e_el, std::max(rx.cwiseAbs().maxCoeff(), ry.cwiseAbs().maxCoeff()));
      Vector field = st_el_vectorfield(p, c);
      auto E = [&](const Vector& v) { return st_conserved(p, STJet3::from_jet(Jet3State::from_flat(v, 6))).E; };
      auto J = [&](const Vector& v) {
        return Vector(st_conserved(p, STJet3::from_jet(Jet3State::from_flat(v, 6))).half_J);
      };
      Vector x = c.to_jet().flat();
      e_en = std::max(e_en, std::abs(fd_directional_derivative(E, x, field)));
      e_j = std::max(e_j, Vector(fd_directional_derivative(J, x, field)).cwiseAbs().maxCoeff());
      (void)s;
    }
    r.below("oracle.st.lagrangian_partials", e_part, kOracleTol);
    r.below("oracle.st.momenta", e_mom, kOracleTol);
    r.below("oracle.st.total_h_gradient", e_th, kOracleTol);
    r.below("oracle.st.hamilton_equations", e_rhs, kOracleTol);
    r.below("oracle.st.constraint_gradients", e_cons, kOracleTol);
    r.below("oracle.st.field_equations_on_shell", e_el, kOracleTol);
    r.below("oracle.st.energy_rate", e_en, kOracleTol);
    r.below("oracle.st.J_rate", e_j, kOracleTol);
  }

  for (const MetricSignature& g : {MetricSignature::lorentzian(), MetricSignature::euclidean()}) {
    const ClementParams p = clement_test_params(g);
    const std::string pre = "oracle.clement." + g.name() + ".";
    ClementModel model(p);
    ConstraintSet cs = c_constraints(p), sr = c_sr_constraints(p);
    double e_part = 0, e_mom = 0, e_ch = 0, e_th = 0, e_rhs = 0, e_cons = 0, e_tan = 0, e_om = 0;
    double e_pre = 0, e_el = 0, e_en = 0, e_ec = 0, e_j = 0;
    for (int k = 0; k < n; ++k) {
      Jet3State j = random_clement_jet(rng, p, 0.1, false);
      e_part = std::max(e_part, jet2_partial_error(model, j.truncate()));
      e_mom = std::max(e_mom, momenta_error(model, j));
      ClementPhase z = ClementPhase::from_flat(random_vector(rng, 12));
      z.X = j.q;
      auto CH = [&](const Vector& v) { return c_canonical_h(p, ClementPhase::from_flat(v)); };
      auto TH = [&](const Vector& v) { return c_total_h(p, ClementPhase::from_flat(v)); };
      e_ch = std::max(e_ch, rel_err(c_canonical_h_gradient(p, z), Vector(fd_gradient(CH, z.flat()))));
      Vector gfd = fd_gradient(TH, z.flat());
      e_th = std::max(e_th, rel_err(c_total_h_gradient(p, z), gfd));
      e_rhs = std::max(e_rhs, rel_err(c_hamilton_rhs(p, z), symplectic_gradient(gfd)));
      Vector w = random_vector(rng, 18);
      w.head(3) = j.q;
      e_cons = std::max({e_cons, constraint_gradient_error(cs, z.flat()), constraint_gradient_error(sr, w)});
      e_tan = std::max(e_tan, rel_err(c_legendre_tangent_closed(p, j), c_legendre_tangent(p, j)));
      e_om = std::max(e_om, rel_err(c_presymplectic_closed(p, j), presymplectic_matrix(model, j)));

      Jet3State c = random_clement_jet(rng, p, 0.1, true);
      e_pre = std::max(e_pre, c_presymplectic_residual(p, c).cwiseAbs().maxCoeff());
      e_el = std::max(e_el, c_el_residual(p, c).cwiseAbs().maxCoeff());
      Vector field = c_sr_projected_field(p, c);
      Vector x = c.flat();
      auto E = [&](const Vector& v) { return c_t3m_energy(p, Jet3State::from_flat(v, 3)); };
      auto EC = [&](const Vector& v) { return c_energy_constraint(p, Jet3State::from_flat(v, 3)); };
      auto J = [&](const Vector& v) { return Vector(c_angular_momentum(p, Jet3State::from_flat(v, 3))); };
      e_en = std::max(e_en, std::abs(fd_directional_derivative(E, x, field)));
      e_ec = std::max(e_ec, std::abs(fd_directional_derivative(EC, x, field)));
      e_j = std::max(e_j, Vector(fd_directional_derivative(J, x, field)).cwiseAbs().maxCoeff());
    }
    r.below(pre + "lagrangian_partials", e_part, kOracleTol);
    r.below(pre + "momenta", e_mom, kOracleTol);
    r.below(pre + "canonical_h_gradient", e_ch, kOracleTol);
    r.below(pre + "total_h_gradient", e_th, kOracleTol);
    r.below(pre + "hamilton_equations", e_rhs, kOracleTol);
    r.below(pre + "constraint_gradients", e_cons, kOracleTol);
    r.below(pre + "legendre_tangent", e_tan, kOracleTol);
    r.below(pre + "presymplectic_form", e_om, kOracleTol);
    r.below(pre + "presymplectic_equation", e_pre, kOracleTol);
    r.below(pre + "field_equations_on_shell", e_el, kOracleTol);
    r.below(pre + "energy_rate", e_en, kOracleTol);
    r.below(pre + "energy_constraint_rate", e_ec, kOracleTol);
    r.below(pre + "J_rate", e_j, kOracleTol);
  }

  {
    ArcLengthLagrangian arc(3);
    double e = 0.0;
    for (int k = 0; k < n; ++k) {
      Jet2State j{random_vector(rng, 3), random_vector(rng, 3), random_vector(rng, 3)};
      e = std::max(e, jet2_partial_error(arc, j));
    }
    r.below("oracle.reference.arc_length_partials", e, kOracleTol);
  }
  return r;
}

// ---- RK4 order ----

Report verify_rk4_order() {
  Report r;
  r.title = "rk4 order";
  RunConfig cfg = default_st_run();
  auto d = make_driver(cfg);
  FormulationSystem sys = d->system(Formulation::el, d->close_jet(cfg.initial));
  const double T = 2.0;
  Vector ref = dopri5(sys.rhs, sys.x0, 0.0, T, 1e-14, 1e-16, 1e-3);
  std::vector<double> hs{1e-2, 5e-3, 2.5e-3}, errs;
  for (double h : hs) {
    Vector x = sys.x0;
    const int steps = static_cast<int>(std::lround(T / h));
    for (int k = 0; k < steps; ++k) x = rk4_step(sys.rhs, x, h);
    errs.push_back((x - ref).cwiseAbs().maxCoeff());
  }
  for (size_t i = 0; i + 1 < errs.size(); ++i) {
    double order = std::log2(errs[i] / errs[i + 1]);
    r.near("rk4.order_" + format_short(hs[i]) + "_" + format_short(hs[i + 1]), order, 4.0, 0.2);
  }
  for (size_t i = 0; i < errs.size(); ++i) r.info("rk4.error_h" + format_short(hs[i]), errs[i]);
  return r;
}

// ---- Dirac brackets ----

namespace {

struct BracketStats {
  double defining = 0.0;
  double antisymmetry = 0.0;
  double jacobi = 0.0;
};

BracketStats bracket_stats(const ConstraintSet& cs, const std::vector<Vector>& points, int jacobi_points) {
  BracketStats st;
  const int dim = static_cast<int>(points.front().size());
  for (size_t k = 0; k < points.size(); ++k) {
    const Vector& z = points[k];
    for (int i = 0; i < dim; ++i) {
      PhaseFunction xi = PhaseFunction::coordinate(i);
      for (const auto& c : cs) st.defining = std::max(st.defining, std::abs(dirac_bracket(xi, c.fn, cs, z)));
      for (int j = i + 1; j < dim; ++j) {
        PhaseFunction xj = PhaseFunction::coordinate(j);
        st.antisymmetry =
            std::max(st.antisymmetry, std::abs(dirac_bracket(xi, xj, cs, z) + dirac_bracket(xj, xi, cs, z)));
      }
    }
    if (static_cast<int>(k) >= jacobi_points) continue;
    auto db = [&cs](int a, int b) {
      return PhaseFunction([&cs, a, b](const Vector& v) {
        return dirac_bracket(PhaseFunction::coordinate(a), PhaseFunction::coordinate(b), cs, v);
      });
    };
    for (int a = 0; a < dim; ++a)
      for (int b = a + 1; b < dim; ++b)
        for (int c = b + 1; c < dim; ++c) {
          double jac = dirac_bracket(PhaseFunction::coordinate(a), db(b, c), cs, z) +
                       dirac_bracket(PhaseFunction::coordinate(b), db(c, a), cs, z) +
                       dirac_bracket(PhaseFunction::coordinate(c), db(a, b), cs, z);
          st.jacobi = std::max(st.jacobi, std::abs(jac));
        }
  }
  return st;
}

}  // namespace

Report verify_dirac_brackets(const VerifyOptions& o) {
  Report r;
  r.title = "dirac brackets";
  Rng rng(o.seed + 23);
  const int jac_points = std::min(o.n_points, 5);

  {
    const STParams p = st_test_params();
    ConstraintSet cs = st_primary_constraints(p);
    std::vector<Vector> pts;
    for (int k = 0; k < o.n_points; ++k) pts.push_back(lifted_st_phase(rng, p));
    BracketStats st = bracket_stats(cs, pts, jac_points);
    r.below("dirac.st.defining_property", st.defining, 1e-10);
    r.below("dirac.st.antisymmetry", st.antisymmetry, 0.0);
    r.below("dirac.st.jacobi", st.jacobi, 1e-6);
    Classification cl = classify_constraints(cs, std::vector<Vector>(pts.begin(), pts.begin() + 10));
    r.near("dirac.st.second_class_count", cl.second_class, 6, 0);
    r.near("dirac.st.first_class_count", cl.first_class, 0, 0);
  }

  for (const MetricSignature& g : {MetricSignature::lorentzian(), MetricSignature::euclidean()}) {
    const ClementParams p = clement_test_params(g);
    const std::string pre = "dirac.clement." + g.name() + ".";
    ConstraintSet cs = c_constraints(p);
    std::vector<Vector> pts;
    for (int k = 0; k < o.n_points; ++k) pts.push_back(lifted_clement_phase(rng, p));
    BracketStats st = bracket_stats(cs, pts, g.is_euclidean() ? 0 : jac_points);
    r.below(pre + "defining_property", st.defining, 1e-10);
    r.below(pre + "antisymmetry", st.antisymmetry, 0.0);
    if (!g.is_euclidean()) r.below(pre + "jacobi", st.jacobi, 1e-6);
    Classification cl = classify_constraints(cs, std::vector<Vector>(pts.begin(), pts.begin() + 10));
    r.near(pre + "second_class_count", cl.second_class, 4, 0);
    r.near(pre + "first_class_count", cl.first_class, 0, 0);

    // DB flow of the canonical Hamiltonian against the total-Hamiltonian flow on the surface
    double e = 0.0;
    for (int k = 0; k < std::min(o.n_points, 20); ++k) {
      ClementPhase z = ClementPhase::from_flat(pts[k]);
      e = std::max(e, rel_err(c_db_equations(p, z), c_hamilton_rhs(p, z)));
    }
    r.below(pre + "db_flow_matches_total_h", e, 1e-9);
  }
  return r;
}

// ---- closed-form tables ----

Report verify_tables(const VerifyOptions& o) {
  Report r;
  r.title = "bracket tables";
  Rng rng(o.seed + 31);

  {
    const STParams p = st_test_params();
    ConstraintSet cs = st_primary_constraints(p);
    double e = 0.0;
    for (int k = 0; k < std::min(o.n_points, 20); ++k) {
      Vector z = lifted_st_phase(rng, p);
      for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j) {
          double db = dirac_bracket(PhaseFunction::coordinate(i), PhaseFunction::coordinate(j), cs, z);
          e = std::max(e, std::abs(db - st_dirac_table(p, STPhasePoint::from_flat(z), i, j)));
        }
    }
    r.below("table.st.generic_vs_closed_form", e, 1e-12);
  }

  {
    // closed-form table as printed; the generic engine is the reference
    const ClementParams p = clement_test_params();
    ConstraintSet cs = c_constraints(p);
    const char* slot[] = {"X", "Xd", "P0", "P1"};
    Matrix worst = Matrix::Zero(12, 12), sum = Matrix::Zero(12, 12);
    const int npts = o.n_points;
    for (int k = 0; k < npts; ++k) {
      Vector z = lifted_clement_phase(rng, p);
      ClementPhase cz = ClementPhase::from_flat(z);
      for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
          double db = dirac_bracket(PhaseFunction::coordinate(i), PhaseFunction::coordinate(j), cs, z);
          double d = std::abs(db - c_dirac_table(p, cz, i, j)) / std::max(1.0, std::abs(db));
          worst(i, j) = std::max(worst(i, j), d);
          sum(i, j) += d;
        }
    }
    nlohmann::json entries = nlohmann::json::array();
    int off = 0;
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) {
        if (worst(i, j) > 1e-8) ++off;
        entries.push_back({{"row", std::string(slot[i / 3]) + std::to_string(i % 3 + 1)},
                           {"col", std::string(slot[j / 3]) + std::to_string(j % 3 + 1)},
                           {"max_rel_discrepancy", worst(i, j)},
                           {"mean_rel_discrepancy", sum(i, j) / npts}});
      }
    r.extra["clement_table_discrepancy"] = entries;
    r.info("table.clement.max_discrepancy", worst.maxCoeff(), "closed-form table vs generic engine");
    r.info("table.clement.mean_discrepancy", sum.sum() / (144.0 * npts));
    r.info("table.clement.entries_off", off, "entries with relative discrepancy above 1e-8, of 144");
    r.flag("table.clement.report_generated", entries.size() == 144);
  }
  return r;
}

// ---- ranks ----

Report verify_ranks(const VerifyOptions& o) {
  Report r;
  r.title = "ranks";
  Rng rng(o.seed + 41);
  const ClementParams p = clement_test_params();
  std::map<int, int> hist;
  int closed_mismatch = 0;
  const int npts = std::min(o.n_points, 50);
  for (int k = 0; k < npts; ++k) {
    Jet3State j = random_clement_jet(rng, p, 0.1, false);
    int rk = numeric_rank(c_legendre_tangent(p, j));
    hist[rk]++;
    if (numeric_rank(c_legendre_tangent_closed(p, j)) != rk) ++closed_mismatch;
  }
  int mode = hist.begin()->first;
  for (auto [rk, c] : hist)
    if (c > hist[mode]) mode = rk;
  nlohmann::json h = nlohmann::json::object();
  for (auto [rk, c] : hist) h[std::to_string(rk)] = c;
  r.extra["clement_legendre_rank_histogram"] = h;
  const bool uniform = hist.size() == 1;
  Check& lit = r.near("rank.clement.legendre_map_is_9", uniform ? mode : -1, 9, 0, "observed rank " + std::to_string(mode));
  (void)lit;
  Check& comp = r.near("rank.clement.legendre_map_is_8", uniform ? mode : -1, 8, 0,
                       "12 minus the number of independent Legendre-image relations (Phi, Phi_s)");
  comp.informational = true;
  r.near("rank.clement.closed_form_agrees", closed_mismatch, 0, 0);

  int st_h = 0, c_h = 0;
  STModel st(st_test_params());
  ClementModel cm(p);
  for (int k = 0; k < npts; ++k) {
    st_h = std::max(st_h, acceleration_hessian(st, random_st_jet(rng, st.params(), false).truncate()).rank);
    c_h = std::max(c_h, acceleration_hessian(cm, random_clement_jet(rng, p, 0.1, false).truncate()).rank);
  }
  r.near("rank.st.acceleration_hessian", st_h, 0, 0);
  r.near("rank.clement.acceleration_hessian", c_h, 0, 0);
  return r;
}

// ---- det of the constraint matrix ----

Report verify_det_scaling(const VerifyOptions& o) {
  Report r;
  r.title = "det scaling";
  Rng rng(o.seed + 53);
  ClementParams p{1.1, 0.5, 0.8, 1.3, MetricSignature::lorentzian()};
  std::vector<double> lin, quad;
  for (int k = 0; k < o.n_points; ++k) {
    ClementPhase z = ClementPhase::from_flat(lifted_clement_phase(rng, p));
    ClementConstraintMatrix cm = c_constraint_matrix(p, z);
    const double s = metric_dot(z.X, z.X, p.metric);
    const double base = cm.det * p.mu * p.mu / std::pow(p.zeta, 6);
    lin.push_back(base / s);
    quad.push_back(base / (s * s));
  }
  auto spread = [](const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= v.size();
    return std::make_pair((*hi - *lo) / std::max(1.0, std::abs(mean)), mean);
  };
  auto [s1, m1] = spread(lin);
  auto [s2, m2] = spread(quad);
  r.below("det.clement.ratio_constant", s1, 1e-9, "relative spread of det*mu^2/(zeta^6 X^2)");
  r.near("det.clement.ratio_value", m1, 1.0, 1e-9, "mean of det*mu^2/(zeta^6 X^2), expected 1");
  Check& a = r.below("det.clement.quartic_ratio_constant", s2, 1e-9, "relative spread of det*mu^2/(zeta^6 (X^2)^2)");
  a.informational = true;
  Check& b = r.near("det.clement.quartic_ratio_value", m2, 1.0, 1e-9);
  b.informational = true;
  return r;
}

// ---- multipliers ----

Report verify_multipliers(const VerifyOptions& o) {
  Report r;
  r.title = "multipliers";
  Rng rng(o.seed + 61);
  {
    const STParams p = st_test_params();
    double e = 0.0;
    for (int k = 0; k < o.n_points; ++k) {
      STJet3 j = STJet3::from_jet(random_st_jet(rng, p, false));
      STMultipliers u = st_multipliers(p, st_momenta(p, j));
      e = std::max({e, (u.U - j.Xdd).cwiseAbs().maxCoeff(), (u.V - j.Ydd).cwiseAbs().maxCoeff()});
    }
    r.below("multiplier.st.U_V_equal_accelerations", e, 1e-12);
  }
  for (const MetricSignature& g : {MetricSignature::lorentzian(), MetricSignature::euclidean()}) {
    const ClementParams p = clement_test_params(g);
    const std::string pre = "multiplier.clement." + g.name() + ".";
    double e1 = 0.0, e2 = 0.0, eus = 0.0;
    for (int k = 0; k < o.n_points; ++k) {
      ClementPhase z = ClementPhase::from_flat(lifted_clement_phase(rng, p));
      ClementMultipliers u = c_multipliers(p, z);
      ClementConsistency c = c_consistency_residuals(p, z, u);
      e1 = std::max(e1, std::abs(c.cc1));
      e2 = std::max(e2, c.cc2.cwiseAbs().maxCoeff());
      eus = std::max(eus, std::abs(u.Us));
    }
    r.below(pre + "cc1", e1, 1e-10);
    r.below(pre + "cc2", e2, 1e-10);
    r.below(pre + "Us_on_shell", eus, 1e-10);
  }
  return r;
}

// ---- generic constraint algorithm ----

Report verify_constraint_algorithm(const VerifyOptions& o) {
  Report r;
  r.title = "constraint algorithm";
  Rng rng(o.seed + 71);
  auto sizes_json = [](const std::vector<int>& v) { return nlohmann::json(v); };
  {
    const STParams p = st_test_params();
    PhaseFunction H([p](const Vector& v) { return st_canonical_h(p, STPhasePoint::from_flat(v)); });
    std::vector<Vector> seeds;
    for (int k = 0; k < 30; ++k) seeds.push_back(random_vector(rng, 24));
    DiracBergmannResult res = dirac_bergmann(H, st_primary_constraints(p), seeds);
    r.extra["st_generation_sizes"] = sizes_json(res.generation_sizes);
    r.flag("algorithm.st.dirac_bergmann_sizes", res.terminated && res.generation_sizes == std::vector<int>{6});
  }
  {
    const ClementParams p = clement_test_params();
    PhaseFunction H([p](const Vector& v) { return c_canonical_h(p, ClementPhase::from_flat(v)); },
                    [p](const Vector& v) { return c_canonical_h_gradient(p, ClementPhase::from_flat(v)); });
    Vector centre = lifted_clement_phase(rng, p);
    std::vector<Vector> seeds;
    for (int k = 0; k < 20; ++k) seeds.push_back(centre + 0.1 * random_vector(rng, 12));
    DiracBergmannResult res = dirac_bergmann(H, c_constraints(p).with_generation_at_most(0), seeds);
    r.extra["clement_generation_sizes"] = sizes_json(res.generation_sizes);
    r.flag("algorithm.clement.dirac_bergmann_sizes",
           res.terminated && res.generation_sizes == std::vector<int>{3, 1});
  }
  return r;
}

// ---- Skinner-Rusk tangency ----

Report verify_tangency(const VerifyOptions& o) {
  Report r;
  r.title = "skinner-rusk tangency";
  Rng rng(o.seed + 83);
  {
    const STParams p = st_test_params();
    ConstraintSet cs = st_sr_constraints(p);
    double e = 0.0, efd = 0.0, on = 0.0;
    for (int k = 0; k < o.n_points; ++k) {
      STJet3 j = STJet3::from_jet(random_st_jet(rng, p, true));
      STPhasePoint z = st_momenta(p, j);
      Vector w = STPontryagin{j, z.PX0, z.PY0, z.PX1, z.PY1}.flat();
      Vector f = st_sr_vectorfield(p, STPontryagin::from_flat(w)).field;
      on = std::max(on, cs.max_abs(w));
      e = std::max(e, tangency_residual(cs, f, w));
      efd = std::max(efd, tangency_residual_fd(cs, f, w) / (1.0 + f.cwiseAbs().maxCoeff()));
    }
    r.below("tangency.st.on_final_submanifold", on, 1e-12);
    r.below("tangency.st.residual", e, 1e-9);
    r.below("tangency.st.residual_fd", efd, 1e-9, "FD oracle, relative to the field scale");

    STModel model(p);
    SkinnerRuskSystem sys = make_skinner_rusk(model);
    // the algorithm is local: seeds scattered around one point of P3Q
    Vector centre = random_vector(rng, 36);
    std::vector<Vector> seeds;
    for (int k = 0; k < 30; ++k) seeds.push_back(centre + 0.2 * random_vector(rng, 36));
    ConstraintChain ch = gnh_constraint_chain(sys, seeds, chain_options());
    r.extra["st_chain_sizes"] = ch.generation_sizes;
    r.flag("tangency.st.chain_sizes", ch.generation_sizes == std::vector<int>{12, 6});
    r.flag("tangency.st.no_second_generation", ch.terminated && ch.generation_sizes.size() == 2);
  }
  {
    const ClementParams p = clement_test_params();
    ConstraintSet cs = c_sr_constraints(p);
    double e = 0.0, efd = 0.0, on = 0.0;
    for (int k = 0; k < o.n_points; ++k) {
      Jet3State j = random_clement_jet(rng, p, 0.1, true);
      MomentaPair mp = c_momenta(p, j);
      ClementPontryagin cw{j.q, j.qd, j.qdd, j.qddd, mp.p0, mp.p1};
      Vector w = cw.flat();
      Vector f = c_sr_vectorfield(p, cw);
      on = std::max(on, cs.max_abs(w));
      e = std::max(e, tangency_residual(cs, f, w));
      efd = std::max(efd, tangency_residual_fd(cs, f, w) / (1.0 + f.cwiseAbs().maxCoeff()));
    }
    r.below("tangency.clement.on_final_submanifold", on, 1e-12);
    r.below("tangency.clement.residual", e, 1e-9);
    r.below("tangency.clement.residual_fd", efd, 1e-9, "FD oracle, relative to the field scale");

    ClementModel model(p);
    SkinnerRuskSystem sys = make_skinner_rusk(model);
    Jet3State base = random_clement_jet(rng, p, 0.3, true);
    std::vector<Vector> seeds;
    for (int k = 0; k < 20; ++k) {
      Jet3State j = base;
      j.q += 0.2 * random_vector(rng, 3);
      j.qd += 0.2 * random_vector(rng, 3);
      j.qdd += 0.2 * random_vector(rng, 3);
      j.qddd += 0.2 * random_vector(rng, 3);
      MomentaPair mp = c_momenta(p, j);
      seeds.push_back(ClementPontryagin{j.q, j.qd, j.qdd, j.qddd, mp.p0, mp.p1}.flat() + 0.05 * random_vector(rng, 18));
    }
    ConstraintChain ch = gnh_constraint_chain(sys, seeds, chain_options());
    nlohmann::json sp = nlohmann::json::array();
    for (const auto& v : ch.spectra) sp.push_back(v.empty() ? 0.0 : v.front());
    r.extra["clement_chain_leading_singular_values"] = sp;
    r.extra["clement_chain_sizes"] = ch.generation_sizes;
    r.flag("tangency.clement.chain_sizes", ch.generation_sizes == std::vector<int>{6, 3, 1});
    r.flag("tangency.clement.terminates_at_psi2", ch.terminated && ch.generation_sizes.size() == 3);
  }
  return r;
}

// ---- Zermelo ----

Report verify_zermelo(const VerifyOptions& o) {
  Report r;
  r.title = "zermelo";
  Rng rng(o.seed + 97);
  {
    ArcLengthLagrangian arc(3);
    double e = 0.0;
    for (int k = 0; k < o.n_points; ++k) {
      Jet3State j{random_vector(rng, 3), random_vector(rng, 3), random_vector(rng, 3), random_vector(rng, 3)};
      ZermeloResidual z = zermelo_check(arc, j.truncate());
      e = std::max({e, std::abs(z.r1), std::abs(z.r2), std::abs(energy(arc, j))});
    }
    r.below("zermelo.reference.arc_length", e, 1e-12);
  }
  double st_r1 = 0.0, st_r2 = 0.0, c_r1 = 0.0, c_r2 = 0.0;
  STModel st(st_test_params());
  ClementModel cm(clement_test_params());
  for (int k = 0; k < o.n_points; ++k) {
    ZermeloResidual a = zermelo_check(st, random_st_jet(rng, st.params(), false).truncate());
    ZermeloResidual b = zermelo_check(cm, random_clement_jet(rng, cm.params(), 0.1, false).truncate());
    st_r1 = std::max(st_r1, std::abs(a.r1));
    st_r2 = std::max(st_r2, std::abs(a.r2));
    c_r1 = std::max(c_r1, std::abs(b.r1));
    c_r2 = std::max(c_r2, std::abs(b.r2));
  }
  r.below("zermelo.clement.r2", c_r2, 1e-12);
  r.info("zermelo.st.r2_max", st_r2);
  r.info("zermelo.st.r1_max", st_r1);
  r.info("zermelo.clement.r1_max", c_r1);
  r.flag("zermelo.st.r1_nonzero", st_r1 > 1e-3, "not reparametrization invariant");
  r.flag("zermelo.clement.r1_nonzero", c_r1 > 1e-3, "not reparametrization invariant at fixed zeta");
  return r;
}

// ---- suite ----

Report verify_suite(const std::string& model, std::uint64_t seed, int n_points) {
  if (model != "st" && model != "clement" && model != "reference" && model != "all")
    throw ConfigError("verify: unknown model '" + model + "' (expected st, clement, reference or all)");
  if (n_points < 10) throw ConfigError("verify: n_points must be at least 10");
  VerifyOptions o{seed, n_points};
  Report all;
  for (Report g : {verify_geometry(o), verify_oracles(o), verify_rk4_order(), verify_dirac_brackets(o),
                   verify_tables(o), verify_ranks(o), verify_det_scaling(o), verify_multipliers(o),
                   verify_constraint_algorithm(o), verify_tangency(o), verify_zermelo(o)})
    all.merge(g);
  if (model == "all") {
    all.title = "verify all";
    return all;
  }
  // keep the checks that mention the model; geometry and the integrator are shared
  Report out;
  out.title = "verify " + model;
  auto keep = [&](const std::string& name) {
    if (name.rfind("geometry.", 0) == 0 || name.rfind("rk4.", 0) == 0) return true;
    return name.find("." + model + ".") != std::string::npos;
  };
  for (const auto& c : all.checks)
    if (keep(c.name)) out.checks.push_back(c);
  for (auto it = all.extra.begin(); it != all.extra.end(); ++it)
    if (it.key().rfind(model, 0) == 0) out.extra[it.key()] = it.value();
  return out;
}

}  // namespace degen
