#include "degenlab/drivers.hpp"

namespace degen {

std::string to_string(Formulation f) {
  switch (f) {
    case Formulation::el: return "el";
    case Formulation::hamiltonian: return "hamiltonian";
    default: return "skinner_rusk";
  }
}

Formulation formulation_from_string(const std::string& s) {
  if (s == "el") return Formulation::el;
  if (s == "hamiltonian") return Formulation::hamiltonian;
  if (s == "skinner_rusk") return Formulation::skinner_rusk;
  throw ConfigError("unknown formulation '" + s + "' (expected el, hamiltonian or skinner_rusk)");
}

std::vector<std::string> vector_names(const std::vector<std::string>& blocks) {
  std::vector<std::string> out;
  for (const auto& b : blocks)
    for (int i = 1; i <= 3; ++i) out.push_back(b + std::to_string(i));
  return out;
}

PhasePoint ModelDriver::legendre_lift(const Jet3State& j) const {
  MomentaPair p = momenta(lagrangian(), j);
  return {j.q, j.qd, p.p0, p.p1};
}

PontryaginPoint ModelDriver::lift_pontryagin(const Jet3State& j) const {
  MomentaPair p = momenta(lagrangian(), j);
  return {j, p.p0, p.p1};
}

namespace {

// Constraint labels come as name1 name2 name3 for vector constraints; report one norm per group.
struct Groups {
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> ranges;
};

Groups group_constraints(const ConstraintSet& cs) {
  Groups g;
  int i = 0;
  while (i < cs.size()) {
    const std::string& l = cs[i].label;
    std::string stem = l.substr(0, l.size() - 1);
    bool triple = i + 2 < cs.size() && l.back() == '1' && cs[i + 1].label == stem + "2" &&
                  cs[i + 2].label == stem + "3";
    if (triple) {
      if (!stem.empty() && stem.back() == '_') stem.pop_back();
      g.names.push_back("|" + stem + "|");
      g.ranges.push_back({i, 3});
      i += 3;
    } else {
      g.names.push_back("|" + l + "|");
      g.ranges.push_back({i, 1});
      i += 1;
    }
  }
  return g;
}

std::function<Vector(const Vector&)> grouped_norms(const ConstraintSet& cs, const Groups& g) {
  return [cs, g](const Vector& x) {
    Vector v = cs.values(x);
    Vector out(g.ranges.size());
    for (size_t k = 0; k < g.ranges.size(); ++k) out[k] = v.segment(g.ranges[k].first, g.ranges[k].second).norm();
    return out;
  };
}

void attach_constraints(FormulationSystem& sys, const ConstraintSet& cs) {
  Groups g = group_constraints(cs);
  sys.constraint_names = g.names;
  sys.constraints = grouped_norms(cs, g);
  sys.project = [cs](const Vector& x) { return project_to_surface(cs, x, 1e-13, 20); };
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

// ---- ST ----

std::vector<std::string> STDriver::base_names() const { return vector_names({"X", "Y", "Xd", "Yd"}); }

Jet3State STDriver::close_jet(const Jet3State& j) const {
  j.validate();
  if (j.dim() != 6) throw ConfigError("st initial data must have 6 components per block");
  STJet3 s = STJet3::from_jet(j);
  auto [x3, y3] = st_el_closure(p_, s.X, s.Y, s.Xdd, s.Ydd);
  s.Xddd = x3;
  s.Yddd = y3;
  return s.to_jet();
}

namespace {

STJet3 st_jet_from_el_state(const STParams& p, const Vector& x) {
  STJet3 s;
  s.X = x.segment<3>(0);
  s.Y = x.segment<3>(3);
  s.Xd = x.segment<3>(6);
  s.Yd = x.segment<3>(9);
  s.Xdd = x.segment<3>(12);
  s.Ydd = x.segment<3>(15);
  auto [x3, y3] = st_el_closure(p, s.X, s.Y, s.Xdd, s.Ydd);
  s.Xddd = x3;
  s.Yddd = y3;
  return s;
}

FormulationSystem st_hamiltonian(const STParams& p, const Vector& z0) {
  FormulationSystem sys;
  sys.kind = Formulation::hamiltonian;
  sys.x0 = z0;
  sys.rhs = [p](const Vector& z) { return st_hamilton_rhs(p, STPhasePoint::from_flat(z)); };
  sys.state_names = vector_names({"X", "Y", "Xd", "Yd", "PX0", "PY0", "PX1", "PY1"});
  sys.energy_names = {"E_L", "E_ST"};
  sys.energies = [p](const Vector& z) {
    double h = st_canonical_h(p, STPhasePoint::from_flat(z));
    return vec2(h, 2.0 * h);
  };
  sys.angular_momentum = [](const Vector& z) { return st_half_j_phase(STPhasePoint::from_flat(z)); };
  sys.phase = [](const Vector& z) { return z; };
  attach_constraints(sys, st_primary_constraints(p));
  return sys;
}

}  // namespace

FormulationSystem STDriver::system(Formulation f, const Jet3State& closed) const {
  const STParams p = p_;
  STJet3 j = STJet3::from_jet(closed);
  FormulationSystem sys;
  sys.kind = f;
  if (f == Formulation::el) {
    sys.x0 = closed.flat().head(18);
    sys.rhs = [p](const Vector& x) {
      STJet3 s = st_jet_from_el_state(p, x);
      Vector out(18);
      out << s.Xd, s.Yd, s.Xdd, s.Ydd, s.Xddd, s.Yddd;
      return out;
    };
    sys.state_names = vector_names({"X", "Y", "Xd", "Yd", "Xdd", "Ydd"});
    sys.energy_names = {"E_L", "E_ST"};
    sys.energies = [p](const Vector& x) {
      STJet3 s = st_jet_from_el_state(p, x);
      return vec2(st_t3q_energy(p, s), st_conserved(p, s).E);
    };
    sys.angular_momentum = [p](const Vector& x) { return st_conserved(p, st_jet_from_el_state(p, x)).half_J; };
    sys.constraints = [](const Vector&) { return Vector(0); };
    sys.phase = [p](const Vector& x) { return st_momenta(p, st_jet_from_el_state(p, x)).flat(); };
    return sys;
  }
  if (f == Formulation::hamiltonian) return st_hamiltonian(p, st_momenta(p, j).flat());

  STPhasePoint z = st_momenta(p, j);
  STPontryagin w{j, z.PX0, z.PY0, z.PX1, z.PY1};
  sys.x0 = w.flat();
  sys.rhs = [p](const Vector& x) { return st_sr_vectorfield(p, STPontryagin::from_flat(x)).field; };
  sys.state_names = vector_names({"X", "Y", "Xd", "Yd", "Xdd", "Ydd", "Xddd", "Yddd", "PX0", "PY0", "PX1", "PY1"});
  sys.energy_names = {"E_L", "E_ST"};
  sys.energies = [p](const Vector& x) {
    STPontryagin w = STPontryagin::from_flat(x);
    const STJet3& s = w.jet;
    double h = w.PX0.dot(s.Xd) + w.PY0.dot(s.Yd) + w.PX1.dot(s.Xdd) + w.PY1.dot(s.Ydd) - st_lagrangian(p, s);
    return vec2(h, st_conserved(p, s).E);
  };
  sys.angular_momentum = [](const Vector& x) {
    STPontryagin w = STPontryagin::from_flat(x);
    return st_half_j_phase({w.jet.X, w.jet.Y, w.jet.Xd, w.jet.Yd, w.PX0, w.PY0, w.PX1, w.PY1});
  };
  sys.phase = [](const Vector& x) {
    Vector z(24);
    z << x.head(12), x.tail(12);
    return z;
  };
  attach_constraints(sys, st_sr_constraints(p));
  return sys;
}

FormulationSystem STDriver::hamiltonian_from_phase(const Vector& z) const {
  if (z.size() != 24) throw ConfigError("st phase point must have 24 entries");
  return st_hamiltonian(p_, z);
}

// ---- Clement ----

std::vector<std::string> ClementDriver::base_names() const { return vector_names({"X", "Xd"}); }

Jet3State ClementDriver::close_jet(const Jet3State& j) const {
  j.validate();
  if (j.dim() != 3) throw ConfigError("clement initial data must have 3 components per block");
  Jet3State out = j;
  out.qdd = c_project_acceleration(p_, j.q, j.qd, j.qdd);
  out.qddd = c_el_closure(p_, out.q, out.qd, out.qdd);
  return out;
}

namespace {

Jet3State c_jet_from_el_state(const ClementParams& p, const Vector& x) {
  Jet3State j{x.segment<3>(0), x.segment<3>(3), x.segment<3>(6), Vector()};
  j.qddd = c_el_closure(p, j.q, j.qd, j.qdd);
  return j;
}

FormulationSystem c_hamiltonian(const ClementParams& p, const Vector& z0) {
  FormulationSystem sys;
  sys.kind = Formulation::hamiltonian;
  sys.x0 = z0;
  sys.rhs = [p](const Vector& z) { return c_hamilton_rhs(p, ClementPhase::from_flat(z)); };
  sys.state_names = vector_names({"X", "Xd", "P0", "P1"});
  sys.energy_names = {"E_L", "E_C"};
  sys.energies = [p](const Vector& z) {
    double h = c_canonical_h(p, ClementPhase::from_flat(z));
    return vec2(h, h / p.zeta);
  };
  sys.angular_momentum = [p](const Vector& z) { return c_angular_momentum_phase(p, ClementPhase::from_flat(z)); };
  sys.phase = [](const Vector& z) { return z; };
  attach_constraints(sys, c_constraints(p));
  return sys;
}

}  // namespace

FormulationSystem ClementDriver::system(Formulation f, const Jet3State& closed) const {
  const ClementParams p = p_;
  FormulationSystem sys;
  sys.kind = f;
  if (f == Formulation::el) {
    sys.x0 = closed.flat().head(9);
    sys.rhs = [p](const Vector& x) {
      Jet3State j = c_jet_from_el_state(p, x);
      Vector out(9);
      out << j.qd, j.qdd, j.qddd;
      return out;
    };
    sys.state_names = vector_names({"X", "Xd", "Xdd"});
    sys.energy_names = {"E_L", "E_C"};
    sys.energies = [p](const Vector& x) {
      Jet3State j = c_jet_from_el_state(p, x);
      return vec2(c_t3m_energy(p, j), c_energy_constraint(p, j));
    };
    sys.angular_momentum = [p](const Vector& x) { return c_angular_momentum(p, c_jet_from_el_state(p, x)); };
    sys.constraint_names = {"|CON|"};
    sys.constraints = [p](const Vector& x) {
      Vector v(1);
      v[0] = std::abs(c_con_residual(p, x.segment<3>(0), x.segment<3>(3), x.segment<3>(6)));
      return v;
    };
    sys.phase = [p](const Vector& x) { return c_legendre_lift(p, c_jet_from_el_state(p, x)).flat(); };
    sys.project = [p](const Vector& x) {
      Vector y = x;
      y.segment<3>(6) = c_project_acceleration(p, x.segment<3>(0), x.segment<3>(3), x.segment<3>(6));
      return y;
    };
    return sys;
  }
  if (f == Formulation::hamiltonian) return c_hamiltonian(p, c_legendre_lift(p, closed).flat());

  MomentaPair mp = c_momenta(p, closed);
  ClementPontryagin w{closed.q, closed.qd, closed.qdd, closed.qddd, mp.p0, mp.p1};
  sys.x0 = w.flat();
  sys.rhs = [p](const Vector& x) { return c_sr_vectorfield(p, ClementPontryagin::from_flat(x)); };
  sys.state_names = vector_names({"X", "Xd", "Xdd", "Xddd", "P0", "P1"});
  sys.energy_names = {"E_L", "E_C"};
  sys.energies = [p](const Vector& x) {
    ClementPontryagin w = ClementPontryagin::from_flat(x);
    double h = w.P0.dot(w.Xd) + w.P1.dot(w.Xdd) - c_lagrangian(p, w.jet());
    return vec2(h, c_energy_constraint(p, w.jet()));
  };
  sys.angular_momentum = [p](const Vector& x) {
    ClementPontryagin w = ClementPontryagin::from_flat(x);
    return c_angular_momentum_phase(p, {w.X, w.Xd, w.P0, w.P1});
  };
  sys.phase = [](const Vector& x) {
    Vector z(12);
    z << x.head(6), x.tail(6);
    return z;
  };
  attach_constraints(sys, c_sr_constraints(p));
  return sys;
}

FormulationSystem ClementDriver::hamiltonian_from_phase(const Vector& z) const {
  if (z.size() != 12) throw ConfigError("clement phase point must have 12 entries");
  return c_hamiltonian(p_, z);
}

}  // namespace degen
