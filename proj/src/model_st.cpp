#include "degenlab/model_st.hpp"

#include <cmath>

namespace degen {

void STParams::validate() const {
  if (!std::isfinite(a) || !std::isfinite(mu) || !std::isfinite(m))
    throw ConfigError("st parameters must be finite");
  if (mu == 0.0) throw ConfigError("st parameter mu must be nonzero");
}

namespace {

Vec3 seg(const Vector& v, int k) { return v.segment<3>(3 * k); }

Vector pack(std::initializer_list<Vec3> parts) {
  Vector out(3 * parts.size());
  int k = 0;
  for (const auto& p : parts) out.segment<3>(3 * k++) = p;
  return out;
}

// Affine constraint component sum_t coeff_t * z[block_t*3 + comp]; gradient is constant.
PhaseFunction linear_component(int size, std::vector<std::pair<int, double>> terms, int comp) {
  Vector g = Vector::Zero(size);
  for (auto [block, c] : terms) g[3 * block + comp] += c;
  return PhaseFunction([g](const Vector& z) { return g.dot(z); },
                       [g](const Vector&) { return g; });
}

void add_vector_constraint(ConstraintSet& cs, int size, const std::string& name,
                           const std::vector<std::pair<int, double>>& terms, int generation) {
  for (int c = 0; c < 3; ++c)
    cs.add(linear_component(size, terms, c), name + std::to_string(c + 1), generation);
}

}  // namespace

Jet3State STJet3::to_jet() const {
  Jet3State j;
  j.q = pack({X, Y});
  j.qd = pack({Xd, Yd});
  j.qdd = pack({Xdd, Ydd});
  j.qddd = pack({Xddd, Yddd});
  return j;
}

STJet3 STJet3::from_jet(const Jet3State& j) {
  if (j.dim() != 6) throw NumericalError("STJet3 needs a 6-dimensional jet");
  return {seg(j.q, 0), seg(j.q, 1), seg(j.qd, 0), seg(j.qd, 1),
          seg(j.qdd, 0), seg(j.qdd, 1), seg(j.qddd, 0), seg(j.qddd, 1)};
}

Vector STPhasePoint::flat() const { return pack({X, Y, Xd, Yd, PX0, PY0, PX1, PY1}); }

STPhasePoint STPhasePoint::from_flat(const Vector& z) {
  if (z.size() != 24) throw NumericalError("STPhasePoint needs 24 coordinates");
  return {seg(z, 0), seg(z, 1), seg(z, 2), seg(z, 3), seg(z, 4), seg(z, 5), seg(z, 6), seg(z, 7)};
}

Vector STPontryagin::flat() const {
  Vector w(36);
  w.head(24) = jet.to_jet().flat();
  w.tail(12) = pack({PX0, PY0, PX1, PY1});
  return w;
}

STPontryagin STPontryagin::from_flat(const Vector& w) {
  if (w.size() != 36) throw NumericalError("STPontryagin needs 36 coordinates");
  STPontryagin out;
  out.jet = STJet3::from_jet(Jet3State::from_flat(w.head(24), 6));
  out.PX0 = seg(w, 8);
  out.PY0 = seg(w, 9);
  out.PX1 = seg(w, 10);
  out.PY1 = seg(w, 11);
  return out;
}

double STModel::lagrangian(const Jet2State& j) const {
  STJet3 s = STJet3::from_jet({j.q, j.qd, j.qdd, Vector::Zero(6)});
  return st_lagrangian(p_, s);
}

Vector STModel::dL_dq(const Jet2State& j) const { return -p_.m * p_.m * j.q; }

Vector STModel::dL_dqd(const Jet2State& j) const {
  return pack({p_.a * seg(j.qd, 0), p_.a * seg(j.qd, 1) + seg(j.qdd, 0) / p_.mu});
}

Vector STModel::dL_dqdd(const Jet2State& j) const {
  return pack({seg(j.qd, 1) / p_.mu, Vec3::Zero()});
}

std::optional<MomentaPair> STModel::closed_form_momenta(const Jet3State& j) const {
  STPhasePoint z = st_momenta(p_, STJet3::from_jet(j));
  return MomentaPair{pack({z.PX0, z.PY0}), pack({z.PX1, z.PY1})};
}

double st_lagrangian(const STParams& p, const STJet3& j) {
  return 0.5 * (p.a * (j.Xd.squaredNorm() + j.Yd.squaredNorm()) + (2.0 / p.mu) * j.Yd.dot(j.Xdd) -
                p.m * p.m * (j.Y.squaredNorm() + j.X.squaredNorm()));
}

std::pair<Vec3, Vec3> st_el_residual(const STParams& p, const STJet3& j) {
  const double m2 = p.m * p.m;
  return {m2 * j.X + p.a * j.Xdd - j.Yddd / p.mu, m2 * j.Y + p.a * j.Ydd + j.Xddd / p.mu};
}

STPhasePoint st_momenta(const STParams& p, const STJet3& j) {
  STPhasePoint z;
  z.X = j.X;
  z.Y = j.Y;
  z.Xd = j.Xd;
  z.Yd = j.Yd;
  z.PX0 = p.a * j.Xd - j.Ydd / p.mu;
  z.PX1 = j.Yd / p.mu;
  z.PY0 = p.a * j.Yd + j.Xdd / p.mu;
  z.PY1 = Vec3::Zero();
  return z;
}

double st_canonical_h(const STParams& p, const STPhasePoint& z) {
  return z.PX0.dot(z.Xd) + z.PY0.dot(z.Yd) - 0.5 * p.a * (z.Xd.squaredNorm() + z.Yd.squaredNorm()) +
         0.5 * p.m * p.m * (z.X.squaredNorm() + z.Y.squaredNorm());
}

ConstraintSet st_primary_constraints(const STParams& p) {
  // blocks: 0 X, 1 Y, 2 Xd, 3 Yd, 4 PX0, 5 PY0, 6 PX1, 7 PY1
  ConstraintSet cs;
  add_vector_constraint(cs, 24, "Phi", {{6, 1.0}, {3, -1.0 / p.mu}}, 0);
  add_vector_constraint(cs, 24, "Psi", {{7, 1.0}}, 0);
  return cs;
}

STMultipliers st_multipliers(const STParams& p, const STPhasePoint& z) {
  return {p.mu * (z.PY0 - p.a * z.Yd), p.mu * (p.a * z.Xd - z.PX0)};
}

double st_total_h(const STParams& p, const STPhasePoint& z) {
  const double mu = p.mu, a = p.a;
  return mu * (z.PY0.dot(z.PX1) - z.PX0.dot(z.PY1)) + a * mu * (z.Xd.dot(z.PY1) - z.Yd.dot(z.PX1)) +
         z.PX0.dot(z.Xd) - 0.5 * a * (z.Xd.squaredNorm() - z.Yd.squaredNorm()) +
         0.5 * p.m * p.m * (z.X.squaredNorm() + z.Y.squaredNorm());
}

Vector st_total_h_gradient(const STParams& p, const STPhasePoint& z) {
  const double mu = p.mu, a = p.a, m2 = p.m * p.m;
  return pack({m2 * z.X, m2 * z.Y,
               a * mu * z.PY1 + z.PX0 - a * z.Xd, -a * mu * z.PX1 + a * z.Yd,
               z.Xd - mu * z.PY1, mu * z.PX1,
               mu * z.PY0 - a * mu * z.Yd, -mu * z.PX0 + a * mu * z.Xd});
}

Vector st_hamilton_rhs(const STParams& p, const STPhasePoint& z) {
  const double mu = p.mu, a = p.a, m2 = p.m * p.m;
  // base slots written out literally; Xd - mu*PY1 only reduces to Xd on the surface
  return pack({z.Xd - mu * z.PY1, mu * z.PX1,
               mu * (z.PY0 - a * z.Yd), mu * (a * z.Xd - z.PX0),
               -m2 * z.X, -m2 * z.Y,
               a * z.Xd - a * mu * z.PY1 - z.PX0, -a * z.Yd + a * mu * z.PX1});
}

double st_dirac_table(const STParams& p, const STPhasePoint&, int i, int j) {
  if (i < 0 || i >= 24 || j < 0 || j >= 24) throw NumericalError("st_dirac_table index out of range");
  if (i % 3 != j % 3) return 0.0;
  auto entry = [&](int bi, int bj) -> double {
    if (bi == 0 && bj == 4) return 1.0;   // X, PX0
    if (bi == 2 && bj == 6) return 1.0;   // Xd, PX1
    if (bi == 1 && bj == 5) return 1.0;   // Y, PY0
    if (bi == 2 && bj == 3) return p.mu;  // Xd, Yd
    return 0.0;
  };
  const int bi = i / 3, bj = j / 3;
  double v = entry(bi, bj);
  return v != 0.0 ? v : -entry(bj, bi);
}

STConserved st_conserved(const STParams& p, const STJet3& j) {
  const double a = p.a, mu = p.mu;
  STConserved c;
  c.half_J = a * j.Y.cross(j.Yd) + j.Y.cross(j.Xdd) / mu + a * j.X.cross(j.Xd) -
             j.X.cross(j.Ydd) / mu + j.Xd.cross(j.Yd) / mu;
  c.E = a * (j.Xd.squaredNorm() + j.Yd.squaredNorm()) + (2.0 / mu) * (j.Yd.dot(j.Xdd) - j.Xd.dot(j.Ydd)) +
        p.m * p.m * (j.Y.squaredNorm() + j.X.squaredNorm());
  return c;
}

Vec3 st_half_j_phase(const STPhasePoint& z) {
  return z.X.cross(z.PX0) + z.Y.cross(z.PY0) + z.Xd.cross(z.PX1) + z.Yd.cross(z.PY1);
}

STSRField st_sr_vectorfield(const STParams& p, const STPontryagin& w) {
  const double mu = p.mu, a = p.a, m2 = p.m * p.m;
  const STJet3& j = w.jet;
  STSRField out;
  out.KY = mu * m2 * j.Xd + mu * a * j.Xddd;
  out.KX = -mu * m2 * j.Yd - a * mu * j.Yddd;
  out.field = pack({j.Xd, j.Yd, j.Xdd, j.Ydd, j.Xddd, j.Yddd, out.KX, out.KY,
                    -m2 * j.X, -m2 * j.Y, a * j.Xd - w.PX0, a * j.Yd - w.PY0 + j.Xdd / mu});
  return out;
}

ConstraintSet st_sr_constraints(const STParams& p) {
  // blocks: 0 X, 1 Y, 2 Xd, 3 Yd, 4 Xdd, 5 Ydd, 6 Xddd, 7 Yddd, 8 PX0, 9 PY0, 10 PX1, 11 PY1
  const double mu = p.mu, a = p.a, m2 = p.m * p.m;
  ConstraintSet cs;
  add_vector_constraint(cs, 36, "PhiBar", {{8, 1.0}, {2, -a}, {5, 1.0 / mu}}, 0);
  // sign of the Xdd term fixed by P_Y0 = a Yd + Xdd/mu
  add_vector_constraint(cs, 36, "PsiBar", {{9, 1.0}, {3, -a}, {4, -1.0 / mu}}, 0);
  add_vector_constraint(cs, 36, "Phi", {{10, 1.0}, {3, -1.0 / mu}}, 0);
  add_vector_constraint(cs, 36, "Psi", {{11, 1.0}}, 0);
  add_vector_constraint(cs, 36, "PhiBar1", {{7, 1.0 / mu}, {0, -m2}, {4, -a}}, 1);
  add_vector_constraint(cs, 36, "PsiBar1", {{6, 1.0 / mu}, {1, m2}, {5, a}}, 1);
  return cs;
}

std::pair<Vec3, Vec3> st_el_closure(const STParams& p, const Vec3& X, const Vec3& Y, const Vec3& Xdd,
                                    const Vec3& Ydd) {
  const double m2 = p.m * p.m;
  return {-p.mu * (m2 * Y + p.a * Ydd), p.mu * (m2 * X + p.a * Xdd)};
}

Vector st_el_vectorfield(const STParams& p, const STJet3& j) {
  const double mu = p.mu, a = p.a, m2 = p.m * p.m;
  return pack({j.Xd, j.Yd, j.Xdd, j.Ydd, j.Xddd, j.Yddd,
               -(mu * m2 * j.Yd + a * mu * j.Yddd), mu * m2 * j.Xd + mu * a * j.Xddd});
}

double st_t3q_energy(const STParams& p, const STJet3& j) {
  return (p.a * j.Xd - j.Ydd / p.mu).dot(j.Xd) + (p.a * j.Yd + 2.0 / p.mu * j.Xdd).dot(j.Yd) -
         st_lagrangian(p, j);
}

}  // namespace degen
