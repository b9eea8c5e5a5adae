#include "degenlab/model_clement.hpp"

#include <cmath>

namespace degen {

namespace {

Vec3 seg(const Vector& v, int k) { return v.segment<3>(3 * k); }

Vector pack(std::initializer_list<Vec3> parts) {
  Vector out(3 * parts.size());
  int k = 0;
  for (const auto& p : parts) out.segment<3>(3 * k++) = p;
  return out;
}

// |X|^2 with components summed flat; the eps identities behind U and C produce this one
double flat_square(const Vec3& X) { return X.squaredNorm(); }

}  // namespace

void ClementParams::validate() const {
  for (double v : {m, Lambda, mu, zeta})
    if (!std::isfinite(v)) throw ConfigError("clement parameters must be finite");
  if (m == 0.0 || mu == 0.0 || zeta == 0.0) throw ConfigError("clement parameters m, mu, zeta must be nonzero");
}

Vector ClementPhase::flat() const { return pack({X, Xd, P0, P1}); }

ClementPhase ClementPhase::from_flat(const Vector& z) {
  if (z.size() != 12) throw NumericalError("ClementPhase needs 12 coordinates");
  return {seg(z, 0), seg(z, 1), seg(z, 2), seg(z, 3)};
}

Vector ClementPontryagin::flat() const { return pack({X, Xd, Xdd, Xddd, P0, P1}); }

ClementPontryagin ClementPontryagin::from_flat(const Vector& w) {
  if (w.size() != 18) throw NumericalError("ClementPontryagin needs 18 coordinates");
  return {seg(w, 0), seg(w, 1), seg(w, 2), seg(w, 3), seg(w, 4), seg(w, 5)};
}

Jet3State ClementPontryagin::jet() const { return {X, Xd, Xdd, Xddd}; }

ClementAbbrev c_abbrev(const ClementParams& p, const ClementPhase& z) {
  const Mat3 G = p.metric.matrix();
  return {p.m * p.zeta * G * z.X + z.P1, p.m * p.zeta * G * z.Xd + z.P0};
}

double c_checked_square(const ClementParams& p, const Vec3& X) {
  double s = metric_dot(X, X, p.metric);
  if (std::abs(s) < kLightConeGuard)
    throw SingularConfigurationError("X^2 = " + std::to_string(s) + " is below the light-cone guard", s);
  return s;
}

double ClementModel::lagrangian(const Jet2State& j) const {
  return c_lagrangian(p_, {j.q, j.qd, j.qdd, Vector::Zero(3)});
}

Vector ClementModel::dL_dq(const Jet2State& j) const {
  Vec3 Xd = j.qd, Xdd = j.qdd;
  return 0.5 * p_.kappa() * Xd.cross(Xdd);
}

Vector ClementModel::dL_dqd(const Jet2State& j) const {
  Vec3 X = j.q, Xd = j.qd, Xdd = j.qdd;
  return -p_.m * p_.zeta * p_.metric.lower(Xd) + 0.5 * p_.kappa() * Xdd.cross(X);
}

Vector ClementModel::dL_dqdd(const Jet2State& j) const {
  Vec3 X = j.q, Xd = j.qd;
  return 0.5 * p_.kappa() * X.cross(Xd);
}

std::optional<MomentaPair> ClementModel::closed_form_momenta(const Jet3State& j) const {
  return c_momenta(p_, j);
}

double c_lagrangian(const ClementParams& p, const Jet3State& j) {
  Vec3 X = j.q, Xd = j.qd, Xdd = j.qdd;
  return -0.5 * p.m * p.zeta * metric_dot(Xd, Xd, p.metric) - 2.0 * p.m * p.Lambda / p.zeta +
         0.5 * p.kappa() * triple_product(X, Xd, Xdd);
}

double c_energy_constraint(const ClementParams& p, const Jet3State& j) {
  Vec3 X = j.q, Xd = j.qd, Xdd = j.qdd;
  return -0.5 * p.m * metric_dot(Xd, Xd, p.metric) + 2.0 * p.m * p.Lambda / (p.zeta * p.zeta) +
         p.zeta / (p.m * p.mu) * triple_product(X, Xd, Xdd);
}

Vec3 c_el_residual(const ClementParams& p, const Jet3State& j) {
  Vec3 X = j.q, Xd = j.qd, Xdd = j.qdd, Xddd = j.qddd;
  return 2.0 * p.m * p.m * p.mu / p.zeta * p.metric.lower(Xdd) + 3.0 * Xd.cross(Xdd) + 2.0 * X.cross(Xddd);
}

MomentaPair c_momenta(const ClementParams& p, const Jet3State& j) {
  Vec3 X = j.q, Xd = j.qd, Xdd = j.qdd;
  const double k = p.kappa();
  return {-p.m * p.zeta * p.metric.lower(Xd) + k * Xdd.cross(X), 0.5 * k * X.cross(Xd)};
}

ClementPhase c_legendre_lift(const ClementParams& p, const Jet3State& j) {
  MomentaPair mp = c_momenta(p, j);
  return {j.q, j.qd, mp.p0, mp.p1};
}

Vec3 c_angular_momentum_phase(const ClementParams& p, const ClementPhase& z) {
  // momenta are covectors; raise before crossing
  return z.X.cross(p.metric.lower(z.P0)) + z.Xd.cross(p.metric.lower(z.P1));
}

Vec3 c_angular_momentum(const ClementParams& p, const Jet3State& j) {
  Vec3 X = j.q, Xd = j.qd, Xdd = j.qdd;
  const double k = p.kappa();
  const MetricSignature& g = p.metric;
  return -p.m * p.zeta * X.cross(Xd) + k * X.cross(g.lower(Xdd.cross(X))) +
         0.5 * k * Xd.cross(g.lower(X.cross(Xd)));
}

Vec3 c_angular_momentum_transcribed(const ClementParams& p, const Jet3State& j) {
  Vec3 X = j.q, Xd = j.qd, Xdd = j.qdd;
  return p.m * X.cross(Xd) + p.m / (2.0 * p.mu) * (2.0 * X.cross(X.cross(Xdd)) - Xd.cross(X.cross(Xd)));
}

Matrix c_legendre_tangent(const ClementParams& p, const Jet3State& j) {
  auto fl = [&](const Vector& x) {
    Jet3State s = Jet3State::from_flat(x, 3);
    return c_legendre_lift(p, s).flat();
  };
  return fd_jacobian(fl, j.flat());
}

Matrix c_legendre_tangent_closed(const ClementParams& p, const Jet3State& j) {
  Vec3 X = j.q, Xd = j.qd, Xdd = j.qdd;
  const double k = p.kappa();
  Matrix D = Matrix::Zero(12, 12);
  D.block<3, 3>(0, 0) = Mat3::Identity();
  D.block<3, 3>(3, 3) = Mat3::Identity();
  D.block<3, 3>(6, 0) = k * hat(Xdd);
  D.block<3, 3>(6, 3) = -p.m * p.zeta * p.metric.matrix();
  D.block<3, 3>(6, 6) = -k * hat(X);
  D.block<3, 3>(9, 0) = -0.5 * k * hat(Xd);
  D.block<3, 3>(9, 3) = 0.5 * k * hat(X);
  return D;
}

double c_canonical_h(const ClementParams& p, const ClementPhase& z) {
  return 0.5 * p.m * p.zeta * metric_dot(z.Xd, z.Xd, p.metric) + 2.0 * p.m * p.Lambda / p.zeta +
         z.Xd.dot(z.P0);
}

Vector c_canonical_h_gradient(const ClementParams& p, const ClementPhase& z) {
  return pack({Vec3::Zero(), c_abbrev(p, z).B, z.Xd, Vec3::Zero()});
}

ConstraintSet c_constraints(const ClementParams& p) {
  ConstraintSet cs;
  const double k = p.kappa();
  for (int i = 0; i < 3; ++i) {
    cs.add(PhaseFunction(
               [k, i](const Vector& v) {
                 ClementPhase z = ClementPhase::from_flat(v);
                 return z.P1[i] - 0.5 * k * z.X.cross(z.Xd)[i];
               },
               [k, i](const Vector& v) {
                 ClementPhase z = ClementPhase::from_flat(v);
                 Vector g = Vector::Zero(12);
                 g.segment<3>(0) = 0.5 * k * hat(z.Xd).row(i).transpose();
                 g.segment<3>(3) = -0.5 * k * hat(z.X).row(i).transpose();
                 g[9 + i] = 1.0;
                 return g;
               }),
           "Phi" + std::to_string(i + 1), 0);
  }
  cs.add(PhaseFunction(
             [p](const Vector& v) {
               ClementPhase z = ClementPhase::from_flat(v);
               return p.m * p.zeta * metric_dot(z.X, z.Xd, p.metric) + z.X.dot(z.P0);
             },
             [p](const Vector& v) {
               ClementPhase z = ClementPhase::from_flat(v);
               return pack({c_abbrev(p, z).B, p.m * p.zeta * p.metric.lower(z.X), z.X, Vec3::Zero()});
             }),
         "Phi_s", 1);
  return cs;
}

ClementMultipliers c_multipliers(const ClementParams& p, const ClementPhase& z) {
  const double s = c_checked_square(p, z.X);
  const double e = flat_square(z.X);
  const double mz = p.m * p.zeta;
  ClementAbbrev ab = c_abbrev(p, z);
  ClementMultipliers u;
  u.Us = -z.X.dot(ab.B) / (mz * s);
  u.U = -3.0 / (2.0 * mz * s) * z.X * ab.B.dot(z.Xd) - p.mu * p.m / (p.zeta * p.zeta * e) * ab.B.cross(z.X);
  // vanishes for the Euclidean metric; otherwise (X x B) has a component along gX
  const double t = triple_product(z.X, ab.B, p.metric.lower(z.X));
  u.U -= t / (p.kappa() * e * s) * z.X;
  return u;
}

ClementConsistency c_consistency_residuals(const ClementParams& p, const ClementPhase& z,
                                           const ClementMultipliers& u) {
  ClementAbbrev ab = c_abbrev(p, z);
  ClementConsistency c;
  c.cc1 = z.Xd.dot(ab.B) + u.U.dot(ab.A);
  c.cc2 = -ab.B + p.kappa() * u.U.cross(z.X) - u.Us * ab.A;
  return c;
}

double c_total_h(const ClementParams& p, const ClementPhase& z) {
  const double s = c_checked_square(p, z.X);
  const double e = flat_square(z.X);
  const double mz = p.m * p.zeta;
  ClementAbbrev ab = c_abbrev(p, z);
  const Vec3& B = ab.B;
  const double sigma = B.dot(z.X);
  return 0.5 * z.Xd.dot(z.P0) + 2.0 * p.m * p.Lambda / p.zeta -
         3.0 / (2.0 * mz * s) * z.X.dot(z.P1) * B.dot(z.Xd) -
         p.mu * p.m / (p.zeta * p.zeta * e) * z.P1.dot(B.cross(z.X)) +
         sigma * z.X.dot(z.Xd) / (2.0 * e) - sigma * sigma / (mz * s) -
         z.X.dot(z.P1) * triple_product(z.X, B, p.metric.lower(z.X)) / (p.kappa() * e * s);
}

Vector c_total_h_gradient(const ClementParams& p, const ClementPhase& z) {
  const double s = c_checked_square(p, z.X);
  const double e = flat_square(z.X);
  const double mz = p.m * p.zeta;
  const Mat3 G = p.metric.matrix();
  const Vec3 &X = z.X, &Xd = z.Xd, &P0 = z.P0, &P1 = z.P1;
  const Vec3 B = c_abbrev(p, z).B;
  const Vec3 gX = G * X, gXd = G * Xd;

  Vec3 dX = Vec3::Zero(), dXd = 0.5 * P0, dP0 = 0.5 * Xd, dP1 = Vec3::Zero();

  // -(3/(2 m zeta)) (X.P1)(B.Xd)/s
  const double c2 = -3.0 / (2.0 * mz);
  const double f = X.dot(P1), beta = B.dot(Xd);
  dX += c2 * (P1 * beta / s - f * beta * 2.0 * gX / (s * s));
  dXd += c2 * f * (2.0 * mz * gXd + P0) / s;
  dP0 += c2 * f * Xd / s;
  dP1 += c2 * X * beta / s;

  // -(mu m / zeta^2) P1.(B x X)/e
  const double c3 = -p.mu * p.m / (p.zeta * p.zeta);
  const double tau = P1.dot(B.cross(X));
  const Vec3 XxP1 = X.cross(P1);
  dX += c3 * (P1.cross(B) / e - tau * 2.0 * X / (e * e));
  dXd += c3 * mz * G * XxP1 / e;
  dP0 += c3 * XxP1 / e;
  dP1 += c3 * B.cross(X) / e;

  // (B.X)(X.Xd)/(2e)
  const double sigma = B.dot(X), rho = X.dot(Xd);
  dX += 0.5 * ((B * rho + sigma * Xd) / e - sigma * rho * 2.0 * X / (e * e));
  dXd += 0.5 * (mz * gX * rho + sigma * X) / e;
  dP0 += 0.5 * X * rho / e;

  // -(B.X)^2/(m zeta s)
  dX += -(2.0 * sigma * B / s - sigma * sigma * 2.0 * gX / (s * s)) / mz;
  dXd += -2.0 * sigma * gX / s;
  dP0 += -2.0 * sigma * X / (mz * s);

  // -(X.P1) t / (kappa e s), t = (X x B).gX
  {
    const double ci = 1.0 / p.kappa();
    const double t = triple_product(X, B, gX);
    const double es = e * s;
    const Vec3 gXxX = gX.cross(X);
    const Vec3 dt_X = B.cross(gX) + G * X.cross(B);
    const Vec3 des_X = 2.0 * X * s + 2.0 * gX * e;
    dX += -ci * (t / es * P1 + f / es * dt_X - f * t / (es * es) * des_X);
    dXd += -ci * f / es * mz * G * gXxX;
    dP0 += -ci * f / es * gXxX;
    dP1 += -ci * t / es * X;
  }

  return pack({dX, dXd, dP0, dP1});
}

Vector c_hamilton_rhs(const ClementParams& p, const ClementPhase& z) {
  return symplectic_gradient(c_total_h_gradient(p, z));
}

ClementConstraintMatrix c_constraint_matrix(const ClementParams& p, const ClementPhase& z) {
  const double s = c_checked_square(p, z.X);
  ClementConstraintMatrix out;
  out.M = constraint_matrix(c_constraints(p), z.flat());
  LinearSolve probe = solve_or_invert(out.M, Vector::Zero(4));
  Eigen::FullPivLU<Matrix> lu(out.M);
  out.det = lu.determinant();
  if (probe.rank < 4) throw SingularMatrixError("clement constraint matrix is singular", out.det);
  Matrix inv(4, 4);
  for (int c = 0; c < 4; ++c) inv.col(c) = solve_or_invert(out.M, Vector::Unit(4, c)).solution;
  out.Minv = inv;
  out.det_formula = std::pow(p.zeta, 6) * s / (p.mu * p.mu);
  return out;
}

Matrix c_constraint_matrix_transcribed(const ClementParams& p, const ClementPhase& z) {
  const double k = p.kappa(), mz = p.m * p.zeta;
  Matrix M = Matrix::Zero(4, 4);
  M.block<3, 3>(0, 0) = -k * hat(z.X);
  M.block<3, 1>(0, 3) = -mz * z.X - 0.5 * k * z.X.cross(z.Xd);
  M.block<1, 3>(3, 0) = (mz * z.X + k * z.X.cross(z.Xd)).transpose();
  return M;
}

double c_dirac_table(const ClementParams& p, const ClementPhase& z, int i, int j) {
  if (i < 0 || i >= 12 || j < 0 || j >= 12) throw NumericalError("c_dirac_table index out of range");
  const double s = c_checked_square(p, z.X);
  const double mz = p.m * p.zeta, mu = p.mu, ze = p.zeta, m = p.m;
  const Vec3 X = z.X, Xd = z.Xd, gX = p.metric.lower(z.X);
  const ClementAbbrev ab = c_abbrev(p, z);
  const Vec3 &A = ab.A, &B = ab.B;
  auto eps = [](int a, int b, int c) -> double {
    if (a == b || b == c || a == c) return 0.0;
    return ((a + 1) % 3 == b) ? 1.0 : -1.0;
  };
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  const Vec3 XdxX = Xd.cross(X);
  const double q = ze / (4.0 * mu * m * m * s);

  // slots: 0 X, 1 Xd, 2 P0, 3 P1
  auto entry = [&](int si, int a, int sj, int b, bool& known) -> double {
    known = true;
    if (si == 0 && sj == 1) return -X[a] * X[b] / (mz * s);
    if (si == 1 && sj == 1) {
      double v = 0.0;
      for (int k = 0; k < 3; ++k) v += eps(a, b, k) * A[k];
      return -mu * v / (ze * ze * ze * s);
    }
    if (si == 0 && sj == 2) return delta(a, b) - ze / (2.0 * mu * m * m * s) * X[a] * XdxX[b];
    if (si == 1 && sj == 3)
      return delta(a, b) - (A.dot(X) * delta(a, b) - A[b] * X[a]) / (2.0 * mz * s) - X[a] * gX[b] / s;
    if (si == 1 && sj == 2)
      return (delta(a, b) * Xd.dot(A) - Xd[a] * A[b] - 2.0 * X[a] * B[b]) / (2.0 * mz * s);
    if (si == 2 && sj == 2) {
      double t1 = 0.0;
      for (int l = 0; l < 3; ++l) t1 += eps(a, l, b) * Xd[l];
      t1 *= Xd.dot(A);
      double t2 = 0.0, t3 = 0.0;
      for (int s_ = 0; s_ < 3; ++s_)
        for (int n = 0; n < 3; ++n) {
          t2 += eps(a, s_, n) * Xd[s_] * X[n];
          t3 += eps(b, s_, n) * Xd[s_] * X[n];
        }
      return q * (t1 - 2.0 * t2 * B[b] + 2.0 * t3 * B[a]);
    }
    if (si == 2 && sj == 3) {
      double t1 = 0.0, t2 = 0.0, t3 = 0.0;
      for (int k = 0; k < 3; ++k) {
        t2 += eps(b, a, k) * Xd[k];
        for (int l = 0; l < 3; ++l) t1 += eps(a, k, l) * Xd[k] * X[l];
        for (int r = 0; r < 3; ++r) t3 += eps(r, a, k) * Xd[k] * X[r];
      }
      return q * (t1 * A[b] - t2 * A.dot(X) - 2.0 * mz * t3 * gX[b]);
    }
    if (si == 3 && sj == 3) {
      double t = 0.0;
      for (int k = 0; k < 3; ++k) t += eps(b, k, a) * X[k];
      return -q * t * A.dot(X);
    }
    if ((si == 0 && sj == 0) || (si == 0 && sj == 3)) return 0.0;  // "rest is zero"
    known = false;
    return 0.0;
  };
  const int si = i / 3, a = i % 3, sj = j / 3, b = j % 3;
  bool known = false;
  double v = entry(si, a, sj, b, known);
  if (known) return v;
  return -entry(sj, b, si, a, known);
}

Vector c_db_equations(const ClementParams& p, const ClementPhase& z) {
  c_checked_square(p, z.X);
  PhaseFunction H([p](const Vector& v) { return c_canonical_h(p, ClementPhase::from_flat(v)); },
                  [p](const Vector& v) { return c_canonical_h_gradient(p, ClementPhase::from_flat(v)); });
  return dirac_vector_field(H, c_constraints(p), z.flat());
}

double c_con_residual(const ClementParams& p, const Vec3& X, const Vec3& Xd, const Vec3& Xdd) {
  return metric_dot(X, Xdd, p.metric) + 3.0 * p.zeta / (2.0 * p.mu * p.m * p.m) * Xd.dot(Xdd.cross(X));
}

Vec3 c_project_acceleration(const ClementParams& p, const Vec3& X, const Vec3& Xd, const Vec3& Xdd) {
  const double s = c_checked_square(p, X);
  // the triple-product term does not see a shift along X
  return Xdd - c_con_residual(p, X, Xd, Xdd) / s * X;
}

namespace {

// psi2 = m zeta X.g Xddd + (5 kappa / 2) X.(Xd x Xddd), linear in Xddd
Vec3 psi2_coefficient(const ClementParams& p, const Vec3& X, const Vec3& Xd) {
  return p.m * p.zeta * p.metric.lower(X) + 2.5 * p.kappa() * X.cross(Xd);
}

}  // namespace

Vec3 c_el_closure(const ClementParams& p, const Vec3& X, const Vec3& Xd, const Vec3& Xdd) {
  const double s = c_checked_square(p, X);
  const double e = flat_square(X);
  // X x Xddd = -R/2 from the field equations
  Vec3 R = 2.0 * p.m * p.m * p.mu / p.zeta * p.metric.lower(Xdd) + 3.0 * Xd.cross(Xdd);
  Vec3 perp = X.cross(R) / (2.0 * e);
  // component along X fixed by psi2 = 0, i.e. the time derivative of the contraction identity
  double lambda = -psi2_coefficient(p, X, Xd).dot(perp) / (p.m * p.zeta * s);
  return perp + lambda * X;
}

ConstraintSet c_sr_constraints(const ClementParams& p) {
  const double k = p.kappa(), mz = p.m * p.zeta, k5 = 2.5 * k;
  const Mat3 G = p.metric.matrix();
  ConstraintSet cs;
  // layout blocks: 0 X, 1 Xd, 2 Xdd, 3 Xddd, 4 P0, 5 P1
  auto add_vec = [&](const std::string& name, int gen, auto value, auto grad) {
    for (int i = 0; i < 3; ++i)
      cs.add(PhaseFunction(
                 [value, i](const Vector& v) { return value(ClementPontryagin::from_flat(v))[i]; },
                 [grad, i](const Vector& v) {
                   return Vector(grad(ClementPontryagin::from_flat(v)).row(i).transpose());
                 }),
             name + std::to_string(i + 1), gen);
  };
  add_vec(
      "psi_", 0,
      [=](const ClementPontryagin& w) { return Vec3(w.P0 + mz * G * w.Xd + k * w.X.cross(w.Xdd)); },
      [=](const ClementPontryagin& w) {
        Matrix J = Matrix::Zero(3, 18);
        J.block<3, 3>(0, 0) = -k * hat(w.Xdd);
        J.block<3, 3>(0, 3) = mz * G;
        J.block<3, 3>(0, 6) = k * hat(w.X);
        J.block<3, 3>(0, 12) = Mat3::Identity();
        return J;
      });
  add_vec(
      "Phi", 0, [=](const ClementPontryagin& w) { return Vec3(w.P1 - 0.5 * k * w.X.cross(w.Xd)); },
      [=](const ClementPontryagin& w) {
        Matrix J = Matrix::Zero(3, 18);
        J.block<3, 3>(0, 0) = 0.5 * k * hat(w.Xd);
        J.block<3, 3>(0, 3) = -0.5 * k * hat(w.X);
        J.block<3, 3>(0, 15) = Mat3::Identity();
        return J;
      });
  add_vec(
      "psi1_", 1,
      [=](const ClementPontryagin& w) {
        return Vec3(1.5 * k * w.Xd.cross(w.Xdd) + mz * G * w.Xdd + k * w.X.cross(w.Xddd));
      },
      [=](const ClementPontryagin& w) {
        Matrix J = Matrix::Zero(3, 18);
        J.block<3, 3>(0, 0) = -k * hat(w.Xddd);
        J.block<3, 3>(0, 3) = -1.5 * k * hat(w.Xdd);
        J.block<3, 3>(0, 6) = 1.5 * k * hat(w.Xd) + mz * G;
        J.block<3, 3>(0, 9) = k * hat(w.X);
        return J;
      });
  cs.add(PhaseFunction(
             [=](const Vector& v) {
               ClementPontryagin w = ClementPontryagin::from_flat(v);
               return mz * metric_dot(w.X, w.Xddd, p.metric) + k5 * triple_product(w.X, w.Xd, w.Xddd);
             },
             [=](const Vector& v) {
               ClementPontryagin w = ClementPontryagin::from_flat(v);
               Vector g = Vector::Zero(18);
               g.segment<3>(0) = mz * G * w.Xddd + k5 * w.Xd.cross(w.Xddd);
               g.segment<3>(3) = k5 * w.Xddd.cross(w.X);
               g.segment<3>(9) = mz * G * w.X + k5 * w.X.cross(w.Xd);
               return g;
             }),
         "psi2", 2);
  return cs;
}

Vec3 c_sr_coefficient(const ClementParams& p, const ClementPontryagin& w) {
  const double s = c_checked_square(p, w.X);
  const double e = flat_square(w.X);
  const double k = p.kappa(), k5 = 2.5 * k, mz = p.m * p.zeta;
  const MetricSignature& g = p.metric;
  // tangency of psi1: X x C = -S / kappa
  Vec3 S = k5 * w.Xd.cross(w.Xddd) + mz * g.lower(w.Xddd);
  Vec3 perp = w.X.cross(S) / (k * e);
  // tangency of psi2 fixes the X component
  Vec3 D = psi2_coefficient(p, w.X, w.Xd);
  Vec3 E = mz * g.lower(w.Xd) + k5 * w.X.cross(w.Xdd);
  double beta = -(w.Xddd.dot(E) + perp.dot(D)) / (mz * s);
  return perp + beta * w.X;
}

Vec3 c_sr_coefficient_transcribed(const ClementParams& p, const ClementPontryagin& w) {
  const double s = c_checked_square(p, w.X);
  const double mz = p.m * p.zeta, k5 = 5.0 * p.zeta * p.zeta / (2.0 * p.mu * p.m);
  const Vec3 D = mz * w.X + k5 * w.X.cross(w.Xd);
  return -1.0 / (mz * s) * w.X * w.Xddd.dot(mz * w.Xd + k5 * w.X.cross(w.Xd)) +
         p.mu / (std::pow(p.zeta, 3) * s) * D.cross(mz * w.Xddd + k5 * w.Xddd.cross(w.Xd));
}

Vector c_sr_vectorfield(const ClementParams& p, const ClementPontryagin& w) {
  const double k = p.kappa(), mz = p.m * p.zeta;
  Vec3 C = c_sr_coefficient(p, w);
  return pack({w.Xd, w.Xdd, w.Xddd, C, 0.5 * k * w.Xd.cross(w.Xdd),
               -mz * p.metric.lower(w.Xd) - 0.5 * k * w.X.cross(w.Xdd) - w.P0});
}

Vector c_sr_projected_field(const ClementParams& p, const Jet3State& j) {
  MomentaPair mp = c_momenta(p, j);
  ClementPontryagin w{j.q, j.qd, j.qdd, j.qddd, mp.p0, mp.p1};
  return c_sr_vectorfield(p, w).head(12);
}

double c_t3m_energy(const ClementParams& p, const Jet3State& j) {
  Vec3 X = j.q, Xd = j.qd, Xdd = j.qdd;
  return -0.5 * p.m * p.zeta * metric_dot(Xd, Xd, p.metric) + p.kappa() * triple_product(X, Xd, Xdd) +
         2.0 * p.m * p.Lambda / p.zeta;
}

Matrix c_presymplectic_closed(const ClementParams& p, const Jet3State& j) {
  // D(i, a) = d theta_i / d x_a with theta = (P0, P1, 0, 0)
  Matrix D = Matrix::Zero(12, 12);
  D.topRows(6) = c_legendre_tangent_closed(p, j).bottomRows(6);
  return D.transpose() - D;
}

Vector c_presymplectic_residual(const ClementParams& p, const Jet3State& j) {
  Vec3 X = j.q, Xd = j.qd, Xdd = j.qdd;
  const double k = p.kappa(), mz = p.m * p.zeta;
  Vector dE = Vector::Zero(12);
  dE.segment<3>(0) = k * Xd.cross(Xdd);
  dE.segment<3>(3) = -mz * p.metric.lower(Xd) + k * Xdd.cross(X);
  dE.segment<3>(6) = k * X.cross(Xd);
  return dE - c_presymplectic_closed(p, j) * c_sr_projected_field(p, j);
}

std::vector<MultiplierProbe> c_light_cone_probe(const ClementParams& p, const ClementPhase& z0,
                                                const Vec3& null_direction, int steps) {
  std::vector<MultiplierProbe> out;
  double eps = 1.0;
  for (int i = 0; i < steps; ++i, eps *= 0.1) {
    ClementPhase z = z0;
    z.X = null_direction + eps * z0.X;
    double s = metric_dot(z.X, z.X, p.metric);
    if (std::abs(s) < kLightConeGuard) break;
    out.push_back({s, c_multipliers(p, z)});
  }
  return out;
}

}  // namespace degen
