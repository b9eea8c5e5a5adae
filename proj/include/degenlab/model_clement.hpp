#pragma once

#include "degenlab/constraints.hpp"
#include "degenlab/lagrangian.hpp"

namespace degen {

struct ClementParams {
  double m = 1.0;
  double Lambda = 1.0;
  double mu = 1.0;
  double zeta = 1.0;
  MetricSignature metric = MetricSignature::lorentzian();

  void validate() const;
  double kappa() const { return zeta * zeta / (mu * m); }
};

inline constexpr double kLightConeGuard = 1e-8;

// Phase flat layout (X, Xd, P0, P1), Pontryagin layout (X, Xd, Xdd, Xddd, P0, P1).
struct ClementPhase {
  Vec3 X, Xd, P0, P1;
  Vector flat() const;
  static ClementPhase from_flat(const Vector& z);
};

struct ClementPontryagin {
  Vec3 X, Xd, Xdd, Xddd, P0, P1;
  Vector flat() const;
  static ClementPontryagin from_flat(const Vector& w);
  Jet3State jet() const;
};

struct ClementAbbrev {
  Vec3 A, B;  // covectors m zeta g X + P1, m zeta g Xd + P0
};
ClementAbbrev c_abbrev(const ClementParams& p, const ClementPhase& z);

class ClementModel : public SecondOrderLagrangian {
 public:
  explicit ClementModel(ClementParams p = {}) : p_(p) { p_.validate(); }
  int dim() const override { return 3; }
  std::string name() const override { return "clement"; }
  double lagrangian(const Jet2State& j) const override;
  Vector dL_dq(const Jet2State& j) const override;
  Vector dL_dqd(const Jet2State& j) const override;
  Vector dL_dqdd(const Jet2State& j) const override;
  std::optional<MomentaPair> closed_form_momenta(const Jet3State& j) const override;
  const ClementParams& params() const { return p_; }

 private:
  ClementParams p_;
};

// metric square g(X, X); throws SingularConfigurationError below the guard
double c_checked_square(const ClementParams& p, const Vec3& X);

double c_lagrangian(const ClementParams& p, const Jet3State& j);
double c_energy_constraint(const ClementParams& p, const Jet3State& j);
Vec3 c_el_residual(const ClementParams& p, const Jet3State& j);

// Noether charge of the SO(g) symmetry written on the jet, and the same quantity on phase space.
Vec3 c_angular_momentum(const ClementParams& p, const Jet3State& j);
Vec3 c_angular_momentum_phase(const ClementParams& p, const ClementPhase& z);
// as printed in the reference display, kept for comparison only
Vec3 c_angular_momentum_transcribed(const ClementParams& p, const Jet3State& j);

MomentaPair c_momenta(const ClementParams& p, const Jet3State& j);
ClementPhase c_legendre_lift(const ClementParams& p, const Jet3State& j);
Matrix c_legendre_tangent(const ClementParams& p, const Jet3State& j);
// closed-form blocks of the same 12x12 Jacobian
Matrix c_legendre_tangent_closed(const ClementParams& p, const Jet3State& j);

double c_canonical_h(const ClementParams& p, const ClementPhase& z);
Vector c_canonical_h_gradient(const ClementParams& p, const ClementPhase& z);
// Phi1..3 (generation 0) and Phi_s (generation 1) on the 12-dimensional phase space
ConstraintSet c_constraints(const ClementParams& p);

struct ClementMultipliers {
  double Us = 0.0;
  Vec3 U;
};
ClementMultipliers c_multipliers(const ClementParams& p, const ClementPhase& z);
// residuals of the two consistency conditions with the given multipliers
struct ClementConsistency {
  double cc1 = 0.0;
  Vec3 cc2;
};
ClementConsistency c_consistency_residuals(const ClementParams& p, const ClementPhase& z,
                                           const ClementMultipliers& u);

double c_total_h(const ClementParams& p, const ClementPhase& z);
Vector c_total_h_gradient(const ClementParams& p, const ClementPhase& z);
Vector c_hamilton_rhs(const ClementParams& p, const ClementPhase& z);

struct ClementConstraintMatrix {
  Matrix M, Minv;
  double det = 0.0;
  double det_formula = 0.0;  // zeta^6 X^2 / mu^2
};
ClementConstraintMatrix c_constraint_matrix(const ClementParams& p, const ClementPhase& z);
// as printed, for comparison (not antisymmetric in general)
Matrix c_constraint_matrix_transcribed(const ClementParams& p, const ClementPhase& z);

// closed-form bracket table as printed; slots index the flat 12-vector
double c_dirac_table(const ClementParams& p, const ClementPhase& z, int i, int j);
Vector c_db_equations(const ClementParams& p, const ClementPhase& z);

// X . g Xdd + (3 zeta / (2 mu m^2)) Xd . (Xdd x X)
double c_con_residual(const ClementParams& p, const Vec3& X, const Vec3& Xd, const Vec3& Xdd);
// shift Xdd along X so that the contraction identity holds
Vec3 c_project_acceleration(const ClementParams& p, const Vec3& X, const Vec3& Xd, const Vec3& Xdd);
// third derivative from the Euler-Lagrange equations and their X-contraction
Vec3 c_el_closure(const ClementParams& p, const Vec3& X, const Vec3& Xd, const Vec3& Xdd);

// psi (gen 0), Phi (gen 0), psi1 (gen 1), psi2 (gen 2) on P^3M (18 coordinates)
ConstraintSet c_sr_constraints(const ClementParams& p);
Vec3 c_sr_coefficient(const ClementParams& p, const ClementPontryagin& w);
// as printed, for comparison
Vec3 c_sr_coefficient_transcribed(const ClementParams& p, const ClementPontryagin& w);
Vector c_sr_vectorfield(const ClementParams& p, const ClementPontryagin& w);
Vector c_sr_projected_field(const ClementParams& p, const Jet3State& j);
double c_t3m_energy(const ClementParams& p, const Jet3State& j);

// Omega_L = d theta_L on (X, Xd, Xdd, Xddd), closed form
Matrix c_presymplectic_closed(const ClementParams& p, const Jet3State& j);
// grad E - Omega X for the projected field
Vector c_presymplectic_residual(const ClementParams& p, const Jet3State& j);

struct MultiplierProbe {
  double square;  // g(X, X) at the probe
  ClementMultipliers u;
};
// Multipliers along a sequence X -> light cone at fixed remaining data, stops at the guard.
std::vector<MultiplierProbe> c_light_cone_probe(const ClementParams& p, const ClementPhase& z0,
                                                const Vec3& null_direction, int steps);

}  // namespace degen
