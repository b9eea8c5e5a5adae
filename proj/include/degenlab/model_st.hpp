#pragma once

#include <utility>

#include "degenlab/constraints.hpp"
#include "degenlab/lagrangian.hpp"

namespace degen {

struct STParams {
  double a = 1.0;
  double mu = 1.0;
  double m = 1.0;
  void validate() const;
};

// Configuration q = (X, Y); flat jet order as Jet3State with n = 6.
struct STJet3 {
  Vec3 X, Y, Xd, Yd, Xdd, Ydd, Xddd, Yddd;

  Jet3State to_jet() const;
  static STJet3 from_jet(const Jet3State& j);
};

// Flat layout: X Y | Xd Yd | PX0 PY0 | PX1 PY1  (q, qd, p0, p1 with n = 6)
struct STPhasePoint {
  Vec3 X, Y, Xd, Yd, PX0, PY0, PX1, PY1;

  Vector flat() const;
  static STPhasePoint from_flat(const Vector& z);
};

// P^3Q flat layout: jet (24) then p0 (6) then p1 (6)
struct STPontryagin {
  STJet3 jet;
  Vec3 PX0, PY0, PX1, PY1;

  Vector flat() const;
  static STPontryagin from_flat(const Vector& w);
};

class STModel : public SecondOrderLagrangian {
 public:
  explicit STModel(STParams p = {}) : p_(p) { p_.validate(); }
  int dim() const override { return 6; }
  std::string name() const override { return "st"; }
  double lagrangian(const Jet2State& j) const override;
  Vector dL_dq(const Jet2State& j) const override;
  Vector dL_dqd(const Jet2State& j) const override;
  Vector dL_dqdd(const Jet2State& j) const override;
  std::optional<MomentaPair> closed_form_momenta(const Jet3State& j) const override;
  const STParams& params() const { return p_; }

 private:
  STParams p_;
};

double st_lagrangian(const STParams& p, const STJet3& j);
std::pair<Vec3, Vec3> st_el_residual(const STParams& p, const STJet3& j);
STPhasePoint st_momenta(const STParams& p, const STJet3& j);
double st_canonical_h(const STParams& p, const STPhasePoint& z);
ConstraintSet st_primary_constraints(const STParams& p);

struct STMultipliers {
  Vec3 U, V;
};
STMultipliers st_multipliers(const STParams& p, const STPhasePoint& z);
double st_total_h(const STParams& p, const STPhasePoint& z);
Vector st_total_h_gradient(const STParams& p, const STPhasePoint& z);
Vector st_hamilton_rhs(const STParams& p, const STPhasePoint& z);
// indices into the flat 24-vector layout
double st_dirac_table(const STParams& p, const STPhasePoint& z, int i, int j);

struct STConserved {
  Vec3 half_J;  // right-hand side of the J/2 display
  double E = 0.0;
};
STConserved st_conserved(const STParams& p, const STJet3& j);
// same J/2 from phase variables: X x PX0 + Y x PY0 + Xd x PX1 + Yd x PY1
Vec3 st_half_j_phase(const STPhasePoint& z);

struct STSRField {
  Vector field;  // 36 entries, flat P^3Q order
  Vec3 KX, KY;
};
STSRField st_sr_vectorfield(const STParams& p, const STPontryagin& w);
// Phi-bar, Psi-bar, Phi, Psi (generation 0) and Phi-bar1, Psi-bar1 (generation 1)
ConstraintSet st_sr_constraints(const STParams& p);

// Third derivatives fixed by the Euler-Lagrange equations
std::pair<Vec3, Vec3> st_el_closure(const STParams& p, const Vec3& X, const Vec3& Y, const Vec3& Xdd,
                                    const Vec3& Ydd);
// Projected SR field on T^3Q (24 entries)
Vector st_el_vectorfield(const STParams& p, const STJet3& j);
double st_t3q_energy(const STParams& p, const STJet3& j);

}  // namespace degen
