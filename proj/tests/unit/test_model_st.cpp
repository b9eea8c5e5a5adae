#include "doctest.h"

#include <cmath>

#include "degenlab/integrators.hpp"
#include "degenlab/model_st.hpp"
#include "degenlab/skinner_rusk.hpp"
#include "degenlab/verify.hpp"

using namespace degen;

namespace {
const STParams kP{1.3, 0.8, 1.1};

STPhasePoint lift(const Jet3State& j) { return st_momenta(kP, STJet3::from_jet(j)); }
}  // namespace

TEST_CASE("st parameters are validated") {
  CHECK_THROWS_AS(STModel(STParams{1.0, 0.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(STModel(STParams{std::nan(""), 1.0, 1.0}), ConfigError);
}

TEST_CASE("st closed-form momenta agree with the generic FD construction") {
  Rng rng(101);
  STModel model(kP);
  for (int k = 0; k < 5; ++k) {
    Jet3State j = random_st_jet(rng, kP, false);
    MomentaPair gen = generic_momenta(model, j);
    Vector z = lift(j).flat();
    CHECK((z.segment(12, 6) - gen.p0).norm() < 1e-8);
    CHECK((z.segment(18, 6) - gen.p1).norm() < 1e-8);
    CHECK(model.lagrangian(j.truncate()) == doctest::Approx(st_lagrangian(kP, STJet3::from_jet(j))));
  }
}

TEST_CASE("st zero state") {
  Jet3State z = Jet3State::zero(6);
  STPhasePoint ph = lift(z);
  CHECK(ph.flat().norm() == 0.0);
  CHECK(st_canonical_h(kP, ph) == 0.0);
  CHECK(st_conserved(kP, STJet3::from_jet(z)).E == 0.0);
}

TEST_CASE("st lift lies on the primary constraint surface") {
  Rng rng(102);
  ConstraintSet prim = st_primary_constraints(kP);
  CHECK(prim.size() == 6);  // one per acceleration component
  for (int k = 0; k < 5; ++k) CHECK(prim.max_abs(lift(random_st_jet(rng, kP)).flat()) < 1e-13);
}

TEST_CASE("st multipliers equal the accelerations on the lift") {
  Rng rng(103);
  for (int k = 0; k < 5; ++k) {
    Jet3State j = random_st_jet(rng, kP);
    STJet3 s = STJet3::from_jet(j);
    STMultipliers u = st_multipliers(kP, lift(j));
    CHECK((u.U - s.Xdd).norm() < 1e-12);
    CHECK((u.V - s.Ydd).norm() < 1e-12);
  }
}

TEST_CASE("st total Hamiltonian gradient against five-point FD") {
  Rng rng(104);
  STPhasePoint z = lift(random_st_jet(rng, kP));
  Vector flat = z.flat();
  Vector fd = fd_gradient5([](const Vector& v) { return st_total_h(kP, STPhasePoint::from_flat(v)); }, flat);
  CHECK((st_total_h_gradient(kP, z) - fd).norm() < 1e-8);
  CHECK((st_hamilton_rhs(kP, z) - symplectic_gradient(st_total_h_gradient(kP, z))).norm() < 1e-12);
  // positions move with the velocities
  CHECK((st_hamilton_rhs(kP, z).segment(0, 3) - z.Xd).norm() < 1e-12);
}

TEST_CASE("st closed Dirac table matches brackets through the second-class set") {
  Rng rng(105);
  Vector z = lift(random_st_jet(rng, kP)).flat();
  ConstraintSet prim = st_primary_constraints(kP);
  // X1 with PX0_1, Xd1 with Yd1
  CHECK(st_dirac_table(kP, STPhasePoint::from_flat(z), 0, 12) == 1.0);
  CHECK(st_dirac_table(kP, STPhasePoint::from_flat(z), 6, 9) == kP.mu);
  CHECK(st_dirac_table(kP, STPhasePoint::from_flat(z), 9, 6) == -kP.mu);
  for (auto [i, j] : {std::pair{0, 12}, {6, 9}, {6, 18}, {3, 15}, {0, 1}, {7, 10}}) {
    double g = dirac_bracket(PhaseFunction::coordinate(i), PhaseFunction::coordinate(j), prim, z);
    CHECK(std::abs(g - st_dirac_table(kP, STPhasePoint::from_flat(z), i, j)) < 1e-12);
  }
  CHECK_THROWS_AS(st_dirac_table(kP, STPhasePoint::from_flat(z), 0, 24), NumericalError);
}

TEST_CASE("st closure solves the field equations") {
  Rng rng(106);
  for (int k = 0; k < 5; ++k) {
    auto [rx, ry] = st_el_residual(kP, STJet3::from_jet(random_st_jet(rng, kP)));
    CHECK(rx.norm() < 1e-12);
    CHECK(ry.norm() < 1e-12);
  }
}

TEST_CASE("st energy and J along a short EL flow") {
  Rng rng(107);
  Jet3State j = random_st_jet(rng, kP);
  Rhs f = [](const Vector& x) { return st_el_vectorfield(kP, STJet3::from_jet(Jet3State::from_flat(x, 6))); };
  Vector x = j.flat();
  STConserved c0 = st_conserved(kP, STJet3::from_jet(j));
  for (int k = 0; k < 200; ++k) x = rk4_step(f, x, 1e-3);
  STJet3 s = STJet3::from_jet(Jet3State::from_flat(x, 6));
  STConserved c1 = st_conserved(kP, s);
  CHECK(std::abs(c1.E - c0.E) < 1e-9);
  CHECK((c1.half_J - c0.half_J).norm() < 1e-9);
  // jet and phase forms of J/2, and the two energies
  CHECK((st_half_j_phase(st_momenta(kP, s)) - c1.half_J).norm() < 1e-12);
  CHECK(st_t3q_energy(kP, s) == doctest::Approx(st_canonical_h(kP, st_momenta(kP, s))).epsilon(1e-12));
}

TEST_CASE("st SR constraints vanish on lifted points") {
  Rng rng(108);
  ConstraintSet sr = st_sr_constraints(kP);
  for (int k = 0; k < 5; ++k) {
    Jet3State j = random_st_jet(rng, kP);
    STPhasePoint z = lift(j);
    STPontryagin w{STJet3::from_jet(j), z.PX0, z.PY0, z.PX1, z.PY1};
    CHECK(sr.max_abs(w.flat()) < 1e-12);
    Vector xsr = st_sr_vectorfield(kP, w).field;
    CHECK(tangency_residual(sr, xsr, w.flat()) < 1e-11);
  }
}
