#include "doctest.h"

#include <cmath>

#include "degenlab/integrators.hpp"
#include "degenlab/model_clement.hpp"
#include "degenlab/verify.hpp"

using namespace degen;

namespace {
ClementParams params(const MetricSignature& g = MetricSignature::lorentzian()) {
  return {1.1, 0.7, 0.9, 1.2, g};
}

std::vector<MetricSignature> metrics() { return {MetricSignature::euclidean(), MetricSignature::lorentzian()}; }
}  // namespace

TEST_CASE("clement parameters and the light-cone guard") {
  CHECK_THROWS_AS(ClementModel(ClementParams{0.0, 1, 1, 1}), ConfigError);
  ClementParams p = params();
  CHECK_THROWS_AS(c_checked_square(p, {1, 1, 0}), SingularConfigurationError);
  CHECK(c_checked_square(params(MetricSignature::euclidean()), {1, 1, 0}) == 2.0);
  CHECK(c_checked_square(p, {2, 1, 0}) == 3.0);
  CHECK(p.kappa() == doctest::Approx(1.44 / (0.9 * 1.1)));
}

TEST_CASE("clement closed-form momenta agree with generic FD") {
  for (const auto& g : metrics()) {
    ClementParams p = params(g);
    ClementModel model(p);
    Rng rng(201);
    for (int k = 0; k < 5; ++k) {
      Jet3State j = random_clement_jet(rng, p, 0.1, false);
      MomentaPair a = c_momenta(p, j), b = generic_momenta(model, j);
      CHECK((a.p0 - b.p0).norm() < 1e-8);
      CHECK((a.p1 - b.p1).norm() < 1e-8);
    }
  }
}

TEST_CASE("clement lift satisfies Phi and Phi_s") {
  for (const auto& g : metrics()) {
    ClementParams p = params(g);
    ConstraintSet cs = c_constraints(p);
    CHECK(cs.size() == 4);
    Rng rng(202);
    for (int k = 0; k < 5; ++k) {
      Jet3State j = random_clement_jet(rng, p);
      CHECK(cs.max_abs(c_legendre_lift(p, j).flat()) < 1e-12);
    }
  }
}

TEST_CASE("clement closure: field equations, contraction identity, projection") {
  ClementParams p = params();
  Rng rng(203);
  for (int k = 0; k < 5; ++k) {
    Jet3State j = random_clement_jet(rng, p);
    CHECK(c_el_residual(p, j).norm() < 1e-10);
    CHECK(std::abs(c_con_residual(p, j.q, j.qd, j.qdd)) < 1e-12);
  }
  Vec3 X(2, 0.3, -0.4), Xd(0.1, 0.5, 0.2), Xdd(1, 1, 1);
  CHECK(std::abs(c_con_residual(p, X, Xd, Xdd)) > 1e-3);
  CHECK(std::abs(c_con_residual(p, X, Xd, c_project_acceleration(p, X, Xd, Xdd))) < 1e-12);
}

TEST_CASE("clement Legendre tangent: closed blocks, FD, rank") {
  for (const auto& g : metrics()) {
    ClementParams p = params(g);
    Rng rng(204);
    Jet3State j = random_clement_jet(rng, p);
    Matrix fd = c_legendre_tangent(p, j), cl = c_legendre_tangent_closed(p, j);
    CHECK((fd - cl).norm() < 1e-7);
    // observed rank of the 12x12 Jacobian
    CHECK(numeric_rank(cl) == 8);
  }
}

TEST_CASE("clement constraint matrix: antisymmetric, FD brackets, det scaling") {
  ClementParams p = params();
  Rng rng(205);
  ConstraintSet cs = c_constraints(p);
  for (int k = 0; k < 5; ++k) {
    ClementPhase z = c_legendre_lift(p, random_clement_jet(rng, p));
    ClementConstraintMatrix cm = c_constraint_matrix(p, z);
    CHECK((cm.M + cm.M.transpose()).norm() < 1e-12);
    Matrix fd(4, 4);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        fd(a, b) = poisson_bracket_from_gradients(cs[a].fn.fd_gradient_oracle(z.flat()),
                                                  cs[b].fn.fd_gradient_oracle(z.flat()));
    CHECK((cm.M - fd).norm() < 1e-7 * (1 + cm.M.norm()));
    CHECK((cm.M * cm.Minv - Matrix::Identity(4, 4)).norm() < 1e-10);
    // the determinant goes with (X^2)^2, not X^2
    const double s = metric_dot(z.X, z.X, p.metric);
    CHECK(cm.det * p.mu * p.mu / (std::pow(p.zeta, 6) * s * s) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("clement multipliers solve both consistency conditions") {
  for (const auto& g : metrics()) {
    ClementParams p = params(g);
    Rng rng(206);
    for (int k = 0; k < 5; ++k) {
      ClementPhase z = c_legendre_lift(p, random_clement_jet(rng, p));
      ClementConsistency r = c_consistency_residuals(p, z, c_multipliers(p, z));
      CHECK(std::abs(r.cc1) < 1e-10);
      CHECK(r.cc2.norm() < 1e-10);
    }
  }
}

TEST_CASE("clement total Hamiltonian gradient and the Dirac flow") {
  for (const auto& g : metrics()) {
    ClementParams p = params(g);
    Rng rng(207);
    ClementPhase z = c_legendre_lift(p, random_clement_jet(rng, p));
    Vector fd = fd_gradient5([&](const Vector& v) { return c_total_h(p, ClementPhase::from_flat(v)); }, z.flat());
    Vector an = c_total_h_gradient(p, z);
    CHECK((an - fd).norm() < 1e-7 * (1 + an.norm()));
    Vector hr = c_hamilton_rhs(p, z);
    CHECK((hr.head(3) - z.Xd).norm() < 1e-10);
    CHECK((hr - c_db_equations(p, z)).norm() < 1e-8 * (1 + hr.norm()));
    CHECK((c_canonical_h_gradient(p, z) -
           fd_gradient5([&](const Vector& v) { return c_canonical_h(p, ClementPhase::from_flat(v)); }, z.flat()))
              .norm() < 1e-7);
  }
}

TEST_CASE("clement angular momentum: jet and phase forms agree, conserved along the flow") {
  ClementParams p = params();
  Rng rng(208);
  Jet3State j = random_clement_jet(rng, p);
  CHECK((c_angular_momentum(p, j) - c_angular_momentum_phase(p, c_legendre_lift(p, j))).norm() < 1e-10);

  Rhs f = [&](const Vector& x) { return c_sr_projected_field(p, Jet3State::from_flat(x, 3)); };
  Vector x = j.flat();
  Vec3 J0 = c_angular_momentum(p, j);
  double E0 = c_t3m_energy(p, j);
  for (int k = 0; k < 100; ++k) x = rk4_step(f, x, 1e-4);
  Jet3State j1 = Jet3State::from_flat(x, 3);
  CHECK((c_angular_momentum(p, j1) - J0).norm() < 1e-8 * (1 + J0.norm()));
  CHECK(std::abs(c_t3m_energy(p, j1) - E0) < 1e-8 * (1 + std::abs(E0)));
}

TEST_CASE("clement presymplectic equation on shell") {
  ClementParams p = params();
  Rng rng(209);
  ClementModel model(p);
  for (int k = 0; k < 3; ++k) {
    Jet3State j = random_clement_jet(rng, p);
    CHECK(c_presymplectic_residual(p, j).norm() < 1e-9);
    Matrix gen = presymplectic_matrix(model, j);
    Matrix cl = c_presymplectic_closed(p, j);
    CHECK((gen - cl).norm() < 1e-5 * (1 + cl.norm()));  // nested FD on the generic side
  }
}

TEST_CASE("clement multipliers grow towards the light cone") {
  ClementParams p = params();
  Rng rng(210);
  ClementPhase z = c_legendre_lift(p, random_clement_jet(rng, p));
  auto probe = c_light_cone_probe(p, z, {1, 1, 0}, 12);
  REQUIRE(probe.size() >= 4);
  CHECK(std::abs(probe.back().square) < std::abs(probe.front().square));
  CHECK(std::abs(probe.back().square) >= kLightConeGuard);
  CHECK(probe.back().u.U.norm() > 10 * probe.front().u.U.norm());
}
