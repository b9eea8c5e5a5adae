#include "doctest.h"

#include <cmath>
#include <random>

#include "degenlab/reference_models.hpp"

using namespace degen;

namespace {
Jet3State some_jet(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  return {random_vector(rng, n), random_vector(rng, n), random_vector(rng, n), random_vector(rng, n)};
}
}  // namespace

TEST_CASE("free acceleration momenta: generic FD equals p1 = qdd, p0 = -qddd") {
  FreeAccelerationLagrangian L(3);
  Jet3State j = some_jet(3, 7);
  MomentaPair p = generic_momenta(L, j);
  CHECK((p.p1 - j.qdd).norm() < 1e-9);
  CHECK((p.p0 + j.qddd).norm() < 1e-9);
}

TEST_CASE("zero state has zero momenta and zero energy") {
  FreeAccelerationLagrangian L(2);
  Jet3State z = Jet3State::zero(2);
  MomentaPair p = momenta(L, z);
  CHECK(p.p0.norm() == 0.0);
  CHECK(p.p1.norm() == 0.0);
  CHECK(energy(L, z) == 0.0);
}

TEST_CASE("free acceleration energy matches closed form") {
  FreeAccelerationLagrangian L(3);
  Jet3State j = some_jet(3, 11);
  double expect = 0.5 * j.qdd.squaredNorm() - j.qd.dot(j.qddd);
  CHECK(energy(L, j) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("Euler-Lagrange residual: cubics solve q'''' = 0, a quartic leaves 24 a") {
  FreeAccelerationLagrangian L(1);
  const double dt = 0.01;
  auto sample = [&](double a, double t) {
    Jet2State s;
    s.q = Vector::Constant(1, a * std::pow(t, 4) + 0.5 * t * t * t - t);
    s.qd = Vector::Constant(1, 4 * a * std::pow(t, 3) + 1.5 * t * t - 1);
    s.qdd = Vector::Constant(1, 12 * a * t * t + 3 * t);
    return s;
  };
  for (double a : {0.0, 0.5}) {
    std::vector<Jet2State> samples;
    for (int k = 0; k < 11; ++k) samples.push_back(sample(a, 0.2 + k * dt));
    auto res = euler_lagrange_residual(L, samples, dt);
    REQUIRE(res.size() == 7);
    for (const auto& r : res) CHECK(std::abs(std::abs(r[0]) - 24 * a) < 1e-5);
  }
}

TEST_CASE("Zermelo residuals: arc length vanishes, free acceleration does not") {
  ArcLengthLagrangian arc(3);
  Jet3State j = some_jet(3, 3);
  auto z = zermelo_check(arc, j.truncate());
  CHECK(std::abs(z.r1) < 1e-14);
  CHECK(std::abs(z.r2) < 1e-14);

  FreeAccelerationLagrangian fa(3);
  auto w = zermelo_check(fa, j.truncate());
  CHECK(w.r1 == doctest::Approx(-1.5 * j.qdd.squaredNorm()));
  CHECK(w.r2 == doctest::Approx(j.qd.dot(j.qdd)));
}

TEST_CASE("arc length at rest is singular") {
  ArcLengthLagrangian arc(2);
  CHECK_THROWS_AS(arc.dL_dqd(Jet3State::zero(2).truncate()), SingularConfigurationError);
}

TEST_CASE("acceleration Hessian rank") {
  FreeAccelerationLagrangian fa(4);
  Jet3State j = some_jet(4, 5);
  auto h = acceleration_hessian(fa, j.truncate());
  CHECK(h.rank == 4);
  CHECK((h.hessian - Matrix::Identity(4, 4)).norm() < 1e-8);
  ArcLengthLagrangian arc(4);
  CHECK(acceleration_hessian(arc, j.truncate()).rank == 0);
}

TEST_CASE("presymplectic matrix of the free acceleration model") {
  FreeAccelerationLagrangian fa(1);
  Jet3State j = some_jet(1, 9);
  Matrix om = presymplectic_matrix(fa, j);
  REQUIRE(om.rows() == 4);
  CHECK((om + om.transpose()).norm() < 1e-12);
  // theta = -qddd dq + qdd dqd
  CHECK(std::abs(om(0, 3) - 1.0) < 1e-6);  // nested FD
  CHECK(std::abs(om(1, 2) + 1.0) < 1e-6);
  CHECK(std::abs(om(0, 1)) < 1e-6);
  CHECK(std::abs(om(2, 3)) < 1e-6);
  OneForm th = lagrangian_one_form(fa, j);
  CHECK((th.dq + j.qddd).norm() < 1e-9);
  CHECK((th.dqd - j.qdd).norm() < 1e-9);
}

TEST_CASE("jet validation") {
  Jet3State j = Jet3State::zero(3);
  j.qdd = Vector::Zero(2);
  CHECK_THROWS_AS(j.validate(), NumericalError);
  Jet3State k = Jet3State::zero(3);
  k.qd[1] = std::nan("");
  CHECK_THROWS_AS(k.validate(), NumericalError);
  CHECK_THROWS_AS(Jet3State::from_flat(Vector::Zero(10), 3), NumericalError);
  Jet3State r = some_jet(3, 1);
  Jet3State back = Jet3State::from_flat(r.flat(), 3);
  CHECK((back.qddd - r.qddd).norm() == 0.0);
}

TEST_CASE("phase and Pontryagin flat layouts round-trip") {
  std::mt19937_64 rng(2);
  PhasePoint z{random_vector(rng, 2), random_vector(rng, 2), random_vector(rng, 2), random_vector(rng, 2)};
  Vector f = z.flat();
  CHECK(f.size() == 8);
  CHECK(f.segment(4, 2) == z.p0);
  PhasePoint z2 = PhasePoint::from_flat(f, 2);
  CHECK(z2.p1 == z.p1);
  PontryaginPoint w{some_jet(2, 4), z.p0, z.p1};
  Vector wf = w.flat();
  CHECK(wf.size() == 12);
  CHECK(wf.segment(6, 2) == w.jet.qddd);
  CHECK(PontryaginPoint::from_flat(wf, 2).p0 == z.p0);
}
