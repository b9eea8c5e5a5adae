#include "doctest.h"

#include <cmath>

#include "degenlab/reference_models.hpp"
#include "degenlab/skinner_rusk.hpp"
#include "degenlab/verify.hpp"

using namespace degen;

namespace {
Vector lifted(const SecondOrderLagrangian& model, const Jet3State& j) {
  MomentaPair mp = momenta(model, j);
  return PontryaginPoint{j, mp.p0, mp.p1}.flat();
}
}  // namespace

TEST_CASE("regular model: W0 is already final, the qddd-rates are fixed") {
  FreeAccelerationLagrangian fa(2);
  SkinnerRuskSystem sys = make_skinner_rusk(fa);
  CHECK(sys.n == 2);
  CHECK(sys.w0.size() == 4);
  Rng rng(301);
  Jet3State base{random_vector(rng, 2), random_vector(rng, 2), random_vector(rng, 2), random_vector(rng, 2)};
  std::vector<Vector> seeds;
  for (int k = 0; k < 12; ++k) seeds.push_back(lifted(fa, base) + 0.2 * random_vector(rng, 12));
  ConstraintChain ch = gnh_constraint_chain(sys, seeds);
  CHECK(ch.terminated);
  CHECK(ch.generation_sizes == std::vector<int>{4});
  REQUIRE_FALSE(ch.surface_points.empty());
  for (const auto& w : ch.surface_points) CHECK(ch.constraints.max_abs(w) < 1e-10);
  // L = |qdd|^2/2 gives qdddd = 0
  CHECK(ch.last_step.rank == 2);
  CHECK(ch.last_step.solved.norm() < 1e-8);
}

TEST_CASE("generic free field agrees with the hand-written ST field outside the qddd-rates") {
  STParams p{1.3, 0.8, 1.1};
  STModel model(p);
  SkinnerRuskSystem sys = make_skinner_rusk(model);
  Rng rng(302);
  for (int k = 0; k < 3; ++k) {
    Jet3State j = random_st_jet(rng, p);
    Vector w = lifted(model, j);
    Vector gen = sys.free_field(w);
    Vector st = st_sr_vectorfield(p, STPontryagin::from_flat(w)).field;
    REQUIRE(gen.size() == 36);
    CHECK(gen.segment(18, 6).norm() == 0.0);
    Vector d = gen - st;
    d.segment(18, 6).setZero();
    CHECK(d.norm() < 1e-9);
    CHECK(sys.w0.max_abs(w) < 1e-9);
  }
}

TEST_CASE("tangency residual: analytic gradient and FD along the field agree") {
  ConstraintSet cs;
  cs.add(PhaseFunction::coordinate(0) * PhaseFunction::coordinate(1), "c");
  Vector w(2), f(2);
  w << 0.5, 2.0;
  f << 1.0, -3.0;
  // grad = (w1, w0) -> 2 - 1.5
  CHECK(tangency_residual(cs, f, w) == doctest::Approx(0.5));
  CHECK(tangency_residual_fd(cs, f, w) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("clement chain stops after psi2") {
  ClementParams p{1.1, 0.7, 0.9, 1.2, MetricSignature::lorentzian()};
  ClementModel model(p);
  SkinnerRuskSystem sys = make_skinner_rusk(model);
  Rng rng(303);
  Jet3State base = random_clement_jet(rng, p, 0.3, true);
  std::vector<Vector> seeds;
  for (int k = 0; k < 20; ++k) {
    Jet3State j = base;
    j.q += 0.2 * random_vector(rng, 3);
    j.qd += 0.2 * random_vector(rng, 3);
    j.qdd += 0.2 * random_vector(rng, 3);
    j.qddd += 0.2 * random_vector(rng, 3);
    seeds.push_back(lifted(model, j) + 0.05 * random_vector(rng, 18));
  }
  ChainOptions opt;
  opt.max_generations = 4;
  ConstraintChain ch = gnh_constraint_chain(sys, seeds, opt);
  CHECK(ch.terminated);
  CHECK(ch.generation_sizes == std::vector<int>{6, 3, 1});
}
