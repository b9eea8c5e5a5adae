#include "doctest.h"

#include <cmath>
#include <random>

#include "degenlab/constraints.hpp"
#include "degenlab/lagrangian.hpp"

using namespace degen;

namespace {
// (q1, q2, p1, p2)
PhaseFunction q(int i) { return PhaseFunction::coordinate(i); }
PhaseFunction p(int i) { return PhaseFunction::coordinate(2 + i); }

// H = p1^2/2 + q2^2/2 + q1 p2; p2 ~ 0 is primary, q2 ~ 0 follows
PhaseFunction toy_h() {
  return 0.5 * (p(0) * p(0)) + 0.5 * (q(1) * q(1)) + q(0) * p(1);
}

std::vector<Vector> seeds(int count, unsigned s) {
  std::mt19937_64 rng(s);
  std::vector<Vector> out;
  for (int k = 0; k < count; ++k) out.push_back(random_vector(rng, 4));
  return out;
}
}  // namespace

TEST_CASE("canonical brackets pair the halves of the flat vector") {
  Vector z = seeds(1, 1)[0];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(poisson_bracket(q(i), p(j), z) == (i == j ? 1.0 : 0.0));
      CHECK(poisson_bracket(q(i), q(j), z) == 0.0);
      CHECK(poisson_bracket(p(i), p(j), z) == 0.0);
    }
  CHECK(poisson_bracket(p(0), q(0), z) == -1.0);
}

TEST_CASE("Poisson bracket: antisymmetry and Leibniz rule") {
  Vector z = seeds(1, 2)[0];
  PhaseFunction f = q(0) * p(1) + 2.0 * (q(1) * q(1));
  PhaseFunction g = p(0) * p(0) * q(1);
  PhaseFunction h = q(0) + p(1) * p(1);
  CHECK(poisson_bracket(f, g, z) == doctest::Approx(-poisson_bracket(g, f, z)));
  double lhs = poisson_bracket(f, g * h, z);
  double rhs = poisson_bracket(f, g, z) * h(z) + g(z) * poisson_bracket(f, h, z);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("product gradient matches five-point oracle") {
  PhaseFunction f = q(0) * p(1) * p(1) + 3.0 * q(1);
  Vector z = seeds(1, 3)[0];
  CHECK((f.gradient(z) - f.fd_gradient_oracle(z)).norm() < 1e-9);
  PhaseFunction raw([](const Vector& x) { return std::sin(x[0]) * x[3]; });
  CHECK_FALSE(raw.has_analytic_gradient());
  Vector d = Vector::Ones(4);
  CHECK(raw.directional(z, d) == doctest::Approx(std::cos(z[0]) * z[3] + std::sin(z[0])).epsilon(1e-9));
}

TEST_CASE("constraint set: duplicate labels are rejected") {
  ConstraintSet cs;
  cs.add(p(1), "phi");
  CHECK_THROWS_AS(cs.add(q(1), "phi"), ConfigError);
  cs.add(q(1), "chi", 1);
  CHECK(cs.size() == 2);
  CHECK(cs.with_generation_at_most(0).size() == 1);
}

TEST_CASE("Dirac bracket with q2 = p2 = 0 removes the second pair") {
  ConstraintSet sc;
  sc.add(q(1), "chi1");
  sc.add(p(1), "chi2");
  Vector z = seeds(1, 4)[0];
  CHECK(dirac_bracket(q(0), p(0), sc, z) == doctest::Approx(1.0));
  CHECK(std::abs(dirac_bracket(q(1), p(1), sc, z)) < 1e-15);
  // Dirac bracket of anything with a second-class constraint vanishes
  PhaseFunction f = q(0) * p(1) + p(0) * q(1);
  CHECK(std::abs(dirac_bracket(f, q(1), sc, z)) < 1e-14);
  CHECK(std::abs(dirac_bracket(f, p(1), sc, z)) < 1e-14);
  Vector xdb = dirac_vector_field(toy_h(), sc, z);
  CHECK(xdb[1] == 0.0);
  CHECK(xdb[3] == 0.0);
  CHECK(xdb[0] == doctest::Approx(z[2]));
}

TEST_CASE("Dirac bracket on a first-class set throws") {
  ConstraintSet fc;
  fc.add(p(1), "phi");
  CHECK_THROWS_AS(dirac_bracket(q(0), p(0), fc, seeds(1, 5)[0]), SingularMatrixError);
}

TEST_CASE("classification: one first-class, one second-class pair") {
  ConstraintSet a;
  a.add(p(1), "phi");
  auto c1 = classify_constraints(a, seeds(12, 6));
  CHECK(c1.first_class == 1);
  CHECK(c1.second_class == 0);
  ConstraintSet b;
  b.add(p(1), "phi");
  b.add(q(1), "chi");
  auto c2 = classify_constraints(b, seeds(12, 6));
  CHECK(c2.second_class == 2);
  CHECK(c2.first_class == 0);
  CHECK(c2.consistent);
  CHECK(c2.constraints[0].cls == ConstraintClass::second);
}

TEST_CASE("Dirac-Bergmann on the toy system: primary p2, secondary q2, then stop") {
  ConstraintSet prim;
  prim.add(p(1), "phi");
  auto r = dirac_bergmann(toy_h(), prim, seeds(8, 7));
  CHECK(r.terminated);
  REQUIRE(r.generation_sizes.size() == 2);
  CHECK(r.generation_sizes[0] == 1);
  CHECK(r.generation_sizes[1] == 1);
  for (const auto& z : r.surface_points) CHECK(r.constraints.max_abs(z) < 1e-12);
}

TEST_CASE("consistency step solves the multiplier once both constraints are in") {
  ConstraintSet cs;
  cs.add(p(1), "phi");
  cs.add(q(1), "chi");
  Vector z = seeds(1, 8)[0];
  z[1] = 0.0;
  z[3] = 0.0;
  auto s = consistency_step(toy_h(), cs, z);
  CHECK(s.rank == 2);
  CHECK(s.kernel.cols() == 0);
  CHECK(s.residual < 1e-12);
}

TEST_CASE("projection onto the unit sphere") {
  ConstraintSet cs;
  PhaseFunction r2 = q(0) * q(0) + q(1) * q(1) + p(0) * p(0) + p(1) * p(1) + PhaseFunction::constant(-1.0);
  cs.add(r2, "sphere");
  Vector z(4);
  z << 0.9, 0.5, -0.3, 0.2;
  Vector x = project_to_surface(cs, z);
  CHECK(std::abs(x.norm() - 1.0) < 1e-12);
}

TEST_CASE("genuine candidates drop dependent and vanishing ones") {
  auto pts = seeds(10, 9);
  std::vector<PhaseFunction> c{q(0), 2.0 * q(0), p(1), PhaseFunction::constant(0.0)};
  std::vector<double> sv;
  auto g = genuine_candidates(c, pts, 1e-9, &sv);
  CHECK(g.size() == 2);
  CHECK(sv.size() == 4);
  CHECK(genuine_candidates({PhaseFunction::constant(0.0)}, pts, 1e-9).empty());
}
