#pragma once

#include "degenlab/constraints.hpp"
#include "degenlab/lagrangian.hpp"

namespace degen {

// Vector field on P^3Q, flat (q, qd, qdd, qddd, p0, p1), up to the undetermined qddd-rates.
struct SkinnerRuskSystem {
  int n = 0;
  // field with the unknown qddd-rates set to zero
  std::function<Vector(const Vector&)> free_field;
  // graph of the Legendre map
  ConstraintSet w0;
};

// Generic system from a model's partials: q' = qd, qd' = qdd, qdd' = qddd,
// p0' = dL/dq, p1' = dL/dqd - p0. W0 from the model momenta (FD gradients).
SkinnerRuskSystem make_skinner_rusk(const SecondOrderLagrangian& model);

struct ChainOptions {
  int max_generations = 10;
  // Constraints past the first generation are differences of differences; by the third level
  // the floor is around 1e-7 while genuine generations sit at O(0.1) and above.
  double genuine_tol = 1e-5;
  double rank_tol = 1e-9;
};

struct ConstraintChain {
  ConstraintSet constraints;
  std::vector<int> generation_sizes;  // W0 first
  bool terminated = false;
  std::vector<Vector> surface_points;  // seeds pulled onto the final submanifold
  MultiplierSolution last_step;        // solve at the first surface point of the last generation
  std::vector<std::vector<double>> spectra;  // candidate singular values per generation
};

// W0 > W1 > ... : demand tangency, solve for the qddd-rates where possible, keep the rest
// as new constraints. Seeds should outnumber the constraints at every generation.
ConstraintChain gnh_constraint_chain(const SkinnerRuskSystem& sys, const std::vector<Vector>& seeds,
                                     const ChainOptions& opt = {});

// Largest |grad c . X| over the set
double tangency_residual(const ConstraintSet& cs, const Vector& field, const Vector& w);
// Same, with the derivative taken by central FD along the field
double tangency_residual_fd(const ConstraintSet& cs, const Vector& field, const Vector& w);

}  // namespace degen
