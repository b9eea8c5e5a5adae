#include "degenlab/skinner_rusk.hpp"

#include <memory>
#include <mutex>

namespace degen {

SkinnerRuskSystem make_skinner_rusk(const SecondOrderLagrangian& model) {
  const int n = model.dim();
  SkinnerRuskSystem sys;
  sys.n = n;
  const SecondOrderLagrangian* mp = &model;
  sys.free_field = [mp, n](const Vector& v) {
    PontryaginPoint w = PontryaginPoint::from_flat(v, n);
    Jet2State j2 = w.jet.truncate();
    Vector out = Vector::Zero(6 * n);
    out.segment(0, n) = w.jet.qd;
    out.segment(n, n) = w.jet.qdd;
    out.segment(2 * n, n) = w.jet.qddd;
    out.segment(4 * n, n) = mp->dL_dq(j2);
    out.segment(5 * n, n) = mp->dL_dqd(j2) - w.p0;
    return out;
  };
  for (int i = 0; i < n; ++i) {
    sys.w0.add(PhaseFunction([mp, n, i](const Vector& v) {
                 PontryaginPoint w = PontryaginPoint::from_flat(v, n);
                 return w.p0[i] - momenta(*mp, w.jet).p0[i];
               }),
               "p0_" + std::to_string(i + 1), 0);
  }
  for (int i = 0; i < n; ++i) {
    sys.w0.add(PhaseFunction([mp, n, i](const Vector& v) {
                 PontryaginPoint w = PontryaginPoint::from_flat(v, n);
                 return w.p1[i] - mp->dL_dqdd(w.jet.truncate())[i];
               }),
               "p1_" + std::to_string(i + 1), 0);
  }
  return sys;
}

namespace {

// Tangency of c along free_field + sum_j u_j e_(qddd_j): A = dc/dqddd, b = dc . free_field.
// Only n + 1 directional derivatives per constraint are needed, which matters once constraints
// are themselves built from differences. Both halves are asked for at the same point in turn.
struct TangencyMemo {
  ConstraintSet cs;
  std::function<Vector(const Vector&)> field;
  int n = 0;
  std::mutex mu;
  Vector x;
  Matrix A;
  Vector b;

  void at(const Vector& w, Matrix& A_out, Vector& b_out) {
    {
      std::lock_guard<std::mutex> lock(mu);
      if (x.size() == w.size() && x == w) {
        A_out = A;
        b_out = b;
        return;
      }
    }
    Matrix a(cs.size(), n);
    for (int j = 0; j < n; ++j) a.col(j) = cs.directional(w, Vector::Unit(w.size(), 3 * n + j));
    Vector bb = cs.directional(w, field(w));
    std::lock_guard<std::mutex> lock(mu);
    x = w;
    A = a;
    b = bb;
    A_out = a;
    b_out = bb;
  }
};

LinearConsistency tangency_problem(const SkinnerRuskSystem& sys, const ConstraintSet& cs) {
  auto memo = std::make_shared<TangencyMemo>();
  memo->cs = cs;
  memo->field = sys.free_field;
  memo->n = sys.n;
  LinearConsistency p;
  p.coefficients = [memo](const Vector& w) {
    Matrix A;
    Vector b;
    memo->at(w, A, b);
    return A;
  };
  p.inhomogeneity = [memo](const Vector& w) {
    Matrix A;
    Vector b;
    memo->at(w, A, b);
    return b;
  };
  return p;
}

}  // namespace

ConstraintChain gnh_constraint_chain(const SkinnerRuskSystem& sys, const std::vector<Vector>& seeds,
                                     const ChainOptions& opt) {
  if (seeds.empty()) throw NumericalError("gnh_constraint_chain needs seed points");
  ConstraintChain out;
  out.constraints = sys.w0;
  out.generation_sizes.push_back(sys.w0.size());
  for (int gen = 1; gen <= opt.max_generations; ++gen) {
    out.surface_points.clear();
    for (const auto& s : seeds) out.surface_points.push_back(project_to_surface(out.constraints, s));
    LinearConsistency prob = tangency_problem(sys, out.constraints);
    out.last_step = solve_consistency(prob, out.surface_points.front(), opt.rank_tol);
    out.spectra.emplace_back();
    auto fresh = genuine_candidates(out.last_step.new_constraint_candidates, out.surface_points,
                                    opt.genuine_tol, &out.spectra.back());
    if (fresh.empty()) {
      out.terminated = true;
      return out;
    }
    for (size_t k = 0; k < fresh.size(); ++k)
      out.constraints.add(fresh[k], "W" + std::to_string(gen) + "_" + std::to_string(k), gen);
    out.generation_sizes.push_back(static_cast<int>(fresh.size()));
  }
  return out;
}

double tangency_residual(const ConstraintSet& cs, const Vector& field, const Vector& w) {
  Vector d = cs.gradients(w).transpose() * field;
  return d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
}

double tangency_residual_fd(const ConstraintSet& cs, const Vector& field, const Vector& w) {
  auto vals = [&](const Vector& x) { return cs.values(x); };
  // five-point stencil with the step shrunk for fast fields
  const double h = 1e-3 / std::max(1.0, field.cwiseAbs().maxCoeff());
  Vector d = fd_directional_derivative5(vals, w, field, h);
  return d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
}

}  // namespace degen
