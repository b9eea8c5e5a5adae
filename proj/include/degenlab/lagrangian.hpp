#pragma once

#include <optional>
#include <string>
#include <vector>

#include "degenlab/geometry.hpp"

namespace degen {

struct Jet2State {
  Vector q, qd, qdd;

  int dim() const { return static_cast<int>(q.size()); }
  void validate() const;
  Vector flat() const;
  static Jet2State from_flat(const Vector& v, int n);
};

struct Jet3State {
  Vector q, qd, qdd, qddd;

  int dim() const { return static_cast<int>(q.size()); }
  void validate() const;
  Jet2State truncate() const { return {q, qd, qdd}; }
  Vector flat() const;
  static Jet3State from_flat(const Vector& v, int n);
  static Jet3State zero(int n);
};

struct MomentaPair {
  Vector p0, p1;
};

// Point of T*TQ, flat order (q, qd, p0, p1).
struct PhasePoint {
  Vector q, qd, p0, p1;

  int dim() const { return static_cast<int>(q.size()); }
  Vector flat() const;
  static PhasePoint from_flat(const Vector& z, int n);
};

// Point of P^3Q = T^3Q x (p0, p1), flat order (q, qd, qdd, qddd, p0, p1).
struct PontryaginPoint {
  Jet3State jet;
  Vector p0, p1;

  int dim() const { return jet.dim(); }
  Vector flat() const;
  static PontryaginPoint from_flat(const Vector& w, int n);
};

class SecondOrderLagrangian {
 public:
  virtual ~SecondOrderLagrangian() = default;

  virtual int dim() const = 0;
  virtual std::string name() const = 0;

  virtual double lagrangian(const Jet2State& j) const = 0;
  virtual Vector dL_dq(const Jet2State& j) const = 0;
  virtual Vector dL_dqd(const Jet2State& j) const = 0;
  virtual Vector dL_dqdd(const Jet2State& j) const = 0;

  // Models with hand-written momenta override this.
  virtual std::optional<MomentaPair> closed_form_momenta(const Jet3State&) const {
    return std::nullopt;
  }
};

// p0 = dL/dqd - d/dt dL/dqdd with the total derivative done by central FD along (qd, qdd, qddd).
MomentaPair generic_momenta(const SecondOrderLagrangian& model, const Jet3State& j,
                            double h = kFdStep);
// Closed form where available, generic otherwise.
MomentaPair momenta(const SecondOrderLagrangian& model, const Jet3State& j);

double energy(const SecondOrderLagrangian& model, const Jet3State& j);

// Trajectory samples are jets at spacing dt. Returns one residual per interior sample
// (two samples are consumed at each end by the stencil).
std::vector<Vector> euler_lagrange_residual(const SecondOrderLagrangian& model,
                                            const std::vector<Jet2State>& samples, double dt);

struct ZermeloResidual {
  double r1 = 0.0;
  double r2 = 0.0;
};
ZermeloResidual zermelo_check(const SecondOrderLagrangian& model, const Jet2State& j);

struct HessianResult {
  Matrix hessian;
  int rank = 0;
};
HessianResult acceleration_hessian(const SecondOrderLagrangian& model, const Jet2State& j);

struct OneForm {
  Vector dq;   // coefficient of dq
  Vector dqd;  // coefficient of dqd
};
OneForm lagrangian_one_form(const SecondOrderLagrangian& model, const Jet3State& j);

// Matrix of d(theta) on (q, qd, qdd, qddd): Omega_ab = d_a theta_b - d_b theta_a,
// so omega(u, v) = u^T Omega v.
Matrix presymplectic_matrix(const SecondOrderLagrangian& model, const Jet3State& j,
                            double h = kFdStep);

// Random vector with entries uniform in [-scale, scale].
template <class Rng>
Vector random_vector(Rng& rng, int n, double scale = 1.0);

}  // namespace degen

#include <random>

namespace degen {
template <class Rng>
Vector random_vector(Rng& rng, int n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}
}  // namespace degen
