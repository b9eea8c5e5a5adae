#include "degenlab/lagrangian.hpp"

namespace degen {

namespace {

void require_same(const Vector& a, const Vector& b, const char* what) {
  if (a.size() != b.size()) throw NumericalError(std::string("dimension mismatch in ") + what);
}

Vector concat(std::initializer_list<const Vector*> parts) {
  Eigen::Index n = 0;
  for (auto* p : parts) n += p->size();
  Vector out(n);
  Eigen::Index k = 0;
  for (auto* p : parts) {
    out.segment(k, p->size()) = *p;
    k += p->size();
  }
  return out;
}

}  // namespace

void Jet2State::validate() const {
  require_same(q, qd, "Jet2State");
  require_same(q, qdd, "Jet2State");
  if (!flat().allFinite()) throw NumericalError("non-finite Jet2State");
}

Vector Jet2State::flat() const { return concat({&q, &qd, &qdd}); }

Jet2State Jet2State::from_flat(const Vector& v, int n) {
  if (v.size() != 3 * n) throw NumericalError("Jet2State::from_flat size");
  return {v.segment(0, n), v.segment(n, n), v.segment(2 * n, n)};
}

void Jet3State::validate() const {
  require_same(q, qd, "Jet3State");
  require_same(q, qdd, "Jet3State");
  require_same(q, qddd, "Jet3State");
  if (!flat().allFinite()) throw NumericalError("non-finite Jet3State");
}

Vector Jet3State::flat() const { return concat({&q, &qd, &qdd, &qddd}); }

Jet3State Jet3State::from_flat(const Vector& v, int n) {
  if (v.size() != 4 * n) throw NumericalError("Jet3State::from_flat size");
  return {v.segment(0, n), v.segment(n, n), v.segment(2 * n, n), v.segment(3 * n, n)};
}

Jet3State Jet3State::zero(int n) {
  return {Vector::Zero(n), Vector::Zero(n), Vector::Zero(n), Vector::Zero(n)};
}

Vector PhasePoint::flat() const { return concat({&q, &qd, &p0, &p1}); }

PhasePoint PhasePoint::from_flat(const Vector& z, int n) {
  if (z.size() != 4 * n) throw NumericalError("PhasePoint::from_flat size");
  return {z.segment(0, n), z.segment(n, n), z.segment(2 * n, n), z.segment(3 * n, n)};
}

Vector PontryaginPoint::flat() const {
  Vector j = jet.flat();
  return concat({&j, &p0, &p1});
}

PontryaginPoint PontryaginPoint::from_flat(const Vector& w, int n) {
  if (w.size() != 6 * n) throw NumericalError("PontryaginPoint::from_flat size");
  return {Jet3State::from_flat(w.head(4 * n), n), w.segment(4 * n, n), w.segment(5 * n, n)};
}

MomentaPair generic_momenta(const SecondOrderLagrangian& model, const Jet3State& j, double h) {
  const int n = j.dim();
  Jet2State j2 = j.truncate();
  auto dLdqdd = [&](const Vector& x) { return model.dL_dqdd(Jet2State::from_flat(x, n)); };
  Vector dir = concat({&j.qd, &j.qdd, &j.qddd});
  Vector ddt = fd_directional_derivative(dLdqdd, j2.flat(), dir, h);
  MomentaPair out;
  out.p1 = model.dL_dqdd(j2);
  out.p0 = model.dL_dqd(j2) - ddt;
  return out;
}

MomentaPair momenta(const SecondOrderLagrangian& model, const Jet3State& j) {
  if (auto cf = model.closed_form_momenta(j)) return *cf;
  return generic_momenta(model, j);
}

double energy(const SecondOrderLagrangian& model, const Jet3State& j) {
  MomentaPair p = momenta(model, j);
  return j.qd.dot(p.p0) + j.qdd.dot(p.p1) - model.lagrangian(j.truncate());
}

std::vector<Vector> euler_lagrange_residual(const SecondOrderLagrangian& model,
                                            const std::vector<Jet2State>& samples, double dt) {
  if (samples.size() < 5) throw NumericalError("euler_lagrange_residual needs at least 5 samples");
  if (!(dt > 0)) throw NumericalError("euler_lagrange_residual: dt must be positive");
  const size_t N = samples.size();
  std::vector<Vector> a(N), b(N), c(N);
  for (size_t k = 0; k < N; ++k) {
    a[k] = model.dL_dq(samples[k]);
    b[k] = model.dL_dqd(samples[k]);
    c[k] = model.dL_dqdd(samples[k]);
  }
  // fourth-order central stencils in time
  std::vector<Vector> out;
  for (size_t k = 2; k + 2 < N; ++k) {
    Vector db = (-b[k + 2] + 8 * b[k + 1] - 8 * b[k - 1] + b[k - 2]) / (12 * dt);
    Vector ddc = (-c[k + 2] + 16 * c[k + 1] - 30 * c[k] + 16 * c[k - 1] - c[k - 2]) / (12 * dt * dt);
    out.push_back(a[k] - db + ddc);
  }
  return out;
}

ZermeloResidual zermelo_check(const SecondOrderLagrangian& model, const Jet2State& j) {
  Vector pd = model.dL_dqd(j);
  Vector pdd = model.dL_dqdd(j);
  return {model.lagrangian(j) - j.qd.dot(pd) - 2.0 * j.qdd.dot(pdd), j.qd.dot(pdd)};
}

HessianResult acceleration_hessian(const SecondOrderLagrangian& model, const Jet2State& j) {
  auto f = [&](const Vector& acc) { return model.dL_dqdd({j.q, j.qd, acc}); };
  HessianResult out;
  out.hessian = fd_jacobian(f, j.qdd);
  // absolute cut: an all-zero Hessian must report rank 0, not a noise rank
  Eigen::JacobiSVD<Matrix> svd(out.hessian);
  double scale = std::max(1.0, out.hessian.size() ? svd.singularValues()[0] : 0.0);
  out.rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-7 * scale) ++out.rank;
  return out;
}

OneForm lagrangian_one_form(const SecondOrderLagrangian& model, const Jet3State& j) {
  MomentaPair p = momenta(model, j);
  return {p.p0, p.p1};
}

Matrix presymplectic_matrix(const SecondOrderLagrangian& model, const Jet3State& j, double h) {
  const int n = j.dim();
  // theta as a covector on T^3Q: (p0, p1, 0, 0)
  auto theta = [&](const Vector& x) {
    MomentaPair p = momenta(model, Jet3State::from_flat(x, n));
    Vector t = Vector::Zero(4 * n);
    t.segment(0, n) = p.p0;
    t.segment(n, n) = p.p1;
    return t;
  };
  // D(i, a) = d theta_i / d x_a
  Matrix D = fd_jacobian(theta, j.flat(), h);
  Matrix omega = D.transpose() - D;
  return 0.5 * (omega - omega.transpose());
}

}  // namespace degen
