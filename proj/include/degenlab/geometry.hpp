#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>
#include <type_traits>

#include "degenlab/errors.hpp"

namespace degen {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kFdStep = 1e-5;
inline constexpr double kRankTol = 1e-9;

// Diagonal metric with entries +1/-1.
class MetricSignature {
 public:
  MetricSignature() = default;
  MetricSignature(int g0, int g1, int g2);

  static MetricSignature euclidean() { return {1, 1, 1}; }
  static MetricSignature lorentzian() { return {1, -1, -1}; }
  // "euclidean" | "lorentzian"
  static MetricSignature from_name(const std::string& name);

  int operator[](int i) const { return diag_[i]; }
  bool is_euclidean() const { return diag_[0] == 1 && diag_[1] == 1 && diag_[2] == 1; }
  std::string name() const;

  // g is its own inverse, so lowering and raising are the same map
  Vec3 lower(const Vec3& v) const { return {diag_[0] * v[0], diag_[1] * v[1], diag_[2] * v[2]}; }
  Mat3 matrix() const;

  bool operator==(const MetricSignature&) const = default;

 private:
  std::array<int, 3> diag_{1, 1, 1};
};

double metric_dot(const Vec3& u, const Vec3& v, const MetricSignature& g);
// (u x v)^i = g^{il} eps_{ljk} u^j v^k
Vec3 metric_cross(const Vec3& u, const Vec3& v, const MetricSignature& g);
double triple_product(const Vec3& u, const Vec3& v, const Vec3& w);

Mat3 hat(const Vec3& u);
Vec3 unhat(const Mat3& m);

// singular values above tol * sigma_max
int numeric_rank(const Matrix& m, double tol = kRankTol);

struct LinearSolve {
  Vector solution;   // minimum-norm least squares
  double residual = 0.0;
  int rank = 0;
  Matrix kernel;       // right null space, columns orthonormal
  Matrix left_kernel;  // null space of M^T
};
LinearSolve solve_or_invert(const Matrix& m, const Vector& rhs, double tol = kRankTol);

// Pseudo-inverse through the same SVD cut.
Matrix pseudo_inverse(const Matrix& m, double tol = kRankTol);

bool all_finite(const Vector& v);
inline bool all_finite(double v) { return std::isfinite(v); }

namespace detail {
template <class T>
void check_finite(const T& v) {
  if (!all_finite(v)) throw NumericalError("finite difference produced a non-finite value");
}
}  // namespace detail

// (f(x+hd) - f(x-hd)) / 2h. f may return double or Vector.
template <class F>
auto fd_directional_derivative(F&& f, const Vector& x, const Vector& d, double h = kFdStep) {
  if (!(h > 0)) throw NumericalError("fd step must be positive");
  using R = std::decay_t<decltype(f(x))>;
  R fp = f(Vector(x + h * d));
  R fm = f(Vector(x - h * d));
  R out = (fp - fm) / (2.0 * h);
  detail::check_finite(out);
  return out;
}

// Five-point stencil, O(h^4). Used where gradients feed further differencing.
template <class F>
auto fd_directional_derivative5(F&& f, const Vector& x, const Vector& d, double h = 1e-3) {
  using R = std::decay_t<decltype(f(x))>;
  R f2p = f(Vector(x + 2 * h * d));
  R f1p = f(Vector(x + h * d));
  R f1m = f(Vector(x - h * d));
  R f2m = f(Vector(x - 2 * h * d));
  R out = (-f2p + 8.0 * f1p - 8.0 * f1m + f2m) / (12.0 * h);
  detail::check_finite(out);
  return out;
}

template <class F>
Vector fd_gradient(F&& f, const Vector& x, double h = kFdStep) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector e = Vector::Unit(x.size(), i);
    g[i] = fd_directional_derivative(f, x, e, h);
  }
  return g;
}

template <class F>
Vector fd_gradient5(F&& f, const Vector& x, double h = 1e-3) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector e = Vector::Unit(x.size(), i);
    g[i] = fd_directional_derivative5(f, x, e, h);
  }
  return g;
}

// columns: derivative along each coordinate
template <class F>
Matrix fd_jacobian(F&& f, const Vector& x, double h = kFdStep) {
  Vector f0 = f(x);
  Matrix jac(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector e = Vector::Unit(x.size(), i);
    jac.col(i) = fd_directional_derivative(f, x, e, h);
  }
  return jac;
}

}  // namespace degen
