#include "degenlab/geometry.hpp"

namespace degen {

MetricSignature::MetricSignature(int g0, int g1, int g2) : diag_{g0, g1, g2} {
  for (int s : diag_)
    if (s != 1 && s != -1) throw ConfigError("metric entries must be +1 or -1");
}

MetricSignature MetricSignature::from_name(const std::string& name) {
  if (name == "euclidean") return euclidean();
  if (name == "lorentzian") return lorentzian();
  throw ConfigError("unknown metric '" + name + "' (expected euclidean or lorentzian)");
}

std::string MetricSignature::name() const {
  if (*this == euclidean()) return "euclidean";
  if (*this == lorentzian()) return "lorentzian";
  std::string s = "(";
  for (int i = 0; i < 3; ++i) s += (diag_[i] > 0 ? "+" : "-");
  return s + ")";
}

Mat3 MetricSignature::matrix() const {
  return Vec3(diag_[0], diag_[1], diag_[2]).asDiagonal();
}

double metric_dot(const Vec3& u, const Vec3& v, const MetricSignature& g) {
  return g[0] * u[0] * v[0] + g[1] * u[1] * v[1] + g[2] * u[2] * v[2];
}

Vec3 metric_cross(const Vec3& u, const Vec3& v, const MetricSignature& g) {
  return g.lower(u.cross(v));
}

double triple_product(const Vec3& u, const Vec3& v, const Vec3& w) {
  return u.dot(v.cross(w));
}

Mat3 hat(const Vec3& u) {
  Mat3 m;
  m << 0, -u[2], u[1],
       u[2], 0, -u[0],
       -u[1], u[0], 0;
  return m;
}

Vec3 unhat(const Mat3& m) { return {m(2, 1), m(0, 2), m(1, 0)}; }

int numeric_rank(const Matrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > tol * s[0]) ++r;
  return r;
}

LinearSolve solve_or_invert(const Matrix& m, const Vector& rhs, double tol) {
  if (m.rows() != rhs.size()) throw NumericalError("solve_or_invert: shape mismatch");
  LinearSolve out;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (smax > 0 && s[i] > tol * smax) ++r;
  out.rank = r;

  const Matrix& U = svd.matrixU();
  const Matrix& V = svd.matrixV();
  Vector x = Vector::Zero(m.cols());
  for (int i = 0; i < r; ++i) x += V.col(i) * (U.col(i).dot(rhs) / s[i]);
  out.solution = x;
  out.residual = (m * x - rhs).norm();
  out.kernel = V.rightCols(m.cols() - r);
  out.left_kernel = U.rightCols(m.rows() - r);
  return out;
}

Matrix pseudo_inverse(const Matrix& m, double tol) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  Vector inv = Vector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (smax > 0 && s[i] > tol * smax) inv[i] = 1.0 / s[i];
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace degen
