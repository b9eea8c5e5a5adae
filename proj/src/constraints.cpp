#include "degenlab/constraints.hpp"

#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <unordered_map>
#include <limits>

namespace degen {

Vector PhaseFunction::fd_gradient_oracle(const Vector& z) const {
  return fd_gradient5(value_, z);
}

Vector PhaseFunction::gradient(const Vector& z) const {
  if (grad_) return grad_(z);
  return fd_gradient_oracle(z);
}

double PhaseFunction::directional(const Vector& z, const Vector& d) const {
  if (grad_) return grad_(z).dot(d);
  return fd_directional_derivative5(value_, z, d);
}

PhaseFunction PhaseFunction::coordinate(int index) {
  return PhaseFunction([index](const Vector& z) { return z[index]; },
                       [index](const Vector& z) { return Vector(Vector::Unit(z.size(), index)); });
}

PhaseFunction PhaseFunction::constant(double c) {
  return PhaseFunction([c](const Vector&) { return c; },
                       [](const Vector& z) { return Vector(Vector::Zero(z.size())); });
}

PhaseFunction operator+(const PhaseFunction& a, const PhaseFunction& b) {
  return PhaseFunction([a, b](const Vector& z) { return a(z) + b(z); },
                       [a, b](const Vector& z) { return Vector(a.gradient(z) + b.gradient(z)); });
}

PhaseFunction operator*(const PhaseFunction& a, const PhaseFunction& b) {
  return PhaseFunction([a, b](const Vector& z) { return a(z) * b(z); },
                       [a, b](const Vector& z) {
                         return Vector(a(z) * b.gradient(z) + b(z) * a.gradient(z));
                       });
}

PhaseFunction operator*(double s, const PhaseFunction& a) {
  return PhaseFunction([s, a](const Vector& z) { return s * a(z); },
                       [s, a](const Vector& z) { return Vector(s * a.gradient(z)); });
}

std::string to_string(ConstraintClass c) {
  switch (c) {
    case ConstraintClass::first: return "first";
    case ConstraintClass::second: return "second";
    default: return "unclassified";
  }
}

void ConstraintSet::add(PhaseFunction fn, const std::string& label, int generation) {
  for (const auto& c : items_)
    if (c.label == label) throw ConfigError("duplicate constraint label '" + label + "'");
  items_.push_back({std::move(fn), label, generation, ConstraintClass::unclassified});
}

void ConstraintSet::append(const ConstraintSet& other) {
  for (const auto& c : other.items_) add(c.fn, c.label, c.generation);
}

Vector ConstraintSet::values(const Vector& z) const {
  Vector v(size());
  for (int i = 0; i < size(); ++i) v[i] = items_[i].fn(z);
  return v;
}

Matrix ConstraintSet::gradients(const Vector& z) const {
  Matrix g(z.size(), size());
  for (int i = 0; i < size(); ++i) g.col(i) = items_[i].fn.gradient(z);
  return g;
}

Vector ConstraintSet::directional(const Vector& z, const Vector& d) const {
  Vector v(size());
  for (int i = 0; i < size(); ++i) v[i] = items_[i].fn.directional(z, d);
  return v;
}

double ConstraintSet::max_abs(const Vector& z) const {
  return empty() ? 0.0 : values(z).cwiseAbs().maxCoeff();
}

ConstraintSet ConstraintSet::with_generation_at_most(int gen) const {
  ConstraintSet out;
  for (const auto& c : items_)
    if (c.generation <= gen) out.items_.push_back(c);
  return out;
}

double poisson_bracket_from_gradients(const Vector& gf, const Vector& gg) {
  if (gf.size() != gg.size() || gf.size() % 2 != 0)
    throw NumericalError("poisson bracket: gradient sizes must match and be even");
  const Eigen::Index half = gf.size() / 2;
  double s = 0.0;
  for (Eigen::Index i = 0; i < half; ++i) s += gf[i] * gg[i + half] - gf[i + half] * gg[i];
  return s;
}

double poisson_bracket(const PhaseFunction& f, const PhaseFunction& g, const Vector& z) {
  return poisson_bracket_from_gradients(f.gradient(z), g.gradient(z));
}

Vector symplectic_gradient(const Vector& grad) {
  const Eigen::Index half = grad.size() / 2;
  Vector out(grad.size());
  out.head(half) = grad.tail(half);
  out.tail(half) = -grad.head(half);
  return out;
}

namespace {

Matrix bracket_matrix(const Matrix& grads) {
  const int k = static_cast<int>(grads.cols());
  Matrix m = Matrix::Zero(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      m(a, b) = poisson_bracket_from_gradients(grads.col(a), grads.col(b));
      m(b, a) = -m(a, b);
    }
  return m;
}

}  // namespace

Matrix constraint_matrix(const ConstraintSet& cs, const Vector& z) {
  return bracket_matrix(cs.gradients(z));
}

Classification classify_constraints(const ConstraintSet& cs, const std::vector<Vector>& samples,
                                    double tol) {
  if (samples.size() < 10) throw NumericalError("classify_constraints needs at least 10 sample points");
  Classification out;
  const int k = cs.size();
  std::vector<bool> commuting(k, true);
  for (size_t s = 0; s < samples.size(); ++s) {
    Matrix m = constraint_matrix(cs, samples[s]);
    out.ranks.push_back(numeric_rank(m, tol));
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    for (int a = 0; a < k; ++a)
      if (m.row(a).cwiseAbs().maxCoeff() > tol * scale) commuting[a] = false;
    if (s == 0) {
      LinearSolve ls = solve_or_invert(m, Vector::Zero(k), tol);
      out.first_class_combinations = ls.kernel;
    }
  }
  for (int r : out.ranks)
    if (r != out.ranks.front()) out.consistent = false;

  out.constraints = cs;
  for (int a = 0; a < k; ++a) {
    out.constraints.items_[a].cls = commuting[a] ? ConstraintClass::first : ConstraintClass::second;
    if (commuting[a]) ++out.first_class; else ++out.second_class;
  }
  return out;
}

namespace {

// Candidate z -> K(z)^T b(z), K the left kernel of A(z) normalized so that N0^T K = I.
struct CandidateFamily {
  LinearConsistency problem;
  Matrix n0;
  int rank = 0;
  double tol = 0.0;

  // Candidates are evaluated together and nested FD asks for the same points many times over.
  mutable std::mutex mu;
  mutable std::unordered_map<std::string, Vector> cache;

  Matrix normalized_kernel(const Vector& z) const {
    Matrix A = problem.coefficients(z);
    Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullU);
    Matrix N = svd.matrixU().rightCols(A.rows() - rank);
    Matrix c = n0.transpose() * N;
    return N * c.inverse();
  }

  Vector values(const Vector& z) const {
    std::string key(reinterpret_cast<const char*>(z.data()), sizeof(double) * static_cast<size_t>(z.size()));
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
    }
    Vector v = normalized_kernel(z).transpose() * problem.inhomogeneity(z);
    std::lock_guard<std::mutex> lock(mu);
    if (cache.size() > 20000) cache.clear();
    cache.emplace(std::move(key), v);
    return v;
  }
};

}  // namespace

MultiplierSolution solve_consistency(const LinearConsistency& problem, const Vector& z, double tol) {
  Matrix A = problem.coefficients(z);
  Vector b = problem.inhomogeneity(z);
  LinearSolve ls = solve_or_invert(A, -b, tol);
  MultiplierSolution out;
  out.solved = ls.solution;
  out.rank = ls.rank;
  out.kernel = ls.kernel;
  out.residual = ls.residual;

  const int d = static_cast<int>(ls.left_kernel.cols());
  if (d == 0) return out;
  auto fam = std::make_shared<CandidateFamily>();
  fam->problem = problem;
  fam->n0 = ls.left_kernel;
  fam->rank = ls.rank;
  fam->tol = tol;
  for (int c = 0; c < d; ++c) {
    out.new_constraint_candidates.emplace_back([fam, c](const Vector& x) { return fam->values(x)[c]; });
  }
  return out;
}

namespace {

LinearConsistency dirac_problem(const PhaseFunction& H, const ConstraintSet& cs) {
  LinearConsistency p;
  p.coefficients = [cs](const Vector& z) { return constraint_matrix(cs, z); };
  p.inhomogeneity = [cs, H](const Vector& z) {
    Matrix g = cs.gradients(z);
    Vector gh = H.gradient(z);
    Vector b(cs.size());
    for (int i = 0; i < cs.size(); ++i) b[i] = poisson_bracket_from_gradients(g.col(i), gh);
    return b;
  };
  return p;
}

struct SecondClassData {
  Matrix grads;  // columns
  Matrix w;      // antisymmetrized inverse
};

SecondClassData second_class_data(const ConstraintSet& cs, const Vector& z) {
  SecondClassData d;
  d.grads = cs.gradients(z);
  Matrix C = bracket_matrix(d.grads);
  const int k = static_cast<int>(C.rows());
  Eigen::FullPivLU<Matrix> lu(C);
  double det = lu.determinant();
  if (numeric_rank(C) < k || !std::isfinite(det))
    throw SingularMatrixError("second-class constraint matrix is singular", det);
  Matrix w = lu.inverse();
  d.w = 0.5 * (w - w.transpose());
  return d;
}

}  // namespace

MultiplierSolution consistency_step(const PhaseFunction& H, const ConstraintSet& cs, const Vector& z,
                                    double tol) {
  return solve_consistency(dirac_problem(H, cs), z, tol);
}

double dirac_bracket(const PhaseFunction& f, const PhaseFunction& g, const ConstraintSet& second_class,
                     const Vector& z) {
  SecondClassData d = second_class_data(second_class, z);
  Vector gf = f.gradient(z), gg = g.gradient(z);
  const int k = static_cast<int>(d.w.rows());
  Vector F(k), G(k);
  for (int a = 0; a < k; ++a) {
    F[a] = poisson_bracket_from_gradients(gf, d.grads.col(a));
    G[a] = poisson_bracket_from_gradients(d.grads.col(a), gg);
  }
  double corr = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) corr += d.w(a, b) * (F[a] * G[b] - F[b] * G[a]);
  return poisson_bracket_from_gradients(gf, gg) - corr;
}

Vector dirac_vector_field(const PhaseFunction& H, const ConstraintSet& second_class, const Vector& z) {
  SecondClassData d = second_class_data(second_class, z);
  Vector xh = symplectic_gradient(H.gradient(z));
  Matrix jg(z.size(), d.grads.cols());
  for (Eigen::Index a = 0; a < d.grads.cols(); ++a) jg.col(a) = symplectic_gradient(d.grads.col(a));
  // {chi_b, H} = grad chi_b . J grad H
  Vector chb = d.grads.transpose() * xh;
  return xh - jg * (d.w * chb);
}

Vector project_to_surface(const ConstraintSet& cs, const Vector& z, double tol, int max_iter) {
  Vector x = z;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    Vector c = cs.values(x);
    const double r = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
    // FD-built constraints carry a noise floor; stop once Newton no longer gains
    if (r < tol || r > 0.5 * prev) break;
    prev = r;
    Matrix G = cs.gradients(x);
    x -= pseudo_inverse(G.transpose(), 1e-12) * c;
  }
  return x;
}

std::vector<PhaseFunction> genuine_candidates(const std::vector<PhaseFunction>& candidates,
                                              const std::vector<Vector>& surface_points, double tol,
                                              std::vector<double>* spectrum) {
  std::vector<PhaseFunction> out;
  if (spectrum) spectrum->clear();
  if (candidates.empty() || surface_points.empty()) return out;
  // Values on the current surface; only the span that does not vanish there is new.
  const int P = static_cast<int>(surface_points.size());
  const int d = static_cast<int>(candidates.size());
  Matrix V(P, d);
  for (int i = 0; i < P; ++i)
    for (int c = 0; c < d; ++c) V(i, c) = candidates[c](surface_points[i]);
  Eigen::JacobiSVD<Matrix> svd(V, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (spectrum) spectrum->assign(s.data(), s.data() + s.size());
  const double cut = tol * std::max(1.0, s.size() ? s[0] : 0.0);
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s[k] <= cut) break;
    Vector w = svd.matrixV().col(k);
    std::vector<PhaseFunction> parts = candidates;
    out.emplace_back([parts, w](const Vector& z) {
      double v = 0.0;
      for (size_t c = 0; c < parts.size(); ++c)
        if (w[c] != 0.0) v += w[c] * parts[c](z);
      return v;
    });
  }
  return out;
}

DiracBergmannResult dirac_bergmann(const PhaseFunction& H, const ConstraintSet& primaries,
                                   const std::vector<Vector>& seeds, const DiracBergmannOptions& opt) {
  if (seeds.empty()) throw NumericalError("dirac_bergmann needs seed points");
  DiracBergmannResult out;
  out.constraints = primaries;
  out.generation_sizes.push_back(primaries.size());

  for (int gen = 1; gen <= opt.max_generations; ++gen) {
    out.surface_points.clear();
    for (const auto& s : seeds) out.surface_points.push_back(project_to_surface(out.constraints, s));
    // candidates are defined relative to the first surface point's kernel
    MultiplierSolution sol = consistency_step(H, out.constraints, out.surface_points.front(), opt.rank_tol);
    out.spectra.emplace_back();
    auto fresh = genuine_candidates(sol.new_constraint_candidates, out.surface_points, opt.genuine_tol,
                                    &out.spectra.back());
    if (fresh.empty()) {
      out.terminated = true;
      return out;
    }
    int added = 0;
    for (auto& f : fresh) {
      out.constraints.add(f, "gen" + std::to_string(gen) + "_" + std::to_string(added), gen);
      ++added;
    }
    out.generation_sizes.push_back(added);
  }
  out.surface_points.clear();
  for (const auto& s : seeds) out.surface_points.push_back(project_to_surface(out.constraints, s));
  return out;
}

}  // namespace degen
