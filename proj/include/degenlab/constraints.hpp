#pragma once

#include <functional>
#include <string>
#include <vector>

#include "degenlab/geometry.hpp"

namespace degen {

// Scalar function of a flat point. For bracket work the layout is (q, qd, p0, p1);
// the same type is reused for functions on P^3Q.
class PhaseFunction {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradFn = std::function<Vector(const Vector&)>;

  PhaseFunction() = default;
  explicit PhaseFunction(ValueFn value, GradFn gradient = nullptr)
      : value_(std::move(value)), grad_(std::move(gradient)) {}

  double operator()(const Vector& z) const { return value_(z); }
  // analytic when supplied, five-point FD otherwise
  Vector gradient(const Vector& z) const;
  Vector fd_gradient_oracle(const Vector& z) const;
  // grad . d, with a single five-point stencil when there is no analytic gradient
  double directional(const Vector& z, const Vector& d) const;
  bool has_analytic_gradient() const { return static_cast<bool>(grad_); }
  bool valid() const { return static_cast<bool>(value_); }

  static PhaseFunction coordinate(int index);
  static PhaseFunction constant(double c);

  friend PhaseFunction operator+(const PhaseFunction& a, const PhaseFunction& b);
  friend PhaseFunction operator*(const PhaseFunction& a, const PhaseFunction& b);
  friend PhaseFunction operator*(double s, const PhaseFunction& a);

 private:
  ValueFn value_;
  GradFn grad_;
};

enum class ConstraintClass { unclassified, first, second };
std::string to_string(ConstraintClass c);

struct ConstraintFunction {
  PhaseFunction fn;
  std::string label;
  int generation = 0;  // 0 = primary
  ConstraintClass cls = ConstraintClass::unclassified;
};

class ConstraintSet;
struct Classification;

class ConstraintSet {
 public:
  void add(PhaseFunction fn, const std::string& label, int generation = 0);
  void append(const ConstraintSet& other);

  int size() const { return static_cast<int>(items_.size()); }
  bool empty() const { return items_.empty(); }
  const ConstraintFunction& operator[](int i) const { return items_[i]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  Vector values(const Vector& z) const;
  // one column per constraint
  Matrix gradients(const Vector& z) const;
  Vector directional(const Vector& z, const Vector& d) const;
  double max_abs(const Vector& z) const;

  ConstraintSet with_generation_at_most(int gen) const;

 private:
  friend Classification classify_constraints(const ConstraintSet&, const std::vector<Vector>&, double);
  std::vector<ConstraintFunction> items_;
};

// Canonical bracket from gradients; pairs (q,p0), (qd,p1), i.e. first half vs second half.
double poisson_bracket_from_gradients(const Vector& gf, const Vector& gg);
double poisson_bracket(const PhaseFunction& f, const PhaseFunction& g, const Vector& z);
// J * grad, the Hamiltonian vector field of a gradient
Vector symplectic_gradient(const Vector& grad);

Matrix constraint_matrix(const ConstraintSet& cs, const Vector& z);

struct Classification {
  ConstraintSet constraints;     // tags written
  std::vector<int> ranks;        // rank of the constraint matrix per sample
  bool consistent = true;        // same rank at every sample
  int first_class = 0;
  int second_class = 0;
  Matrix first_class_combinations;  // kernel basis at the first sample
};
Classification classify_constraints(const ConstraintSet& cs, const std::vector<Vector>& samples,
                                    double tol = 1e-9);

// A(z) u = -b(z) with u the unknowns. For Dirac-Bergmann A = {Phi_b, Phi_a}, b = {Phi_b, H}.
struct LinearConsistency {
  std::function<Matrix(const Vector&)> coefficients;
  std::function<Vector(const Vector&)> inhomogeneity;
};

struct MultiplierSolution {
  Vector solved;   // minimum-norm representative
  int rank = 0;
  Matrix kernel;   // unsolved directions; rank + kernel.cols() = number of unknowns
  std::vector<PhaseFunction> new_constraint_candidates;
  double residual = 0.0;
};
MultiplierSolution solve_consistency(const LinearConsistency& problem, const Vector& z,
                                     double tol = kRankTol);
MultiplierSolution consistency_step(const PhaseFunction& H, const ConstraintSet& cs, const Vector& z,
                                    double tol = kRankTol);

double dirac_bracket(const PhaseFunction& f, const PhaseFunction& g, const ConstraintSet& second_class,
                     const Vector& z);
// z-dot = {z, H}_DB for all coordinates at once
Vector dirac_vector_field(const PhaseFunction& H, const ConstraintSet& second_class, const Vector& z);

// Gauss-Newton pull onto {c = 0}
Vector project_to_surface(const ConstraintSet& cs, const Vector& z, double tol = 1e-12,
                          int max_iter = 60);

struct DiracBergmannOptions {
  int max_generations = 10;
  double genuine_tol = 1e-9;
  double rank_tol = kRankTol;
};

struct DiracBergmannResult {
  ConstraintSet constraints;
  std::vector<int> generation_sizes;
  bool terminated = false;
  std::vector<Vector> surface_points;  // seeds projected onto the final surface
  std::vector<std::vector<double>> spectra;  // candidate singular values per generation
};

DiracBergmannResult dirac_bergmann(const PhaseFunction& H, const ConstraintSet& primaries,
                                   const std::vector<Vector>& seeds,
                                   const DiracBergmannOptions& opt = {});

// Independent combinations of the candidates that do not vanish on the given points.
// Needs more points than candidates to separate them.
// spectrum, when given, receives the singular values of the value matrix.
std::vector<PhaseFunction> genuine_candidates(const std::vector<PhaseFunction>& candidates,
                                              const std::vector<Vector>& surface_points, double tol,
                                              std::vector<double>* spectrum = nullptr);

}  // namespace degen
