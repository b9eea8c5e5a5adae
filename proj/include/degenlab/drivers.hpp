#pragma once

#include <memory>
#include <string>
#include <vector>

#include "degenlab/constraints.hpp"
#include "degenlab/integrators.hpp"
#include "degenlab/lagrangian.hpp"
#include "degenlab/model_clement.hpp"
#include "degenlab/model_st.hpp"
#include "degenlab/skinner_rusk.hpp"

namespace degen {

enum class Formulation { el, hamiltonian, skinner_rusk };
std::string to_string(Formulation f);
Formulation formulation_from_string(const std::string& s);

// One formulation of one model, ready to integrate. State layouts all start with (q, qd).
struct FormulationSystem {
  Formulation kind = Formulation::el;
  Vector x0;
  Rhs rhs;
  std::vector<std::string> state_names;
  std::vector<std::string> energy_names;
  std::vector<std::string> constraint_names;
  std::function<Vector(const Vector&)> energies;
  std::function<Vec3(const Vector&)> angular_momentum;
  std::function<Vector(const Vector&)> constraints;  // group norms
  std::function<Vector(const Vector&)> phase;        // map to (q, qd, p0, p1)
  std::function<Vector(const Vector&)> project;      // pull back onto the constraint surface
};

class ModelDriver {
 public:
  virtual ~ModelDriver() = default;
  virtual std::string name() const = 0;
  int dim() const { return lagrangian().dim(); }
  virtual const SecondOrderLagrangian& lagrangian() const = 0;

  // Replace the derivatives the field equations fix; free data are kept.
  virtual Jet3State close_jet(const Jet3State& j) const = 0;
  PhasePoint legendre_lift(const Jet3State& j) const;
  PontryaginPoint lift_pontryagin(const Jet3State& j) const;

  virtual FormulationSystem system(Formulation f, const Jet3State& closed) const = 0;
  // expert mode: Hamiltonian flow from a raw phase point, no lift
  virtual FormulationSystem hamiltonian_from_phase(const Vector& z) const = 0;
  virtual ConstraintSet phase_constraints() const = 0;
  virtual ConstraintSet sr_constraints() const = 0;
  virtual std::vector<std::string> base_names() const = 0;
};

class STDriver : public ModelDriver {
 public:
  explicit STDriver(STParams p) : p_(p), model_(p) {}
  std::string name() const override { return "st"; }
  const SecondOrderLagrangian& lagrangian() const override { return model_; }
  Jet3State close_jet(const Jet3State& j) const override;
  FormulationSystem system(Formulation f, const Jet3State& closed) const override;
  FormulationSystem hamiltonian_from_phase(const Vector& z) const override;
  ConstraintSet phase_constraints() const override { return st_primary_constraints(p_); }
  ConstraintSet sr_constraints() const override { return st_sr_constraints(p_); }
  std::vector<std::string> base_names() const override;
  const STParams& params() const { return p_; }

 private:
  STParams p_;
  STModel model_;
};

class ClementDriver : public ModelDriver {
 public:
  explicit ClementDriver(ClementParams p) : p_(p), model_(p) {}
  std::string name() const override { return "clement"; }
  const SecondOrderLagrangian& lagrangian() const override { return model_; }
  // Xdd shifted along X onto the contraction identity, Xddd from the field equations
  Jet3State close_jet(const Jet3State& j) const override;
  FormulationSystem system(Formulation f, const Jet3State& closed) const override;
  FormulationSystem hamiltonian_from_phase(const Vector& z) const override;
  ConstraintSet phase_constraints() const override { return c_constraints(p_); }
  ConstraintSet sr_constraints() const override { return c_sr_constraints(p_); }
  std::vector<std::string> base_names() const override;
  const ClementParams& params() const { return p_; }

 private:
  ClementParams p_;
  ClementModel model_;
};

// names like X1 X2 X3 for each block
std::vector<std::string> vector_names(const std::vector<std::string>& blocks);

}  // namespace degen
