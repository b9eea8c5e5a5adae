#pragma once

#include <functional>
#include <string>
#include <vector>

#include "degenlab/geometry.hpp"

namespace degen {

using Rhs = std::function<Vector(const Vector&)>;  // autonomous systems only

Vector rk4_step(const Rhs& f, const Vector& x, double h);

struct IntegratorConfig {
  std::string method = "rk4";  // rk4 | rk45
  double h = 1e-3;             // rk4 step; for rk45 the sample spacing is h * stride
  double rtol = 1e-10;
  double atol = 1e-12;
  double t_end = 5.0;
  int stride = 100;

  void validate() const;
};

struct Samples {
  std::vector<double> t;
  std::vector<Vector> x;
  bool aborted = false;
  std::string abort_reason;
};

// Exceptions thrown by f other than SingularConfigurationError propagate; a singular
// configuration ends the run and is recorded in the result. post_step, when set, is applied
// after every rk4 step (after every sample interval for rk45).
Samples integrate_samples(const Rhs& f, const Vector& x0, const IntegratorConfig& cfg,
                          const std::function<Vector(const Vector&)>& post_step = {});

// Dormand-Prince 5(4) with embedded error estimate; returns the state at t1.
Vector dopri5(const Rhs& f, const Vector& x0, double t0, double t1, double rtol, double atol,
              double h_init);

}  // namespace degen
