#include "degenlab/integrators.hpp"

#include <cmath>

namespace degen {

Vector rk4_step(const Rhs& f, const Vector& x, double h) {
  Vector k1 = f(x);
  Vector k2 = f(x + 0.5 * h * k1);
  Vector k3 = f(x + 0.5 * h * k2);
  Vector k4 = f(x + h * k3);
  Vector out = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!out.allFinite()) throw NumericalError("rk4 step produced a non-finite state");
  return out;
}

void IntegratorConfig::validate() const {
  if (method != "rk4" && method != "rk45") throw ConfigError("integrator method must be rk4 or rk45");
  if (!(h > 0)) throw ConfigError("integrator step h must be positive");
  if (!(t_end > 0)) throw ConfigError("t_end must be positive");
  if (stride < 1) throw ConfigError("stride must be >= 1");
  if (method == "rk45" && (!(rtol > 0) || !(atol > 0))) throw ConfigError("rk45 tolerances must be positive");
}

Vector dopri5(const Rhs& f, const Vector& x0, double t0, double t1, double rtol, double atol,
              double h_init) {
  // autonomous, so the c_i nodes never appear
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                      b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                      e6 = 22.0 / 525, e7 = -1.0 / 40;

  Vector x = x0;
  double t = t0;
  double h = std::min(h_init, t1 - t0);
  Vector k1 = f(x);
  int steps = 0;
  while (t < t1) {
    if (++steps > 10000000) throw NumericalError("rk45: too many steps");
    if (t + h > t1) h = t1 - t;
    Vector k2 = f(x + h * a21 * k1);
    Vector k3 = f(x + h * (a31 * k1 + a32 * k2));
    Vector k4 = f(x + h * (a41 * k1 + a42 * k2 + a43 * k3));
    Vector k5 = f(x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    Vector k6 = f(x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Vector xn = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Vector k7 = f(xn);
    Vector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double en = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double sc = atol + rtol * std::max(std::abs(x[i]), std::abs(xn[i]));
      en += (err[i] / sc) * (err[i] / sc);
    }
    en = std::sqrt(en / static_cast<double>(x.size()));
    if (!std::isfinite(en)) throw NumericalError("rk45 step produced a non-finite state");
    if (en <= 1.0) {
      t += h;
      x = xn;
      k1 = k7;  // FSAL
    }
    double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    h *= fac;
    if (h < 1e-14 * std::max(1.0, std::abs(t))) throw NumericalError("rk45: step size underflow");
  }
  return x;
}

Samples integrate_samples(const Rhs& f, const Vector& x0, const IntegratorConfig& cfg,
                          const std::function<Vector(const Vector&)>& post_step) {
  cfg.validate();
  Samples s;
  s.t.push_back(0.0);
  s.x.push_back(x0);
  try {
    if (cfg.method == "rk4") {
      const long n = std::lround(cfg.t_end / cfg.h);
      Vector x = x0;
      for (long k = 1; k <= n; ++k) {
        x = rk4_step(f, x, cfg.h);
        if (post_step) x = post_step(x);
        if (k % cfg.stride == 0 || k == n) {
          s.t.push_back(k * cfg.h);
          s.x.push_back(x);
        }
      }
    } else {
      const double dt = cfg.h * cfg.stride;
      const long n = std::lround(std::ceil(cfg.t_end / dt - 1e-12));
      Vector x = x0;
      double t = 0.0;
      for (long k = 1; k <= n; ++k) {
        double t1 = std::min(cfg.t_end, k * dt);
        x = dopri5(f, x, t, t1, cfg.rtol, cfg.atol, cfg.h);
        if (post_step) x = post_step(x);
        t = t1;
        s.t.push_back(t);
        s.x.push_back(x);
      }
    }
  } catch (const SingularConfigurationError& e) {
    s.aborted = true;
    s.abort_reason = e.what();
  }
  return s;
}

}  // namespace degen
