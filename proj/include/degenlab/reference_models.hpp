#pragma once

#include "degenlab/lagrangian.hpp"

namespace degen {

// L = |qd|. First order, homogeneous of degree one: zero energy, zero Zermelo residuals.
class ArcLengthLagrangian : public SecondOrderLagrangian {
 public:
  explicit ArcLengthLagrangian(int n) : n_(n) {}
  int dim() const override { return n_; }
  std::string name() const override { return "arc_length"; }
  double lagrangian(const Jet2State& j) const override { return j.qd.norm(); }
  Vector dL_dq(const Jet2State& j) const override { return Vector::Zero(j.dim()); }
  Vector dL_dqd(const Jet2State& j) const override;
  Vector dL_dqdd(const Jet2State& j) const override { return Vector::Zero(j.dim()); }

 private:
  int n_;
};

// L = |qdd|^2 / 2, the regular second-order test model.
class FreeAccelerationLagrangian : public SecondOrderLagrangian {
 public:
  explicit FreeAccelerationLagrangian(int n) : n_(n) {}
  int dim() const override { return n_; }
  std::string name() const override { return "free_acceleration"; }
  double lagrangian(const Jet2State& j) const override { return 0.5 * j.qdd.squaredNorm(); }
  Vector dL_dq(const Jet2State& j) const override { return Vector::Zero(j.dim()); }
  Vector dL_dqd(const Jet2State& j) const override { return Vector::Zero(j.dim()); }
  Vector dL_dqdd(const Jet2State& j) const override { return j.qdd; }

 private:
  int n_;
};

}  // namespace degen
