#include "degenlab/reference_models.hpp"

namespace degen {

Vector ArcLengthLagrangian::dL_dqd(const Jet2State& j) const {
  double s = j.qd.norm();
  if (s == 0.0) throw SingularConfigurationError("arc-length Lagrangian is not differentiable at qd = 0", s);
  return j.qd / s;
}

}  // namespace degen
