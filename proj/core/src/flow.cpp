#include "greenrelay/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace greenrelay::flow {

double utility(double x) { return std::log1p(x); }

double utility_derivative_inverse(double y) {
  if (y <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / y - 1.0;
}

double admit(double q_n, double a_n, const ValidatedConfig& cfg) {
  return q_n > cfg.q_max() - cfg->a_max ? 0.0 : a_n;
}

double aux_rate(double u_n, const ValidatedConfig& cfg) {
  const double q_max = cfg.q_max();
  const double a_max = cfg->a_max;
  const double y = (q_max - a_max) * u_n / (q_max * cfg->V * cfg->phi);
  return std::clamp(utility_derivative_inverse(y), 0.0, a_max);
}

SystemState update_queues(const SystemState& state, const SlotDecision& decision) {
  SystemState next = state;
  for (std::size_t n = 0; n < state.q.size(); ++n) {
    next.q[n] = std::max(state.q[n] - decision.rate_mu[n], 0.0) + decision.admit_r[n];
    next.u[n] = std::max(state.u[n] - decision.admit_r[n], 0.0) + decision.aux_x[n];
  }
  next.t = state.t + 1;
  return next;
}

} // namespace greenrelay::flow
