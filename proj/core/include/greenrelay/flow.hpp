#pragma once

#include "greenrelay/model.hpp"

namespace greenrelay::flow {

/// Utility of the queue-based policies, f(x) = ln(1 + x).
double utility(double x);
/// Inverse of f'(x) = 1 / (1 + x).
double utility_derivative_inverse(double y);

/// Admission control: take the whole arrival unless the queue is within
/// a_max of the buffer limit, in which case admit nothing.
double admit(double q_n, double a_n, const ValidatedConfig& cfg);

/// Auxiliary rate X_n in [0, a_max] minimizing
/// ((q_max - a_max) / q_max) u_n X - V phi f(X).
double aux_rate(double u_n, const ValidatedConfig& cfg);

/// Q <- [Q - mu]^+ + R, U <- [U - R]^+ + X, t <- t + 1. The battery level
/// is left alone; see energy::update_battery.
SystemState update_queues(const SystemState& state, const SlotDecision& decision);

} // namespace greenrelay::flow
