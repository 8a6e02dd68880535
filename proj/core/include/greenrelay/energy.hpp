#pragma once

#include <span>

#include "greenrelay/model.hpp"

namespace greenrelay::energy {

struct EnergySplit {
  double grid_j = 0.0;      // drawn from the grid for the BS
  double discharge_o = 0.0; // drawn from the battery
  double charge_frac = 0.0; // share of the harvest stored
};

/// Threshold battery policy of the hybrid base station. With demand
/// D = p_b_total + dp_b: above s = theta - varphi V the BS runs from the
/// battery and charges only while s < theta; below it the BS runs from the
/// grid and always charges. Discharge never exceeds min(s, o_max) and the
/// stored harvest never overflows s_max.
///
/// Throws InvariantViolation when the demand cannot be supplied at all.
EnergySplit manage_energy(double p_b_total, double s, double w, const ValidatedConfig& cfg);

/// Battery-first heuristic: spend stored energy before touching the grid,
/// store every harvested unit that fits.
EnergySplit manage_energy_greedy(double p_b_total, double s, double w, const ValidatedConfig& cfg);

/// Battery unused; the grid supplies the whole demand.
EnergySplit manage_energy_grid_only(double p_b_total, const ValidatedConfig& cfg);

/// s' = s - O + delta w. Throws InvariantViolation if s' leaves [0, s_max].
double update_battery(double s, double discharge_o, double charge_frac, double w, const ValidatedConfig& cfg);

/// Total grid draw: BS grid share plus every deployed relay's dynamic and
/// static power.
double grid_power(double grid_j, std::span<const double> relay_dynamic, const ValidatedConfig& cfg);

} // namespace greenrelay::energy
