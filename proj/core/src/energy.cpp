#include "greenrelay/energy.hpp"

#include <algorithm>
#include <sstream>

namespace greenrelay::energy {

namespace {

constexpr double kSlack = 1e-9;

double fit_charge(double frac, double s, double o, double w, double s_max) {
  if (w <= 0.0 || frac <= 0.0) return frac;
  const double room = s_max - (s - o);
  return std::clamp(std::min(frac, room / w), 0.0, 1.0);
}

[[noreturn]] void unsupplied(double demand, double s, const ValidatedConfig& cfg) {
  std::ostringstream os;
  os << "BS demand " << demand << " exceeds j_max + min(s, o_max) = " << cfg->j_max + std::min(s, cfg->o_max);
  throw InvariantViolation(os.str());
}

} // namespace

EnergySplit manage_energy(double p_b_total, double s, double w, const ValidatedConfig& cfg) {
  const double demand = p_b_total + cfg->dp_b;
  const double avail = std::min(s, cfg->o_max);
  if (demand > cfg->j_max + avail + kSlack) unsupplied(demand, s, cfg);

  EnergySplit e;
  if (s >= cfg.theta() - cfg->varphi * cfg->V) {
    e.grid_j = 0.0;
    e.discharge_o = std::min(demand, cfg->o_max);
    e.charge_frac = s < cfg.theta() ? 1.0 : 0.0;
  } else {
    e.grid_j = std::min(demand, cfg->j_max);
    e.discharge_o = std::max(0.0, demand - e.grid_j);
    e.charge_frac = 1.0;
  }
  if (e.discharge_o > avail) {
    // shift whatever the battery cannot give onto the grid
    e.grid_j += e.discharge_o - avail;
    e.discharge_o = avail;
  }
  e.charge_frac = fit_charge(e.charge_frac, s, e.discharge_o, w, cfg->s_max);
  return e;
}

EnergySplit manage_energy_greedy(double p_b_total, double s, double w, const ValidatedConfig& cfg) {
  const double demand = p_b_total + cfg->dp_b;
  const double avail = std::min(s, cfg->o_max);
  if (demand > cfg->j_max + avail + kSlack) unsupplied(demand, s, cfg);
  EnergySplit e;
  e.discharge_o = std::min(demand, avail);
  e.grid_j = demand - e.discharge_o;
  e.charge_frac = fit_charge(1.0, s, e.discharge_o, w, cfg->s_max);
  return e;
}

EnergySplit manage_energy_grid_only(double p_b_total, const ValidatedConfig& cfg) {
  const double demand = p_b_total + cfg->dp_b;
  if (demand > cfg->j_max + kSlack) unsupplied(demand, 0.0, cfg);
  return {demand, 0.0, 0.0};
}

double update_battery(double s, double discharge_o, double charge_frac, double w, const ValidatedConfig& cfg) {
  const double s_max = cfg->s_max;
  if (discharge_o > std::min(s, cfg->o_max) + kSlack) {
    std::ostringstream os;
    os << "discharge " << discharge_o << " exceeds min(s, o_max) = " << std::min(s, cfg->o_max);
    throw InvariantViolation(os.str());
  }
  const double next = s - discharge_o + charge_frac * w;
  const double tol = kSlack * std::max(1.0, s_max);
  if (next < -tol || next > s_max + tol) {
    std::ostringstream os;
    os << "battery level " << next << " outside [0, " << s_max << "]";
    throw InvariantViolation(os.str());
  }
  return std::clamp(next, 0.0, s_max);
}

double grid_power(double grid_j, std::span<const double> relay_dynamic, const ValidatedConfig& cfg) {
  double p = grid_j;
  for (double pi : relay_dynamic) p += pi + cfg->dp_i;
  return p;
}

} // namespace greenrelay::energy
