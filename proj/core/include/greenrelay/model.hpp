#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace greenrelay {

/// Raised when a configuration violates one of the standing feasibility
/// assumptions. The message names the failed inequality.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised by the simulator when a per-slot invariant (queue bound, battery
/// range, power constraints, supply identity) does not hold.
class InvariantViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RenewableState {
  double value = 0.0;        // energy units per slot
  double probability = 0.0;
  bool operator==(const RenewableState&) const = default;
};

enum class UtilityKind { Log1p, Linear };

/// All physical, economic and algorithmic parameters of one scenario.
///
/// Units: queues in bits, energy in "energy per slot" (slot duration is 1,
/// so watts and energy/slot coincide), channel gains are normalized by
/// gamma_gap * noise_power.
struct SystemConfig {
  // topology
  int num_users = 8;
  int num_relays = 4;
  int num_subcarriers = 128;
  double cell_radius = 2000.0;
  double pathloss_exponent = 4.0;
  double noise_power = 1e-10;
  double gamma_gap = 1.0;
  /// Bits carried per slot per unit of spectral efficiency on one subcarrier.
  double subcarrier_bandwidth = 1.0;

  // power
  double p_b_max = 20.0;
  double dp_b = 194.24;
  double p_i_max = 10.0;
  double dp_i = 40.0;
  double power_mask = 0.2;

  // storage and supply
  double s_max = 3000.0;
  double o_max = 321.36;
  double j_max = 321.36;
  double s_init = 0.0;
  std::vector<RenewableState> renewable_states{{195.0, 0.6}, {100.0, 0.4}};

  // traffic
  double arrival_rate = 8.0;        // packets per slot
  double mean_packet_size = 5000.0; // bits
  double buffer_packets = 10.0;
  double a_max = 45000.0;           // bits per slot

  // control
  double phi = 16.0;
  double varphi = 0.5;
  double V = 100.0;

  // dual solver
  double dual_step0 = 1.0;
  int dual_max_iters = 30;
  double dual_tol = 1e-3;

  // measurement error on the channel seen by the allocator (0.3 = 30 %)
  double channel_uncertainty = 0.0;
  /// Utility of the per-slot NUM baseline. The queue-based policies always
  /// use ln(1 + x).
  UtilityKind num_utility = UtilityKind::Log1p;

  bool operator==(const SystemConfig&) const = default;
};

/// A SystemConfig that passed validate_config, with derived fields filled.
class ValidatedConfig {
public:
  const SystemConfig& raw() const noexcept { return cfg_; }
  const SystemConfig* operator->() const noexcept { return &cfg_; }

  double theta() const noexcept { return theta_; }
  double q_max() const noexcept { return q_max_; }
  double w_max() const noexcept { return w_max_; }

  int users() const noexcept { return cfg_.num_users; }
  int relays() const noexcept { return cfg_.num_relays; }
  int subcarriers() const noexcept { return cfg_.num_subcarriers; }

  bool operator==(const ValidatedConfig&) const = default;

private:
  friend ValidatedConfig validate_config(const SystemConfig&);
  SystemConfig cfg_;
  double theta_ = 0.0;
  double q_max_ = 0.0;
  double w_max_ = 0.0;
};

/// Checks every standing assumption and fills theta, q_max and w_max.
/// Throws ConfigError naming the violated inequality.
ValidatedConfig validate_config(const SystemConfig& cfg);
inline ValidatedConfig validate_config(const ValidatedConfig& cfg) { return validate_config(cfg.raw()); }

/// Upper end of the feasible V range, (s_max - w_max - o_max) / varphi.
double max_feasible_v(const SystemConfig& cfg);

/// The reference scenario: 8 users, 4 relays, 128 subcarriers over 10 MHz,
/// hybrid-powered base station with a 3000-unit battery and two-state solar.
SystemConfig reference_scenario();

/// The same scenario with data counted in units of subcarrier_bandwidth
/// bits, so that one unit of spectral efficiency moves one unit of data and
/// subcarrier_bandwidth becomes 1. Packet size and a_max are rescaled.
SystemConfig in_bandwidth_units(const SystemConfig& cfg);

/// Normalized channel gains for one slot, stored flat.
class ChannelRealization {
public:
  ChannelRealization() = default;
  ChannelRealization(int users, int relays, int subcarriers);

  int users() const noexcept { return users_; }
  int relays() const noexcept { return relays_; }
  int subcarriers() const noexcept { return subcarriers_; }

  double& bu(int n, int m) { return h_bu_[idx_bu(n, m)]; }
  double bu(int n, int m) const { return h_bu_[idx_bu(n, m)]; }
  double& br(int i, int m) { return h_br_[idx_br(i, m)]; }
  double br(int i, int m) const { return h_br_[idx_br(i, m)]; }
  double& ru(int i, int n, int m) { return h_ru_[idx_ru(i, n, m)]; }
  double ru(int i, int n, int m) const { return h_ru_[idx_ru(i, n, m)]; }

  /// True when every gain is finite and non-negative.
  bool valid() const;

  bool operator==(const ChannelRealization&) const = default;

private:
  std::size_t idx_bu(int n, int m) const { return static_cast<std::size_t>(n) * subcarriers_ + m; }
  std::size_t idx_br(int i, int m) const { return static_cast<std::size_t>(i) * subcarriers_ + m; }
  std::size_t idx_ru(int i, int n, int m) const {
    return (static_cast<std::size_t>(i) * users_ + n) * subcarriers_ + m;
  }

  int users_ = 0;
  int relays_ = 0;
  int subcarriers_ = 0;
  std::vector<double> h_bu_;
  std::vector<double> h_br_;
  std::vector<double> h_ru_;
};

struct SystemState {
  std::vector<double> q; // data queues, bits
  std::vector<double> u; // virtual queues, bits
  double s = 0.0;        // battery level
  long t = 0;

  static SystemState initial(const ValidatedConfig& cfg);
  bool operator==(const SystemState&) const = default;
};

/// Per-subcarrier transmission mode.
struct Assignment {
  enum class Mode { Unassigned, Direct, Coop };
  Mode mode = Mode::Unassigned;
  int relay = -1;
  int user = -1;

  static Assignment unassigned() { return {}; }
  static Assignment direct(int n) { return {Mode::Direct, -1, n}; }
  static Assignment coop(int i, int n) { return {Mode::Coop, i, n}; }

  bool operator==(const Assignment&) const = default;
};

/// Everything decided in one slot. Relay powers are stored per subcarrier;
/// the relay and user they belong to are given by assign[m].
struct SlotDecision {
  std::vector<double> admit_r;
  std::vector<double> aux_x;
  std::vector<Assignment> assign;
  std::vector<double> p_b;
  std::vector<double> p_r;
  std::vector<double> rate_mu;
  double grid_j = 0.0;
  double discharge_o = 0.0;
  double charge_frac = 0.0;
  double harvested = 0.0;

  static SlotDecision empty(int users, int subcarriers);

  double bs_power() const;
  /// Dynamic transmit power of every relay, indexed by relay.
  std::vector<double> relay_powers(int relays) const;
};

struct TraceRecord {
  long t = 0;
  SystemState state; // at the start of the slot
  SlotDecision decision;
  double grid_power = 0.0;
  double utility_term = 0.0;   // phi * sum f(X_n)
  double energy_term = 0.0;    // varphi * P(t)
  double slot_objective = 0.0; // allocation objective attained
  int dual_iters = 0;
  double lambda_b = 0.0;
  double recovery_scale = 1.0;
  double lyapunov = 0.0;
};

} // namespace greenrelay
