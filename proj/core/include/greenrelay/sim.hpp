#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "greenrelay/env.hpp"
#include "greenrelay/model.hpp"

namespace greenrelay::sim {

enum class Policy {
  Free,          // queue-aware flow control, dual allocation, threshold battery
  NoRelayHybrid, // Free without relays
  OnGridOnly,    // Free allocation, battery never used
  PerSlotNum,    // per-slot utility maximization, greedy battery, drop-tail
};

std::string_view policy_name(Policy p);
/// Accepts free, no-relay, on-grid, per-slot-num. Throws std::invalid_argument.
Policy parse_policy(std::string_view name);

struct Trace {
  Policy policy = Policy::Free;
  std::uint64_t seed = 0;
  env::Geometry geometry;
  int relays = 0; // relays actually used by the policy
  std::vector<TraceRecord> records;
  SystemState final_state;
};

/// Simulates `slots` slots from the initial state. Every slot checks the
/// queue bound, battery range, subcarrier exclusivity, mask and sum-power
/// limits and the supply identity, throwing InvariantViolation on the first
/// failure.
Trace run(const ValidatedConfig& cfg, Policy policy, std::uint64_t seed, long slots);

/// L = 1/2 sum_n [(q_max - a_max) / q_max U_n^2 + U_n Q_n^2 / q_max] + 1/2 (S - theta)^2
double lyapunov(const SystemState& state, const ValidatedConfig& cfg);

/// Constant of the drift bound,
/// N a_max q_max / 2 + N (q_max - a_max) / q_max a_max^2 + (w_max^2 + o_max^2) / 2.
double drift_constant(const ValidatedConfig& cfg);

/// Jain's index (sum x)^2 / (N sum x^2); 1 when every entry is zero.
double fairness_index(std::span<const double> x);

struct Summary {
  long slots = 0;
  long window = 0; // trailing slots averaged for rates and power
  std::vector<double> avg_admitted;
  std::vector<double> avg_served;
  double throughput = 0.0; // sum of avg_admitted
  double avg_grid_power = 0.0;
  double objective = 0.0; // phi sum ln(1 + avg_admitted) - varphi avg_grid_power
  double fairness = 0.0;
  double max_queue = 0.0;
  double max_virtual_queue = 0.0;
  double battery_min = 0.0;
  double battery_max = 0.0;
  double xi = 0.0;
  double xi_over_v = 0.0;
  double energy_balance = 0.0; // |mean discharge - mean stored harvest| over the whole run
  double mean_dual_iters = 0.0;
};

/// Averages over the trailing `window_fraction` of slots (extremes and the
/// energy balance use the whole run). Throws std::invalid_argument on an
/// empty trace.
Summary metrics(const Trace& trace, const ValidatedConfig& cfg, double window_fraction = 0.5);

/// Element-wise mean of summaries from the same configuration. Extremes
/// (queue maxima, battery range) and the energy balance keep the worst run.
Summary average(std::span<const Summary> runs);

enum class Axis { V, Varphi };
std::string_view axis_name(Axis a);
Axis parse_axis(std::string_view name);

struct SweepRow {
  double value = 0.0;
  Summary mean; // over the seeds that completed
  int completed = 0;
  std::vector<std::string> errors;
};

/// One row per axis value. Each (value, seed) run uses the seed as its
/// master seed, so rows are paired across values. Failed runs are recorded
/// in the row and skipped. `threads` <= 1 runs sequentially; the result
/// does not depend on it.
std::vector<SweepRow> sweep(const SystemConfig& base, Policy policy, Axis axis, std::span<const double> values,
                            std::span<const std::uint64_t> seeds, long slots, int threads = 1);

void write_trace_csv(std::ostream& os, const Trace& trace, const ValidatedConfig& cfg);
void write_summary(std::ostream& os, const Summary& s);
void write_sweep_csv(std::ostream& os, Axis axis, std::span<const SweepRow> rows);
void write_geometry_csv(std::ostream& os, const env::Geometry& geom);

/// Shortest round-trip decimal form.
std::string format_double(double v);

} // namespace greenrelay::sim
