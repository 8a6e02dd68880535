#pragma once

#include <span>
#include <vector>

#include "greenrelay/model.hpp"

namespace greenrelay::alloc {

/// Multipliers of the BS and per-relay sum-power constraints.
struct DualState {
  double lambda_b = 0.0;
  std::vector<double> lambda_r;
  int iteration = 0;
};

/// Linear prices of one slot's allocation problem
///
///   max  sum_n rate_weight[n] * mu_n + bs_gain * p_B - relay_cost * sum_i p_i
///
/// where mu_n is spectral efficiency. For the hybrid policy
/// rate_weight[n] = U_n Q_n / q_max * bandwidth, bs_gain = S - theta and
/// relay_cost = V varphi.
struct SlotPrices {
  std::vector<double> rate_weight;
  double bs_gain = 0.0;
  double relay_cost = 0.0;
};

SlotPrices hybrid_prices(const SystemState& state, const ValidatedConfig& cfg);

/// One direct BS-to-user link on one subcarrier, with the BS multiplier
/// already folded into bs_coeff = bs_gain - lambda_b.
struct DirectParams {
  double weight = 0.0;
  double h_bu = 0.0;
  double bs_coeff = 0.0;
  double mask = 0.0;
};

/// One relay-assisted link; relay_cost already includes lambda_i.
struct CoopParams {
  double weight = 0.0;
  double h_br = 0.0;
  double h_bu = 0.0;
  double h_ru = 0.0;
  double bs_coeff = 0.0;
  double relay_cost = 0.0;
  double mask = 0.0;
};

struct SubcarrierSolution {
  double omega = 0.0;
  double p_b = 0.0;
  double p_r = 0.0;
  /// False when the constraint region of a coop case holds no point with
  /// positive power; omega is then meaningless.
  bool feasible = true;
};

double direct_objective(const DirectParams& prm, double p_b);
double coop_objective(const CoopParams& prm, double p_b, double p_r);

/// Water-filling style optimum of the direct subproblem: full mask when the
/// battery term pays for power, otherwise the stationary point clipped to
/// the mask.
SubcarrierSolution direct_subproblem(const DirectParams& prm);

/// Relay-assisted subproblem on the region where the relay hop is the
/// bottleneck (BS-to-relay SNR at least the combined SNR at the user).
///
/// With d = p_b h_bu + p_r h_ru the objective is concave in (p_b, d); the
/// optimum is found by walking the piecewise-linear ridge p_b(d) and
/// stopping at the first stationary point. When
/// bs_coeff + relay_cost h_bu / h_ru >= 0 and spending the mask is
/// worthwhile this is p_b = mask with d = min{q h_ru / relay_cost - 1,
/// mask h_br, mask (h_ru + h_bu)}; otherwise the ridge runs along the
/// balanced first hop p_b = d / h_br.
///
/// Infeasible unless h_br > h_bu.
SubcarrierSolution coop_case1(const CoopParams& prm);

/// Relay-assisted subproblem on the region where the BS-to-relay hop is the
/// bottleneck. Relay power only costs here, so p_r = 0; if h_br > h_bu the
/// region forces p_b = 0.
SubcarrierSolution coop_case2(const CoopParams& prm);

/// Best of the two cases, scored with the exact DF rate.
SubcarrierSolution coop_subproblem(const CoopParams& prm);

struct Candidate {
  Assignment who;
  double omega = 0.0;
};

/// Argmax over one subcarrier's candidates. Non-positive best scores leave
/// the subcarrier unassigned; ties go to Direct before Coop, then lower
/// relay index, then lower user index.
Assignment select_candidate(std::span<const Candidate> candidates);
std::vector<Assignment> assign_subcarriers(const std::vector<std::vector<Candidate>>& scores);

/// Diminishing step step0 / sqrt(k), k >= 1.
double step_size(double step0, int k);

/// Projected subgradient step on the multipliers.
DualState dual_update(const DualState& dual, double bs_power, std::span<const double> relay_power, double step,
                      const ValidatedConfig& cfg);

struct SlotAllocation {
  std::vector<Assignment> assign;
  std::vector<double> p_b;
  std::vector<double> p_r;
  double objective = 0.0;  // allocation objective of the returned powers
  double dual_bound = 0.0; // smallest dual value seen; >= optimum
  int iterations = 0;
  bool converged = false;
  DualState dual;          // last multipliers, for warm starts
  double bs_scale = 1.0;   // recovery factor applied to the kept BS powers
  std::vector<double> relay_scale;
};

/// Objective value of a complete assignment and power vector.
double slot_objective(const SlotPrices& prices, const ChannelRealization& ch, std::span<const Assignment> assign,
                      std::span<const double> p_b, std::span<const double> p_r);

/// Dual decomposition over subcarriers with subgradient multiplier updates.
/// Every iterate is made feasible by proportional scaling of the violated
/// power sums and the best feasible iterate is returned. `warm` seeds the
/// multipliers and receives the final ones.
SlotAllocation solve_slot(const SlotPrices& prices, const ChannelRealization& ch, const ValidatedConfig& cfg,
                          DualState& warm);

/// Cold-started solve with the hybrid-policy prices.
SlotAllocation solve_slot(const SystemState& state, const ChannelRealization& ch, const ValidatedConfig& cfg);

} // namespace greenrelay::alloc
