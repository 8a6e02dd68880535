#pragma once

#include "greenrelay/alloc.hpp"
#include "greenrelay/model.hpp"

namespace greenrelay::oracle {

struct GridResult {
  double objective = 0.0;
  double p_b = 0.0;
  double p_r = 0.0;
};

/// Best direct-subproblem value over resolution + 1 evenly spaced powers in
/// [0, mask].
GridResult grid_search_direct(const alloc::DirectParams& prm, int resolution);

/// Best relay-assisted value over a (resolution + 1)^2 grid of
/// (p_b, p_r) in [0, mask]^2, scored with the exact DF rate.
GridResult grid_search_coop(const alloc::CoopParams& prm, int resolution);

/// Worst-case loss of a grid of the given resolution against the true
/// optimum: Lipschitz constant of the objective over the mask box times half
/// the diagonal grid step.
double direct_grid_error(const alloc::DirectParams& prm, int resolution);
double coop_grid_error(const alloc::CoopParams& prm, int resolution);

/// Exhaustive optimum of a whole slot's allocation problem: every
/// assignment of subcarriers to modes and every grid power vector within
/// the mask and the BS and relay sum constraints. Throws
/// std::invalid_argument for instances larger than N = 2, K = 1, M = 3 or
/// a resolution below 1.
double exhaustive_slot(const alloc::SlotPrices& prices, const ChannelRealization& ch, const ValidatedConfig& cfg,
                       int resolution);

} // namespace greenrelay::oracle
