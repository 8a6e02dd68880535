#pragma once

#include <cstdint>
#include <random>

#include "greenrelay/alloc.hpp"
#include "greenrelay/model.hpp"

namespace greenrelay::oracle {

/// Random subproblem parameters at unit scale (mask 1, gains log-uniform in
/// [0.05, 20], weights in [0, 4], BS coefficient in [-3, 1], relay cost in
/// [0, 3]).
alloc::DirectParams random_direct(std::mt19937_64& rng);
alloc::CoopParams random_coop(std::mt19937_64& rng);

struct SubproblemCheck {
  int cases = 0;
  int failures = 0;
  int closed_above = 0; // closed form beat the grid by more than tol
  int closed_below = 0; // grid beat the closed form by more than tol
  double worst_gap = 0.0;     // largest |closed form - grid|
  double worst_deficit = 0.0; // largest (grid - error bound) - closed form, <= 0 when sound
};

/// Compares the closed forms against grid search on `cases` random draws.
/// A case fails when the two differ by more than `tol` or the closed form
/// falls below the grid best minus the grid error bound.
SubproblemCheck check_direct(int cases, int resolution, double tol, std::uint64_t seed);
SubproblemCheck check_coop(int cases, int resolution, double tol, std::uint64_t seed);

/// Random N = 2, K = 1, M = 2 slot with unit mask, together with a config
/// whose sum-power limits bind.
struct TinyInstance {
  ValidatedConfig cfg;
  alloc::SlotPrices prices;
  ChannelRealization ch;
};
TinyInstance random_tiny_instance(std::mt19937_64& rng);

struct TinyCheck {
  int cases = 0;
  int above_95 = 0;    // solver >= 0.95 x oracle
  int above_90 = 0;    // solver >= 0.90 x oracle
  double worst_ratio = 1.0;
};

/// Slack on the ratio comparisons for instances whose optimum is zero.
inline constexpr double kTinyAbsSlack = 1e-9;

TinyCheck check_tiny(int cases, int resolution, std::uint64_t seed);

} // namespace greenrelay::oracle
