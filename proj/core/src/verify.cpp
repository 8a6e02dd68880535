#include "greenrelay/verify.hpp"

#include <algorithm>
#include <cmath>

#include "greenrelay/oracle.hpp"

namespace greenrelay::oracle {

namespace {

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

void record(SubproblemCheck& c, double closed, double grid, double bound, double tol) {
  const double gap = std::abs(closed - grid);
  const double deficit = (grid - bound) - closed;
  c.worst_gap = std::max(c.worst_gap, gap);
  c.worst_deficit = std::max(c.worst_deficit, deficit);
  if (closed - grid > tol) ++c.closed_above;
  if (grid - closed > tol) ++c.closed_below;
  if (gap > tol || deficit > 0.0) ++c.failures;
  ++c.cases;
}

} // namespace

alloc::DirectParams random_direct(std::mt19937_64& rng) {
  alloc::DirectParams p;
  p.weight = uniform(rng, 0.0, 4.0);
  p.h_bu = log_uniform(rng, 0.05, 20.0);
  p.bs_coeff = uniform(rng, -3.0, 1.0);
  p.mask = 1.0;
  return p;
}

alloc::CoopParams random_coop(std::mt19937_64& rng) {
  alloc::CoopParams p;
  p.weight = uniform(rng, 0.0, 4.0);
  p.h_br = log_uniform(rng, 0.05, 20.0);
  p.h_bu = log_uniform(rng, 0.05, 20.0);
  p.h_ru = log_uniform(rng, 0.05, 20.0);
  p.bs_coeff = uniform(rng, -3.0, 1.0);
  p.relay_cost = uniform(rng, 0.0, 3.0);
  p.mask = 1.0;
  return p;
}

SubproblemCheck check_direct(int cases, int resolution, double tol, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SubproblemCheck c;
  for (int k = 0; k < cases; ++k) {
    const alloc::DirectParams p = random_direct(rng);
    record(c, alloc::direct_subproblem(p).omega, grid_search_direct(p, resolution).objective,
           direct_grid_error(p, resolution), tol);
  }
  return c;
}

SubproblemCheck check_coop(int cases, int resolution, double tol, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SubproblemCheck c;
  for (int k = 0; k < cases; ++k) {
    const alloc::CoopParams p = random_coop(rng);
    record(c, alloc::coop_subproblem(p).omega, grid_search_coop(p, resolution).objective,
           coop_grid_error(p, resolution), tol);
  }
  return c;
}

TinyInstance random_tiny_instance(std::mt19937_64& rng) {
  SystemConfig c;
  c.num_users = 2;
  c.num_relays = 1;
  c.num_subcarriers = 2;
  c.power_mask = 1.0;
  c.p_b_max = uniform(rng, 0.8, 1.8);
  c.p_i_max = uniform(rng, 0.3, 1.5);
  TinyInstance inst{validate_config(c), {}, ChannelRealization(2, 1, 2)};
  inst.prices.rate_weight = {uniform(rng, 0.0, 4.0), uniform(rng, 0.0, 4.0)};
  inst.prices.bs_gain = uniform(rng, -2.0, 0.5);
  inst.prices.relay_cost = uniform(rng, 0.0, 2.0);
  for (int m = 0; m < 2; ++m) {
    inst.ch.br(0, m) = log_uniform(rng, 0.05, 20.0);
    for (int n = 0; n < 2; ++n) {
      inst.ch.bu(n, m) = log_uniform(rng, 0.05, 20.0);
      inst.ch.ru(0, n, m) = log_uniform(rng, 0.05, 20.0);
    }
  }
  return inst;
}

TinyCheck check_tiny(int cases, int resolution, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TinyCheck c;
  for (int k = 0; k < cases; ++k) {
    const TinyInstance inst = random_tiny_instance(rng);
    alloc::DualState dual;
    const double solver = alloc::solve_slot(inst.prices, inst.ch, inst.cfg, dual).objective;
    const double best = exhaustive_slot(inst.prices, inst.ch, inst.cfg, resolution);
    ++c.cases;
    if (solver >= 0.95 * best - kTinyAbsSlack) ++c.above_95;
    if (solver >= 0.90 * best - kTinyAbsSlack) ++c.above_90;
    if (best > 1e-12) c.worst_ratio = std::min(c.worst_ratio, solver / best);
  }
  return c;
}

} // namespace greenrelay::oracle
