#include "greenrelay/alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace greenrelay::alloc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One piece of the ridge: d in [lo, hi], derivative q / (1 + d) + slope.
struct Segment {
  double lo;
  double hi;
  double slope;
};

// Maximizer of q ln(1 + d) + piecewise-linear concave term along segments
// given in increasing d.
double walk_ridge(double q, std::span<const Segment> segs) {
  for (const Segment& s : segs) {
    const double stat = s.slope < 0.0 ? (q > 0.0 ? q / -s.slope - 1.0 : -kInf) : kInf;
    if (stat < s.hi) return std::max(stat, s.lo);
  }
  return segs.back().hi;
}

int order_key(const Assignment& a) {
  return a.mode == Assignment::Mode::Direct ? 0 : a.mode == Assignment::Mode::Coop ? 1 : 2;
}

bool before(const Assignment& a, const Assignment& b) {
  const int ka = order_key(a);
  const int kb = order_key(b);
  if (ka != kb) return ka < kb;
  if (a.relay != b.relay) return a.relay < b.relay;
  return a.user < b.user;
}

} // namespace

SlotPrices hybrid_prices(const SystemState& state, const ValidatedConfig& cfg) {
  SlotPrices p;
  p.rate_weight.resize(state.q.size());
  for (std::size_t n = 0; n < state.q.size(); ++n)
    p.rate_weight[n] = state.u[n] * state.q[n] / cfg.q_max() * cfg->subcarrier_bandwidth;
  p.bs_gain = state.s - cfg.theta();
  p.relay_cost = cfg->V * cfg->varphi;
  return p;
}

double direct_objective(const DirectParams& prm, double p_b) {
  return prm.weight * std::log2(1.0 + p_b * prm.h_bu) + prm.bs_coeff * p_b;
}

double coop_objective(const CoopParams& prm, double p_b, double p_r) {
  const double snr = std::min(p_b * prm.h_br, p_b * prm.h_bu + p_r * prm.h_ru);
  return 0.5 * prm.weight * std::log2(1.0 + snr) + prm.bs_coeff * p_b - prm.relay_cost * p_r;
}

SubcarrierSolution direct_subproblem(const DirectParams& prm) {
  SubcarrierSolution s;
  if (prm.bs_coeff >= 0.0) {
    s.p_b = prm.mask;
  } else if (prm.h_bu > 0.0 && prm.weight > 0.0) {
    const double p = prm.weight / (-prm.bs_coeff * std::numbers::ln2) - 1.0 / prm.h_bu;
    s.p_b = std::clamp(p, 0.0, prm.mask);
  }
  s.omega = direct_objective(prm, s.p_b);
  return s;
}

SubcarrierSolution coop_case1(const CoopParams& prm) {
  SubcarrierSolution s;
  const double g1 = prm.h_br;
  const double g0 = prm.h_bu;
  const double g2 = prm.h_ru;
  const double P = prm.mask;
  const double a = prm.bs_coeff;
  const double c = prm.relay_cost;
  if (!(g1 > g0)) {
    s.feasible = false;
    return s;
  }
  const double q = prm.weight / (2.0 * std::numbers::ln2);

  if (g2 <= 0.0) {
    // relay useless: only the direct share of the combined signal counts
    if (g0 > 0.0) {
      const Segment seg{0.0, P * g0, a / g0};
      s.p_b = std::min(P, walk_ridge(q, {&seg, 1}) / g0);
    } else {
      s.p_b = a > 0.0 ? P : 0.0;
    }
  } else {
    const double a_eff = a + c * g0 / g2;
    const double d_max = std::min(P * g1, P * (g0 + g2));
    double d = 0.0;
    if (a_eff >= 0.0) {
      // spend BS power first, then top up with the relay
      if (g0 > 0.0) {
        const Segment segs[] = {{0.0, P * g0, a / g0}, {P * g0, d_max, -c / g2}};
        d = walk_ridge(q, segs);
        s.p_b = std::min(P, d / g0);
      } else {
        const Segment seg{0.0, d_max, -c / g2};
        d = walk_ridge(q, {&seg, 1});
        s.p_b = P;
      }
    } else {
      // keep the first hop balanced; past the kink the relay saturates
      const double d_kink = g0 > 0.0 ? g1 * P * g2 / (g1 - g0) : kInf;
      if (d_kink < d_max) {
        const Segment segs[] = {{0.0, d_kink, a_eff / g1 - c / g2}, {d_kink, d_max, a_eff / g0 - c / g2}};
        d = walk_ridge(q, segs);
      } else {
        const Segment seg{0.0, d_max, a_eff / g1 - c / g2};
        d = walk_ridge(q, {&seg, 1});
      }
      s.p_b = d / g1;
      if (g0 > 0.0) s.p_b = std::max(s.p_b, (d - P * g2) / g0);
    }
    s.p_b = std::clamp(s.p_b, 0.0, P);
    s.p_r = std::clamp((d - s.p_b * g0) / g2, 0.0, P);
  }
  s.omega = coop_objective(prm, s.p_b, s.p_r);
  return s;
}

SubcarrierSolution coop_case2(const CoopParams& prm) {
  SubcarrierSolution s;
  if (prm.h_br > prm.h_bu) {
    s.omega = coop_objective(prm, 0.0, 0.0);
    return s;
  }
  if (prm.bs_coeff >= 0.0) {
    s.p_b = prm.mask;
  } else if (prm.h_br > 0.0) {
    const double q = prm.weight / (2.0 * std::numbers::ln2);
    s.p_b = std::clamp(q / -prm.bs_coeff - 1.0 / prm.h_br, 0.0, prm.mask);
  }
  s.omega = coop_objective(prm, s.p_b, 0.0);
  return s;
}

SubcarrierSolution coop_subproblem(const CoopParams& prm) {
  const SubcarrierSolution c1 = coop_case1(prm);
  const SubcarrierSolution c2 = coop_case2(prm);
  if (c1.feasible && c1.omega > c2.omega) return c1;
  return c2;
}

Assignment select_candidate(std::span<const Candidate> candidates) {
  const Candidate* best = nullptr;
  for (const Candidate& c : candidates) {
    if (!best || c.omega > best->omega || (c.omega == best->omega && before(c.who, best->who))) best = &c;
  }
  if (!best || !(best->omega > 0.0)) return Assignment::unassigned();
  return best->who;
}

std::vector<Assignment> assign_subcarriers(const std::vector<std::vector<Candidate>>& scores) {
  std::vector<Assignment> out;
  out.reserve(scores.size());
  for (const auto& row : scores) out.push_back(select_candidate(row));
  return out;
}

double step_size(double step0, int k) { return step0 / std::sqrt(static_cast<double>(std::max(k, 1))); }

DualState dual_update(const DualState& dual, double bs_power, std::span<const double> relay_power, double step,
                      const ValidatedConfig& cfg) {
  DualState next;
  next.iteration = dual.iteration + 1;
  next.lambda_b = std::max(0.0, dual.lambda_b + step * (bs_power - cfg->p_b_max));
  next.lambda_r.resize(relay_power.size());
  for (std::size_t i = 0; i < relay_power.size(); ++i) {
    const double li = i < dual.lambda_r.size() ? dual.lambda_r[i] : 0.0;
    next.lambda_r[i] = std::max(0.0, li + step * (relay_power[i] - cfg->p_i_max));
  }
  return next;
}

double slot_objective(const SlotPrices& prices, const ChannelRealization& ch, std::span<const Assignment> assign,
                      std::span<const double> p_b, std::span<const double> p_r) {
  double v = 0.0;
  for (std::size_t m = 0; m < assign.size(); ++m) {
    const Assignment& a = assign[m];
    const int mi = static_cast<int>(m);
    if (a.mode == Assignment::Mode::Direct) {
      v += prices.rate_weight[a.user] * std::log2(1.0 + p_b[m] * ch.bu(a.user, mi));
      v += prices.bs_gain * p_b[m];
    } else if (a.mode == Assignment::Mode::Coop) {
      const double snr = std::min(p_b[m] * ch.br(a.relay, mi), p_b[m] * ch.bu(a.user, mi) + p_r[m] * ch.ru(a.relay, a.user, mi));
      v += 0.5 * prices.rate_weight[a.user] * std::log2(1.0 + snr);
      v += prices.bs_gain * p_b[m] - prices.relay_cost * p_r[m];
    }
  }
  return v;
}

SlotAllocation solve_slot(const SlotPrices& prices, const ChannelRealization& ch, const ValidatedConfig& cfg,
                          DualState& warm) {
  const int N = ch.users();
  const int K = ch.relays();
  const int M = ch.subcarriers();
  const double P = cfg->power_mask;

  SlotAllocation best;
  best.assign.assign(M, Assignment::unassigned());
  best.p_b.assign(M, 0.0);
  best.p_r.assign(M, 0.0);
  best.relay_scale.assign(K, 1.0);
  best.dual_bound = kInf;

  DualState dual = warm;
  dual.lambda_r.resize(K, 0.0);
  dual.iteration = 0;

  std::vector<Assignment> assign(M);
  std::vector<double> p_b(M), p_r(M), scaled_b(M), scaled_r(M);
  std::vector<double> relay_sum(K);
  double step0 = 0.0;

  for (int k = 1; k <= cfg->dual_max_iters; ++k) {
    double dual_value = dual.lambda_b * cfg->p_b_max;
    for (int i = 0; i < K; ++i) dual_value += dual.lambda_r[i] * cfg->p_i_max;
    const double bs_coeff = prices.bs_gain - dual.lambda_b;

    for (int m = 0; m < M; ++m) {
      Assignment who = Assignment::unassigned();
      double omega = 0.0, pb = 0.0, pr = 0.0;
      for (int n = 0; n < N; ++n) {
        const SubcarrierSolution s = direct_subproblem({prices.rate_weight[n], ch.bu(n, m), bs_coeff, P});
        if (s.omega > omega) {
          omega = s.omega;
          who = Assignment::direct(n);
          pb = s.p_b;
          pr = 0.0;
        }
      }
      for (int i = 0; i < K; ++i) {
        const double cost = prices.relay_cost + dual.lambda_r[i];
        for (int n = 0; n < N; ++n) {
          const SubcarrierSolution s =
              coop_subproblem({prices.rate_weight[n], ch.br(i, m), ch.bu(n, m), ch.ru(i, n, m), bs_coeff, cost, P});
          if (s.omega > omega) {
            omega = s.omega;
            who = Assignment::coop(i, n);
            pb = s.p_b;
            pr = s.p_r;
          }
        }
      }
      assign[m] = who;
      p_b[m] = pb;
      p_r[m] = pr;
      dual_value += omega;
    }
    best.dual_bound = std::min(best.dual_bound, dual_value);

    double bs_sum = 0.0;
    std::fill(relay_sum.begin(), relay_sum.end(), 0.0);
    for (int m = 0; m < M; ++m) {
      bs_sum += p_b[m];
      if (assign[m].mode == Assignment::Mode::Coop) relay_sum[assign[m].relay] += p_r[m];
    }

    // primal recovery by proportional scaling
    const double bs_scale = bs_sum > cfg->p_b_max ? cfg->p_b_max / bs_sum : 1.0;
    std::vector<double> relay_scale(K, 1.0);
    for (int i = 0; i < K; ++i)
      if (relay_sum[i] > cfg->p_i_max) relay_scale[i] = cfg->p_i_max / relay_sum[i];
    for (int m = 0; m < M; ++m) {
      scaled_b[m] = p_b[m] * bs_scale;
      scaled_r[m] = assign[m].mode == Assignment::Mode::Coop ? p_r[m] * relay_scale[assign[m].relay] : 0.0;
    }
    const double value = slot_objective(prices, ch, assign, scaled_b, scaled_r);
    if (value > best.objective) {
      best.objective = value;
      best.assign = assign;
      best.p_b = scaled_b;
      best.p_r = scaled_r;
      best.bs_scale = bs_scale;
      best.relay_scale = relay_scale;
    }

    const double g_b = bs_sum - cfg->p_b_max;
    double g_norm = g_b * g_b;
    for (int i = 0; i < K; ++i) g_norm += (relay_sum[i] - cfg->p_i_max) * (relay_sum[i] - cfg->p_i_max);
    if (k == 1 && g_norm > 0.0) step0 = cfg->dual_step0 * std::max(0.0, dual_value - best.objective) / g_norm;

    const DualState next = dual_update(dual, bs_sum, relay_sum, step_size(step0, k), cfg);
    bool settled = std::abs(next.lambda_b - dual.lambda_b) <=
                   cfg->dual_tol * std::max({dual.lambda_b, next.lambda_b, 1e-9});
    for (int i = 0; i < K && settled; ++i)
      settled = std::abs(next.lambda_r[i] - dual.lambda_r[i]) <=
                cfg->dual_tol * std::max({dual.lambda_r[i], next.lambda_r[i], 1e-9});
    dual = next;
    best.iterations = k;
    if (settled) {
      best.converged = true;
      break;
    }
  }
  dual.iteration = best.iterations;
  best.dual = dual;
  warm = dual;
  if (!std::isfinite(best.dual_bound)) best.dual_bound = best.objective;
  return best;
}

SlotAllocation solve_slot(const SystemState& state, const ChannelRealization& ch, const ValidatedConfig& cfg) {
  DualState dual;
  return solve_slot(hybrid_prices(state, cfg), ch, cfg, dual);
}

} // namespace greenrelay::alloc
