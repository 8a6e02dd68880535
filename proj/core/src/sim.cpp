#include "greenrelay/sim.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "greenrelay/alloc.hpp"
#include "greenrelay/energy.hpp"
#include "greenrelay/flow.hpp"
#include "greenrelay/phy.hpp"

namespace greenrelay::sim {

namespace {

constexpr double kRel = 1e-9;

[[noreturn]] void violated(long t, const std::string& what) {
  std::ostringstream os;
  os << "invariant violated at slot " << t << ": " << what;
  throw InvariantViolation(os.str());
}

ValidatedConfig without_relays(const ValidatedConfig& cfg) {
  SystemConfig c = cfg.raw();
  c.num_relays = 0;
  return validate_config(c);
}

ChannelRealization drop_relays(const ChannelRealization& ch) {
  ChannelRealization out(ch.users(), 0, ch.subcarriers());
  for (int n = 0; n < ch.users(); ++n)
    for (int m = 0; m < ch.subcarriers(); ++m) out.bu(n, m) = ch.bu(n, m);
  return out;
}

double utility_slope(UtilityKind kind, double x) { return kind == UtilityKind::Linear ? 1.0 : 1.0 / (1.0 + x); }

// Rate weights of the per-slot baseline, refined by damped fixed-point
// iteration on the anticipated rate for concave utilities.
alloc::SlotAllocation solve_per_slot(const SystemState& state, const ChannelRealization& ch, const ValidatedConfig& cfg,
                                     alloc::DualState& dual) {
  const int N = ch.users();
  const double b = cfg->subcarrier_bandwidth;
  alloc::SlotPrices prices;
  prices.rate_weight.assign(N, 0.0);
  prices.bs_gain = state.s >= cfg->p_b_max + cfg->dp_b ? 0.0 : -cfg->varphi;
  prices.relay_cost = cfg->varphi;

  const UtilityKind kind = cfg->num_utility;
  const int rounds = kind == UtilityKind::Linear ? 1 : 4;
  std::vector<double> mu_hat(N, 0.0);
  alloc::SlotAllocation result;
  for (int r = 0; r < rounds; ++r) {
    for (int n = 0; n < N; ++n) prices.rate_weight[n] = cfg->phi * b * utility_slope(kind, mu_hat[n]);
    result = alloc::solve_slot(prices, ch, cfg, dual);
    SlotDecision d;
    d.assign = result.assign;
    d.p_b = result.p_b;
    d.p_r = result.p_r;
    const std::vector<double> se = phy::user_rates(d, ch);
    for (int n = 0; n < N; ++n) mu_hat[n] = 0.5 * (mu_hat[n] + b * se[n]);
  }
  return result;
}

void check_decision(long t, const SlotDecision& d, int relays, const ValidatedConfig& cfg) {
  const double mask = cfg->power_mask * (1.0 + kRel);
  for (std::size_t m = 0; m < d.assign.size(); ++m) {
    const Assignment& a = d.assign[m];
    if (d.p_b[m] < 0.0 || d.p_b[m] > mask || d.p_r[m] < 0.0 || d.p_r[m] > mask)
      violated(t, "power mask on subcarrier " + std::to_string(m));
    switch (a.mode) {
    case Assignment::Mode::Unassigned:
      if (d.p_b[m] != 0.0 || d.p_r[m] != 0.0) violated(t, "power on unassigned subcarrier " + std::to_string(m));
      break;
    case Assignment::Mode::Direct:
      if (a.user < 0 || a.user >= cfg.users() || d.p_r[m] != 0.0)
        violated(t, "exclusivity on subcarrier " + std::to_string(m));
      break;
    case Assignment::Mode::Coop:
      if (a.user < 0 || a.user >= cfg.users() || a.relay < 0 || a.relay >= relays)
        violated(t, "exclusivity on subcarrier " + std::to_string(m));
      break;
    }
  }
  if (d.bs_power() > cfg->p_b_max * (1.0 + kRel)) violated(t, "BS sum power exceeds p_b_max");
  for (double p : d.relay_powers(relays))
    if (p > cfg->p_i_max * (1.0 + kRel)) violated(t, "relay sum power exceeds p_i_max");
}

void check_supply(long t, const SlotDecision& d, double s, const ValidatedConfig& cfg) {
  const double demand = d.bs_power() + cfg->dp_b;
  if (std::abs(d.grid_j + d.discharge_o - demand) > kRel * std::max(1.0, demand))
    violated(t, "supply identity J + O = p_B + dp_B");
  if (d.grid_j < 0.0 || d.grid_j > cfg->j_max * (1.0 + kRel)) violated(t, "grid draw outside [0, j_max]");
  if (d.discharge_o < 0.0 || d.discharge_o > std::min(s, cfg->o_max) + kRel * std::max(1.0, cfg->s_max))
    violated(t, "discharge outside [0, min(S, o_max)]");
}

} // namespace

std::string_view policy_name(Policy p) {
  switch (p) {
  case Policy::Free:
    return "free";
  case Policy::NoRelayHybrid:
    return "no-relay";
  case Policy::OnGridOnly:
    return "on-grid";
  case Policy::PerSlotNum:
    return "per-slot-num";
  }
  return "?";
}

Policy parse_policy(std::string_view name) {
  for (Policy p : {Policy::Free, Policy::NoRelayHybrid, Policy::OnGridOnly, Policy::PerSlotNum})
    if (policy_name(p) == name) return p;
  throw std::invalid_argument("unknown policy '" + std::string(name) +
                              "' (expected free, no-relay, on-grid or per-slot-num)");
}

double lyapunov(const SystemState& state, const ValidatedConfig& cfg) {
  const double q_max = cfg.q_max();
  const double ratio = (q_max - cfg->a_max) / q_max;
  double l = 0.0;
  for (std::size_t n = 0; n < state.q.size(); ++n)
    l += ratio * state.u[n] * state.u[n] + state.u[n] * state.q[n] * state.q[n] / q_max;
  const double z = state.s - cfg.theta();
  return 0.5 * (l + z * z);
}

double drift_constant(const ValidatedConfig& cfg) {
  const double n = cfg.users();
  const double a = cfg->a_max;
  const double q = cfg.q_max();
  const double w = cfg.w_max();
  const double o = cfg->o_max;
  return 0.5 * n * a * q + n * (q - a) / q * a * a + 0.5 * (w * w + o * o);
}

double fairness_index(std::span<const double> x) {
  double sum = 0.0, sq = 0.0;
  for (double v : x) {
    sum += v;
    sq += v * v;
  }
  if (sq == 0.0) return 1.0;
  return sum * sum / (static_cast<double>(x.size()) * sq);
}

Trace run(const ValidatedConfig& cfg, Policy policy, std::uint64_t seed, long slots) {
  if (slots < 0) throw std::invalid_argument("slots must be non-negative");
  env::RngStreams rng(seed);
  Trace trace;
  trace.policy = policy;
  trace.seed = seed;
  trace.geometry = env::build_geometry(cfg, rng.geometry());

  const bool no_relay = policy == Policy::NoRelayHybrid;
  const ValidatedConfig alloc_cfg = no_relay ? without_relays(cfg) : cfg;
  const int K = alloc_cfg.relays();
  trace.relays = K;
  const int N = cfg.users();
  const double b = cfg->subcarrier_bandwidth;
  const double eps = cfg->channel_uncertainty;

  SystemState state = SystemState::initial(cfg);
  alloc::DualState dual;
  trace.records.reserve(static_cast<std::size_t>(slots));

  for (long t = 0; t < slots; ++t) {
    const std::vector<double> arrivals = env::sample_arrivals(cfg, rng.traffic());
    const double harvest = env::sample_renewable(cfg, rng.renewable());
    ChannelRealization ch = env::sample_channels(trace.geometry, cfg, rng.fading());
    if (no_relay) ch = drop_relays(ch);
    const ChannelRealization seen = eps > 0.0 ? env::perturb_channels(ch, eps, rng.uncertainty()) : ch;

    SlotDecision d = SlotDecision::empty(N, cfg.subcarriers());
    d.harvested = harvest;

    alloc::SlotAllocation a;
    if (policy == Policy::PerSlotNum) {
      a = solve_per_slot(state, seen, alloc_cfg, dual);
    } else {
      alloc::SlotPrices prices = alloc::hybrid_prices(state, cfg);
      if (policy == Policy::OnGridOnly) prices.bs_gain = -cfg->V * cfg->varphi;
      a = alloc::solve_slot(prices, seen, alloc_cfg, dual);
    }
    d.assign = a.assign;
    d.p_b = a.p_b;
    d.p_r = a.p_r;

    const std::vector<double> se = phy::user_rates(d, ch);
    for (int n = 0; n < N; ++n) d.rate_mu[n] = b * se[n];

    if (policy == Policy::PerSlotNum) {
      for (int n = 0; n < N; ++n) {
        const double left = std::max(state.q[n] - d.rate_mu[n], 0.0);
        d.admit_r[n] = std::min(arrivals[n], cfg.q_max() - left);
      }
    } else {
      for (int n = 0; n < N; ++n) {
        d.aux_x[n] = flow::aux_rate(state.u[n], cfg);
        d.admit_r[n] = flow::admit(state.q[n], arrivals[n], cfg);
      }
    }

    const double p_b_total = d.bs_power();
    energy::EnergySplit e;
    switch (policy) {
    case Policy::Free:
    case Policy::NoRelayHybrid:
      e = energy::manage_energy(p_b_total, state.s, harvest, cfg);
      break;
    case Policy::OnGridOnly:
      e = energy::manage_energy_grid_only(p_b_total, cfg);
      break;
    case Policy::PerSlotNum:
      e = energy::manage_energy_greedy(p_b_total, state.s, harvest, cfg);
      break;
    }
    d.grid_j = e.grid_j;
    d.discharge_o = e.discharge_o;
    d.charge_frac = e.charge_frac;

    check_decision(t, d, K, cfg);
    check_supply(t, d, state.s, cfg);

    TraceRecord rec;
    rec.t = t;
    rec.state = state;
    const std::vector<double> relay_p = d.relay_powers(K);
    rec.grid_power = energy::grid_power(d.grid_j, relay_p, cfg);
    double util = 0.0;
    for (int n = 0; n < N; ++n) util += flow::utility(d.aux_x[n]);
    rec.utility_term = cfg->phi * util;
    rec.energy_term = cfg->varphi * rec.grid_power;
    rec.slot_objective = a.objective;
    rec.dual_iters = a.iterations;
    rec.lambda_b = a.dual.lambda_b;
    rec.recovery_scale = a.bs_scale;
    rec.lyapunov = lyapunov(state, cfg);

    SystemState next = flow::update_queues(state, d);
    try {
      next.s = energy::update_battery(state.s, d.discharge_o, d.charge_frac, harvest, cfg);
    } catch (const InvariantViolation& ex) {
      violated(t, ex.what());
    }
    for (int n = 0; n < N; ++n)
      if (next.q[n] > cfg.q_max() * (1.0 + kRel))
        violated(t, "queue " + std::to_string(n) + " exceeds q_max");

    rec.decision = std::move(d);
    trace.records.push_back(std::move(rec));
    state = std::move(next);
  }
  trace.final_state = state;
  return trace;
}

Summary metrics(const Trace& trace, const ValidatedConfig& cfg, double window_fraction) {
  if (trace.records.empty()) throw std::invalid_argument("metrics: empty trace");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw std::invalid_argument("metrics: window fraction must be in (0, 1]");
  const auto& recs = trace.records;
  const long T = static_cast<long>(recs.size());
  const int N = cfg.users();

  Summary s;
  s.slots = T;
  s.window = std::max(1L, static_cast<long>(std::ceil(window_fraction * static_cast<double>(T) - 1e-9)));
  s.avg_admitted.assign(N, 0.0);
  s.avg_served.assign(N, 0.0);

  double discharged = 0.0, stored = 0.0, iters = 0.0;
  s.battery_min = s.battery_max = recs.front().state.s;
  for (long k = 0; k < T; ++k) {
    const TraceRecord& r = recs[k];
    const SlotDecision& d = r.decision;
    discharged += d.discharge_o;
    stored += d.charge_frac * d.harvested;
    iters += r.dual_iters;
    for (int n = 0; n < N; ++n) {
      s.max_queue = std::max(s.max_queue, r.state.q[n]);
      s.max_virtual_queue = std::max(s.max_virtual_queue, r.state.u[n]);
    }
    s.battery_min = std::min(s.battery_min, r.state.s);
    s.battery_max = std::max(s.battery_max, r.state.s);
    if (k >= T - s.window) {
      for (int n = 0; n < N; ++n) {
        s.avg_admitted[n] += d.admit_r[n];
        s.avg_served[n] += std::min(r.state.q[n], d.rate_mu[n]);
      }
      s.avg_grid_power += r.grid_power;
    }
  }
  for (int n = 0; n < N; ++n) {
    s.max_queue = std::max(s.max_queue, trace.final_state.q[n]);
    s.max_virtual_queue = std::max(s.max_virtual_queue, trace.final_state.u[n]);
  }
  s.battery_min = std::min(s.battery_min, trace.final_state.s);
  s.battery_max = std::max(s.battery_max, trace.final_state.s);

  const double w = static_cast<double>(s.window);
  double util = 0.0;
  for (int n = 0; n < N; ++n) {
    s.avg_admitted[n] /= w;
    s.avg_served[n] /= w;
    s.throughput += s.avg_admitted[n];
    util += flow::utility(s.avg_admitted[n]);
  }
  s.avg_grid_power /= w;
  s.objective = cfg->phi * util - cfg->varphi * s.avg_grid_power;
  s.fairness = fairness_index(s.avg_admitted);
  s.xi = drift_constant(cfg);
  s.xi_over_v = s.xi / cfg->V;
  s.energy_balance = std::abs(discharged - stored) / static_cast<double>(T);
  s.mean_dual_iters = iters / static_cast<double>(T);
  return s;
}

Summary average(std::span<const Summary> runs) {
  if (runs.empty()) return {};
  Summary m;
  const double k = static_cast<double>(runs.size());
  m.slots = runs.front().slots;
  m.window = runs.front().window;
  const std::size_t N = runs.front().avg_admitted.size();
  m.avg_admitted.assign(N, 0.0);
  m.avg_served.assign(N, 0.0);
  m.battery_min = runs.front().battery_min;
  m.battery_max = runs.front().battery_max;
  for (const Summary& s : runs) {
    for (std::size_t n = 0; n < N; ++n) {
      m.avg_admitted[n] += s.avg_admitted[n] / k;
      m.avg_served[n] += s.avg_served[n] / k;
    }
    m.throughput += s.throughput / k;
    m.avg_grid_power += s.avg_grid_power / k;
    m.objective += s.objective / k;
    m.fairness += s.fairness / k;
    m.max_queue = std::max(m.max_queue, s.max_queue);
    m.max_virtual_queue = std::max(m.max_virtual_queue, s.max_virtual_queue);
    m.battery_min = std::min(m.battery_min, s.battery_min);
    m.battery_max = std::max(m.battery_max, s.battery_max);
    m.xi = s.xi;
    m.xi_over_v = s.xi_over_v;
    m.energy_balance = std::max(m.energy_balance, s.energy_balance);
    m.mean_dual_iters += s.mean_dual_iters / k;
  }
  return m;
}

std::string_view axis_name(Axis a) { return a == Axis::V ? "v" : "varphi"; }

Axis parse_axis(std::string_view name) {
  if (name == "v" || name == "V") return Axis::V;
  if (name == "varphi") return Axis::Varphi;
  throw std::invalid_argument("unknown sweep axis '" + std::string(name) + "' (expected v or varphi)");
}

std::vector<SweepRow> sweep(const SystemConfig& base, Policy policy, Axis axis, std::span<const double> values,
                            std::span<const std::uint64_t> seeds, long slots, int threads) {
  struct Cell {
    bool ok = false;
    Summary summary;
    std::string error;
  };
  const std::size_t n_runs = values.size() * seeds.size();
  std::vector<Cell> cells(n_runs);

  auto work = [&](std::size_t idx) {
    const std::size_t vi = idx / seeds.size();
    const std::size_t si = idx % seeds.size();
    Cell& cell = cells[idx];
    try {
      SystemConfig c = base;
      (axis == Axis::V ? c.V : c.varphi) = values[vi];
      const ValidatedConfig cfg = validate_config(c);
      cell.summary = metrics(run(cfg, policy, seeds[si], slots), cfg);
      cell.ok = true;
    } catch (const std::exception& ex) {
      cell.error = "seed " + std::to_string(seeds[si]) + ": " + ex.what();
    }
  };

  if (threads <= 1 || n_runs <= 1) {
    for (std::size_t i = 0; i < n_runs; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int count = std::min<int>(threads, static_cast<int>(n_runs));
    for (int w = 0; w < count; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n_runs; i = next++) work(i);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<SweepRow> rows(values.size());
  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    SweepRow& row = rows[vi];
    row.value = values[vi];
    std::vector<Summary> ok;
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      Cell& cell = cells[vi * seeds.size() + si];
      if (cell.ok)
        ok.push_back(std::move(cell.summary));
      else
        row.errors.push_back(std::move(cell.error));
    }
    row.completed = static_cast<int>(ok.size());
    row.mean = average(ok);
  }
  return rows;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& os, const Trace& trace, const ValidatedConfig& cfg) {
  const int N = cfg.users();
  const int K = trace.relays;
  os << "t";
  for (int n = 1; n <= N; ++n) os << ",Q_" << n;
  for (int n = 1; n <= N; ++n) os << ",U_" << n;
  os << ",S,w,delta,O,J,P_grid";
  for (int n = 1; n <= N; ++n) os << ",mu_" << n;
  for (int n = 1; n <= N; ++n) os << ",R_" << n;
  for (int n = 1; n <= N; ++n) os << ",X_" << n;
  os << ",p_B_total";
  for (int i = 1; i <= K; ++i) os << ",p_" << i << "_total";
  os << ",dual_iters,lyapunov\n";

  for (const TraceRecord& r : trace.records) {
    const SlotDecision& d = r.decision;
    os << r.t;
    for (int n = 0; n < N; ++n) os << ',' << format_double(r.state.q[n]);
    for (int n = 0; n < N; ++n) os << ',' << format_double(r.state.u[n]);
    os << ',' << format_double(r.state.s) << ',' << format_double(d.harvested) << ','
       << format_double(d.charge_frac) << ',' << format_double(d.discharge_o) << ',' << format_double(d.grid_j)
       << ',' << format_double(r.grid_power);
    for (int n = 0; n < N; ++n) os << ',' << format_double(d.rate_mu[n]);
    for (int n = 0; n < N; ++n) os << ',' << format_double(d.admit_r[n]);
    for (int n = 0; n < N; ++n) os << ',' << format_double(d.aux_x[n]);
    os << ',' << format_double(d.bs_power());
    for (double p : d.relay_powers(K)) os << ',' << format_double(p);
    os << ',' << r.dual_iters << ',' << format_double(r.lyapunov) << '\n';
  }
}

void write_summary(std::ostream& os, const Summary& s) {
  auto kv = [&](std::string_view k, double v) { os << k << " = " << format_double(v) << '\n'; };
  os << "slots = " << s.slots << '\n' << "window = " << s.window << '\n';
  for (std::size_t n = 0; n < s.avg_admitted.size(); ++n) kv("avg_admitted_" + std::to_string(n + 1), s.avg_admitted[n]);
  for (std::size_t n = 0; n < s.avg_served.size(); ++n) kv("avg_served_" + std::to_string(n + 1), s.avg_served[n]);
  kv("throughput", s.throughput);
  kv("avg_grid_power", s.avg_grid_power);
  kv("objective", s.objective);
  kv("fairness", s.fairness);
  kv("max_queue", s.max_queue);
  kv("max_virtual_queue", s.max_virtual_queue);
  kv("battery_min", s.battery_min);
  kv("battery_max", s.battery_max);
  kv("xi", s.xi);
  kv("xi_over_v", s.xi_over_v);
  kv("energy_balance", s.energy_balance);
  kv("mean_dual_iters", s.mean_dual_iters);
}

void write_sweep_csv(std::ostream& os, Axis axis, std::span<const SweepRow> rows) {
  std::size_t N = 0;
  for (const SweepRow& r : rows) N = std::max(N, r.mean.avg_admitted.size());
  os << axis_name(axis) << ",completed,failed,throughput,avg_grid_power,objective,fairness,max_queue,"
                          "max_virtual_queue,battery_min,battery_max,xi,xi_over_v,energy_balance";
  for (std::size_t n = 1; n <= N; ++n) os << ",R_" << n;
  os << '\n';
  for (const SweepRow& r : rows) {
    const Summary& s = r.mean;
    os << format_double(r.value) << ',' << r.completed << ',' << r.errors.size();
    for (double v : {s.throughput, s.avg_grid_power, s.objective, s.fairness, s.max_queue, s.max_virtual_queue,
                     s.battery_min, s.battery_max, s.xi, s.xi_over_v, s.energy_balance})
      os << ',' << format_double(v);
    for (std::size_t n = 0; n < N; ++n) os << ',' << (n < s.avg_admitted.size() ? format_double(s.avg_admitted[n]) : "");
    os << '\n';
  }
}

void write_geometry_csv(std::ostream& os, const env::Geometry& geom) {
  os << "kind,index,x,y\n";
  os << "bs,0,0,0\n";
  for (std::size_t n = 0; n < geom.users.size(); ++n)
    os << "user," << n + 1 << ',' << format_double(geom.users[n].x) << ',' << format_double(geom.users[n].y) << '\n';
  for (std::size_t i = 0; i < geom.relays.size(); ++i)
    os << "relay," << i + 1 << ',' << format_double(geom.relays[i].x) << ',' << format_double(geom.relays[i].y)
       << '\n';
}

} // namespace greenrelay::sim
