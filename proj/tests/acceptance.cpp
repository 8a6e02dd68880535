// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Pass criterion names as arguments to run
// a subset.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "greenrelay/sim.hpp"
#include "greenrelay/verify.hpp"

namespace {

using namespace greenrelay;

const std::vector<std::uint64_t> kSeeds{1, 2, 3, 4, 5};
constexpr long kLongSlots = 12000;
constexpr long kSweepSlots = 2000;
const std::vector<double> kVValues{100, 1000, 2000, 3500, 4900};
const std::vector<double> kVarphiValues{20, 10, 5, 2, 0.5};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string num(double v) { return fmt("%.6g", v); }

// Shared run sets, computed on first use.
struct Runs {
  std::optional<std::vector<sim::SweepRow>> long_free;
  std::optional<std::vector<sim::SweepRow>> v_sweep;
  std::optional<std::vector<sim::SweepRow>> v_edge;
  std::optional<std::vector<sim::SweepRow>> trade_free;
  std::optional<std::vector<sim::SweepRow>> trade_grid;

  static SystemConfig tradeoff_config() {
    SystemConfig c = in_bandwidth_units(reference_scenario());
    c.arrival_rate = 0.5;
    return c;
  }

  const std::vector<sim::SweepRow>& longs() {
    if (!long_free) {
      const std::vector<double> v{reference_scenario().V};
      long_free = sim::sweep(reference_scenario(), sim::Policy::Free, sim::Axis::V, v, kSeeds, kLongSlots);
    }
    return *long_free;
  }
  const std::vector<sim::SweepRow>& vs() {
    if (!v_sweep) v_sweep = sim::sweep(reference_scenario(), sim::Policy::Free, sim::Axis::V, kVValues, kSeeds, kSweepSlots);
    return *v_sweep;
  }
  // the largest V the battery size allows
  const std::vector<sim::SweepRow>& edge() {
    if (!v_edge) {
      const std::vector<double> v{max_feasible_v(reference_scenario())};
      v_edge = sim::sweep(reference_scenario(), sim::Policy::Free, sim::Axis::V, v, kSeeds, kSweepSlots);
    }
    return *v_edge;
  }
  const std::vector<sim::SweepRow>& trade(sim::Policy p) {
    auto& slot = p == sim::Policy::Free ? trade_free : trade_grid;
    if (!slot) slot = sim::sweep(tradeoff_config(), p, sim::Axis::Varphi, kVarphiValues, kSeeds, kSweepSlots);
    return *slot;
  }
};

// Every run in the rows completed; otherwise names the first error.
std::optional<std::string> incomplete(const std::vector<sim::SweepRow>& rows, std::size_t seeds) {
  for (const auto& r : rows) {
    if (!r.errors.empty()) return r.errors.front();
    if (static_cast<std::size_t>(r.completed) != seeds) return "run missing at value " + num(r.value);
  }
  return std::nullopt;
}

// Non-decreasing along the given order, allowing any single step to dip by
// at most 2 % of the series range, and ending no lower than it starts.
bool trend_up(const std::vector<double>& y, std::string& why) {
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double allow = 0.02 * (*hi - *lo);
  for (std::size_t k = 1; k < y.size(); ++k) {
    if (y[k] < y[k - 1] - allow) {
      why = "step " + std::to_string(k) + " drops " + num(y[k - 1] - y[k]) + " > " + num(allow);
      return false;
    }
  }
  if (y.back() < y.front()) {
    why = "ends below its start";
    return false;
  }
  return true;
}

std::string series(const std::vector<double>& y) {
  std::string s = "[";
  for (std::size_t k = 0; k < y.size(); ++k) s += (k ? ", " : "") + num(y[k]);
  return s + "]";
}

Outcome queue_bound(Runs& runs) {
  const auto& rows = runs.longs();
  const double q_max = validate_config(reference_scenario()).q_max();
  if (auto e = incomplete(rows, kSeeds.size())) return {false, *e};
  const double worst = rows.front().mean.max_queue;
  return {worst <= q_max, std::to_string(kSeeds.size()) + " seeds x " + std::to_string(kLongSlots) +
                              " slots, max Q_n = " + num(worst) + " <= q_max = " + num(q_max)};
}

Outcome battery(Runs& runs) {
  const double s_max = reference_scenario().s_max;
  double lo = s_max, hi = 0.0;
  std::vector<const std::vector<sim::SweepRow>*> sets{&runs.longs(), &runs.vs(), &runs.edge()};
  std::set<double> vs;
  for (const auto* rows : sets) {
    if (auto e = incomplete(*rows, kSeeds.size())) return {false, *e};
    for (const auto& r : *rows) {
      lo = std::min(lo, r.mean.battery_min);
      hi = std::max(hi, r.mean.battery_max);
      vs.insert(r.value);
    }
  }
  const std::vector<double> v(vs.begin(), vs.end());
  return {lo >= 0.0 && hi <= s_max, "V in " + series(v) + ", S in [" + num(lo) + ", " + num(hi) + "] within [0, " +
                                        num(s_max) + "]"};
}

Outcome subproblem_oracle(Runs&) {
  const auto d = oracle::check_direct(1000, 2000, 1e-4, 1);
  const auto c = oracle::check_coop(1000, 2000, 1e-4, 2);
  std::ostringstream os;
  os << "direct " << d.cases - d.failures << "/" << d.cases << " (worst gap " << num(d.worst_gap) << ")"
     << ", coop " << c.cases - c.failures << "/" << c.cases << " (worst gap " << num(c.worst_gap) << ", "
     << c.closed_above << " closed form above grid, " << c.closed_below << " below)"
     << ", worst shortfall below grid bound " << num(std::max({0.0, d.worst_deficit, c.worst_deficit}));
  return {d.failures == 0 && c.failures == 0, os.str()};
}

Outcome tiny_instances(Runs&) {
  const auto t = oracle::check_tiny(200, 1000, 3);
  std::ostringstream os;
  os << t.above_95 << "/" << t.cases << " at >= 0.95, " << t.above_90 << "/" << t.cases
     << " at >= 0.90, worst ratio " << num(t.worst_ratio);
  return {t.above_95 * 100 >= 95 * t.cases && t.above_90 == t.cases, os.str()};
}

Outcome v_trend(Runs& runs) {
  const auto& rows = runs.vs();
  if (auto e = incomplete(rows, kSeeds.size())) return {false, *e};
  std::vector<double> y;
  for (const auto& r : rows) y.push_back(r.mean.objective);
  std::string why;
  const bool ok = trend_up(y, why);
  return {ok, "objective over V " + series(kVValues) + " = " + series(y) + (ok ? "" : ", " + why)};
}

// Throughput of a (P, throughput) curve at power p by linear interpolation,
// held flat beyond the measured range.
double throughput_at(std::vector<std::pair<double, double>> curve, double p) {
  std::sort(curve.begin(), curve.end());
  if (p <= curve.front().first) return curve.front().second;
  if (p >= curve.back().first) return curve.back().second;
  for (std::size_t k = 1; k < curve.size(); ++k) {
    const auto [p0, t0] = curve[k - 1];
    const auto [p1, t1] = curve[k];
    if (p <= p1) return p1 > p0 ? t0 + (t1 - t0) * (p - p0) / (p1 - p0) : std::max(t0, t1);
  }
  return curve.back().second;
}

Outcome tradeoff(Runs& runs) {
  const auto& free_rows = runs.trade(sim::Policy::Free);
  const auto& grid_rows = runs.trade(sim::Policy::OnGridOnly);
  if (auto e = incomplete(free_rows, kSeeds.size())) return {false, *e};
  if (auto e = incomplete(grid_rows, kSeeds.size())) return {false, *e};
  std::vector<double> thr, pwr;
  std::vector<std::pair<double, double>> curve;
  for (const auto& r : free_rows) {
    thr.push_back(r.mean.throughput);
    pwr.push_back(r.mean.avg_grid_power);
    curve.emplace_back(r.mean.avg_grid_power, r.mean.throughput);
  }
  std::string why_t, why_p;
  const bool t_ok = trend_up(thr, why_t), p_ok = trend_up(pwr, why_p);

  const auto top = std::max_element(grid_rows.begin(), grid_rows.end(), [](const auto& a, const auto& b) {
    return a.mean.avg_grid_power < b.mean.avg_grid_power;
  });
  const double matched = throughput_at(curve, top->mean.avg_grid_power);
  const bool cmp_ok = matched >= top->mean.throughput;

  std::ostringstream os;
  os << "varphi " << series(kVarphiValues) << ": throughput " << series(thr) << (t_ok ? "" : " (" + why_t + ")")
     << ", P " << series(pwr) << (p_ok ? "" : " (" + why_p + ")") << "; on-grid top P " << num(top->mean.avg_grid_power)
     << " throughput " << num(top->mean.throughput) << " vs FREE " << num(matched);
  return {t_ok && p_ok && cmp_ok, os.str()};
}

Outcome energy_balance(Runs& runs) {
  double worst = 0.0;
  int count = 0;
  std::vector<const std::vector<sim::SweepRow>*> sets{&runs.longs(), &runs.vs(), &runs.edge(),
                                                      &runs.trade(sim::Policy::Free)};
  bool ok = true;
  for (const auto* rows : sets) {
    if (auto e = incomplete(*rows, kSeeds.size())) return {false, *e};
    for (const auto& r : *rows) {
      const double s_max = reference_scenario().s_max;
      const double ratio = r.mean.energy_balance / (s_max / static_cast<double>(r.mean.slots));
      worst = std::max(worst, ratio);
      ok = ok && ratio <= 1.0;
      count += r.completed;
    }
  }
  return {ok, std::to_string(count) + " runs, worst |O - dw| / (S_max / T) = " + num(worst)};
}

Outcome fairness(Runs&) {
  std::ostringstream os;
  bool ok = true;
  for (int n : {10, 20, 40}) {
    SystemConfig c = reference_scenario();
    c.num_users = n;
    const ValidatedConfig free_cfg = validate_config(c);
    c.num_utility = UtilityKind::Linear;
    const ValidatedConfig num_cfg = validate_config(c);
    int wins = 0;
    for (std::uint64_t seed : kSeeds) {
      const double a = sim::metrics(sim::run(free_cfg, sim::Policy::Free, seed, 400), free_cfg).fairness;
      const double b = sim::metrics(sim::run(num_cfg, sim::Policy::PerSlotNum, seed, 400), num_cfg).fairness;
      wins += a > b;
    }
    ok = ok && wins >= 4;
    os << (n == 10 ? "" : ", ") << "N=" << n << ": " << wins << "/" << kSeeds.size();
  }
  return {ok, os.str()};
}

Outcome determinism(Runs&) {
  const ValidatedConfig cfg = validate_config(reference_scenario());
  for (auto p : {sim::Policy::Free, sim::Policy::NoRelayHybrid, sim::Policy::OnGridOnly, sim::Policy::PerSlotNum}) {
    std::ostringstream a, b;
    sim::write_trace_csv(a, sim::run(cfg, p, 11, 200), cfg);
    sim::write_trace_csv(b, sim::run(cfg, p, 11, 200), cfg);
    if (a.str() != b.str()) return {false, std::string(sim::policy_name(p)) + " traces differ"};
  }
  std::ostringstream a, b;
  const std::vector<double> v{100, 1000};
  const std::vector<std::uint64_t> seeds{1, 2};
  sim::write_sweep_csv(a, sim::Axis::V, sim::sweep(reference_scenario(), sim::Policy::Free, sim::Axis::V, v, seeds, 50, 1));
  sim::write_sweep_csv(b, sim::Axis::V, sim::sweep(reference_scenario(), sim::Policy::Free, sim::Axis::V, v, seeds, 50, 3));
  if (a.str() != b.str()) return {false, "sweep output depends on thread count"};
  return {true, "4 policies x 200 slots byte-identical; sweep identical for 1 and 3 threads"};
}

} // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome(Runs&)>>> criteria{
      {"queue_bound", queue_bound},   {"battery_bounds", battery}, {"subproblem_oracle", subproblem_oracle},
      {"tiny_instance_optimality", tiny_instances}, {"v_trend", v_trend}, {"tradeoff_trend", tradeoff},
      {"energy_balance", energy_balance}, {"fairness", fairness}, {"determinism", determinism}};

  std::set<std::string> only(argv + 1, argv + argc);
  for (const auto& name : only) {
    if (std::none_of(criteria.begin(), criteria.end(), [&](const auto& c) { return c.first == name; })) {
      std::fprintf(stderr, "unknown criterion '%s'\n", name.c_str());
      return 2;
    }
  }

  Runs runs;
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    if (!only.empty() && !only.count(name)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check(runs);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
