#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "greenrelay/config_io.hpp"
#include "greenrelay/model.hpp"
#include "greenrelay/sim.hpp"
#include "greenrelay/verify.hpp"

namespace greenrelay::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SystemConfig base_config(const std::string& path) {
  if (path.empty()) return reference_scenario();
  if (!fs::exists(path)) throw UsageError("config file not found: " + path);
  return load_config(path, reference_scenario());
}

ValidatedConfig checked(const SystemConfig& c) {
  try {
    return validate_config(c);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

// Writes through a temporary sibling and renames, so readers never see a
// partial file.
void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    body(os);
    if (!os) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_run(const fs::path& dir, const std::string& tag, const sim::Trace& trace, const ValidatedConfig& cfg) {
  write_file(dir / ("trace" + tag + ".csv"), [&](std::ostream& os) { sim::write_trace_csv(os, trace, cfg); });
  if (!trace.records.empty())
    write_file(dir / ("summary" + tag + ".txt"),
               [&](std::ostream& os) { sim::write_summary(os, sim::metrics(trace, cfg)); });
}

int report_sweep(const std::vector<sim::SweepRow>& rows, std::ostream& err) {
  int failed = 0;
  for (const auto& r : rows)
    for (const auto& e : r.errors) {
      err << "value " << sim::format_double(r.value) << ", " << e << '\n';
      ++failed;
    }
  return failed;
}

struct RunOpts {
  std::string config;
  std::uint64_t seed = 1;
  long slots = 12000;
  std::string policy = "free";
  std::string out;
};

int cmd_run(const RunOpts& o, std::ostream& out) {
  const ValidatedConfig cfg = checked(base_config(o.config));
  sim::Policy policy;
  try {
    policy = sim::parse_policy(o.policy);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const sim::Trace trace = sim::run(cfg, policy, o.seed, o.slots);
  const fs::path dir(o.out);
  write_run(dir, "", trace, cfg);
  write_file(dir / "geometry.csv", [&](std::ostream& os) { sim::write_geometry_csv(os, trace.geometry); });
  write_file(dir / "config.conf", [&](std::ostream& os) { os << format_config(cfg.raw()); });
  out << "wrote " << trace.records.size() << " slots to " << (dir / "trace.csv").string() << '\n';
  return kOk;
}

std::vector<double> parse_doubles(const std::string& list) {
  std::vector<double> v;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw UsageError("not a number: '" + item + "'");
    v.push_back(x);
  }
  if (v.empty()) throw UsageError("empty value list");
  return v;
}

std::vector<std::uint64_t> parse_seeds(const std::string& list) {
  std::vector<std::uint64_t> s;
  for (double x : parse_doubles(list)) {
    if (x < 0 || x != static_cast<double>(static_cast<std::uint64_t>(x))) throw UsageError("bad seed in '" + list + "'");
    s.push_back(static_cast<std::uint64_t>(x));
  }
  return s;
}

struct SweepOpts {
  std::string config;
  std::string axis;
  std::string values;
  std::string seeds = "1";
  long slots = 12000;
  std::string policy = "free";
  int threads = 1;
  std::string out;
};

int cmd_sweep(const SweepOpts& o, std::ostream& out, std::ostream& err) {
  const SystemConfig base = base_config(o.config);
  sim::Axis axis;
  sim::Policy policy;
  try {
    axis = sim::parse_axis(o.axis);
    policy = sim::parse_policy(o.policy);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto values = parse_doubles(o.values);
  const auto seeds = parse_seeds(o.seeds);
  const auto rows = sim::sweep(base, policy, axis, values, seeds, o.slots, o.threads);
  const fs::path file = fs::path(o.out) / ("sweep_" + std::string(sim::axis_name(axis)) + ".csv");
  write_file(file, [&](std::ostream& os) { sim::write_sweep_csv(os, axis, rows); });
  out << "wrote " << rows.size() << " rows to " << file.string() << '\n';
  return report_sweep(rows, err) == 0 ? kOk : kFailure;
}

struct VerifyOpts {
  int cases = 1000;
  int resolution = 2000;
  double tol = 1e-4;
  int tiny = 0;
  int tiny_resolution = 1000;
  std::uint64_t seed = 1;
};

int cmd_verify(const VerifyOpts& o, std::ostream& out) {
  if (o.cases < 0 || o.resolution < 100 || o.tiny < 0 || o.tiny_resolution < 1)
    throw UsageError("verify needs --cases >= 0, --resolution >= 100");
  bool ok = true;
  auto line = [&](const char* name, const oracle::SubproblemCheck& c) {
    out << name << ": " << c.cases - c.failures << "/" << c.cases << " within " << sim::format_double(o.tol)
        << " (" << c.closed_above << " closed form above grid, " << c.closed_below << " below)"
        << ", worst |closed - grid| = " << sim::format_double(c.worst_gap)
        << ", worst shortfall below grid bound = " << sim::format_double(std::max(0.0, c.worst_deficit)) << '\n';
    ok = ok && c.failures == 0;
  };
  line("direct", oracle::check_direct(o.cases, o.resolution, o.tol, o.seed));
  line("coop", oracle::check_coop(o.cases, o.resolution, o.tol, o.seed + 1));
  if (o.tiny > 0) {
    const auto t = oracle::check_tiny(o.tiny, o.tiny_resolution, o.seed + 2);
    out << "slot: " << t.above_95 << "/" << t.cases << " at >= 0.95 of exhaustive, " << t.above_90 << "/"
        << t.cases << " at >= 0.90, worst ratio " << sim::format_double(t.worst_ratio) << '\n';
    ok = ok && 100 * t.above_95 >= 95 * t.cases && t.above_90 == t.cases;
  }
  out << (ok ? "all checks passed" : "some checks failed") << '\n';
  return ok ? kOk : kFailure;
}

struct PaperOpts {
  std::string out;
  long slots = 12000;
  std::string seeds = "1";
  int threads = 1;
};

int cmd_paper(const PaperOpts& o, std::ostream& out, std::ostream& err) {
  const fs::path dir(o.out);
  const SystemConfig base = reference_scenario();
  const ValidatedConfig cfg = checked(base);
  const auto seeds = parse_seeds(o.seeds);
  write_file(dir / "config.conf", [&](std::ostream& os) { os << format_config(base); });

  for (sim::Policy p : {sim::Policy::Free, sim::Policy::NoRelayHybrid, sim::Policy::OnGridOnly,
                        sim::Policy::PerSlotNum}) {
    const sim::Trace trace = sim::run(cfg, p, seeds.front(), o.slots);
    const std::string tag = "_" + std::string(sim::policy_name(p));
    write_run(dir, tag, trace, cfg);
    if (p == sim::Policy::Free)
      write_file(dir / "geometry.csv", [&](std::ostream& os) { sim::write_geometry_csv(os, trace.geometry); });
    out << "policy " << sim::policy_name(p) << " done\n";
  }

  int failed = 0;
  const std::vector<double> v_values{100, 1000, 2000, 3500, 4900};
  const auto v_rows = sim::sweep(base, sim::Policy::Free, sim::Axis::V, v_values, seeds, o.slots, o.threads);
  write_file(dir / "sweep_v.csv", [&](std::ostream& os) { sim::write_sweep_csv(os, sim::Axis::V, v_rows); });
  failed += report_sweep(v_rows, err);

  // throughput against grid energy, in bandwidth units at a load the radio
  // can carry
  SystemConfig trade = in_bandwidth_units(base);
  trade.arrival_rate = 0.5;
  write_file(dir / "config_tradeoff.conf", [&](std::ostream& os) { os << format_config(trade); });
  const std::vector<double> varphi_values{20, 10, 5, 2, 0.5};
  for (sim::Policy p : {sim::Policy::Free, sim::Policy::NoRelayHybrid, sim::Policy::OnGridOnly}) {
    const auto rows = sim::sweep(trade, p, sim::Axis::Varphi, varphi_values, seeds, o.slots, o.threads);
    const std::string name =
        p == sim::Policy::Free ? "sweep_varphi.csv" : "sweep_varphi_" + std::string(sim::policy_name(p)) + ".csv";
    write_file(dir / name, [&](std::ostream& os) { sim::write_sweep_csv(os, sim::Axis::Varphi, rows); });
    failed += report_sweep(rows, err);
  }
  out << "wrote scenario outputs to " << dir.string() << '\n';
  return failed == 0 ? kOk : kFailure;
}

} // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid-energy OFDMA relay network simulator", "greenrelay"};
  app.require_subcommand(1);

  RunOpts run;
  auto* run_cmd = app.add_subcommand("run", "Simulate one policy and write its trace");
  run_cmd->add_option("--config", run.config, "Config file (key = value); defaults to the reference scenario");
  run_cmd->add_option("--seed", run.seed, "Master seed");
  run_cmd->add_option("--slots", run.slots, "Number of slots")->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--policy", run.policy, "free | no-relay | on-grid | per-slot-num");
  run_cmd->add_option("--out", run.out, "Output directory")->required();

  SweepOpts sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep V or varphi over seeds and write one row per value");
  sweep_cmd->add_option("--config", sw.config, "Config file; defaults to the reference scenario");
  sweep_cmd->add_option("--axis", sw.axis, "v | varphi")->required();
  sweep_cmd->add_option("--values", sw.values, "Comma-separated axis values")->required();
  sweep_cmd->add_option("--seeds", sw.seeds, "Comma-separated master seeds");
  sweep_cmd->add_option("--slots", sw.slots, "Slots per run")->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--policy", sw.policy, "Policy to sweep");
  sweep_cmd->add_option("--threads", sw.threads, "Worker threads")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sw.out, "Output directory")->required();

  VerifyOpts ver;
  auto* verify_cmd = app.add_subcommand("verify", "Check the closed-form subproblems against grid search");
  verify_cmd->add_option("--cases", ver.cases, "Random draws per subproblem kind");
  verify_cmd->add_option("--resolution", ver.resolution, "Grid intervals per power axis");
  verify_cmd->add_option("--tol", ver.tol, "Absolute objective tolerance");
  verify_cmd->add_option("--tiny", ver.tiny, "Also compare whole-slot solves on this many tiny instances");
  verify_cmd->add_option("--tiny-resolution", ver.tiny_resolution, "Grid intervals for the whole-slot oracle");
  verify_cmd->add_option("--seed", ver.seed, "Seed of the random draws");

  PaperOpts paper;
  auto* paper_cmd = app.add_subcommand("paper-scenario", "Reference scenario: all policies and both sweeps");
  paper_cmd->add_option("--out", paper.out, "Output directory")->required();
  paper_cmd->add_option("--slots", paper.slots, "Slots per run")->check(CLI::NonNegativeNumber);
  paper_cmd->add_option("--seeds", paper.seeds, "Comma-separated master seeds for the sweeps");
  paper_cmd->add_option("--threads", paper.threads, "Worker threads")->check(CLI::PositiveNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run, out);
    if (*sweep_cmd) return cmd_sweep(sw, out, err);
    if (*verify_cmd) return cmd_verify(ver, out);
    if (*paper_cmd) return cmd_paper(paper, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvariantViolation& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

} // namespace greenrelay::cli
