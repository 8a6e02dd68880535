#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "greenrelay/alloc.hpp"
#include "greenrelay/env.hpp"
#include "greenrelay/oracle.hpp"
#include "greenrelay/sim.hpp"
#include "greenrelay/verify.hpp"

namespace {

using namespace greenrelay;

void BM_DirectSubproblem(benchmark::State& st) {
  std::mt19937_64 rng(1);
  std::vector<alloc::DirectParams> draws;
  for (int k = 0; k < 1024; ++k) draws.push_back(oracle::random_direct(rng));
  std::size_t k = 0;
  for (auto _ : st) benchmark::DoNotOptimize(alloc::direct_subproblem(draws[k++ & 1023]));
}
BENCHMARK(BM_DirectSubproblem);

void BM_CoopSubproblem(benchmark::State& st) {
  std::mt19937_64 rng(2);
  std::vector<alloc::CoopParams> draws;
  for (int k = 0; k < 1024; ++k) draws.push_back(oracle::random_coop(rng));
  std::size_t k = 0;
  for (auto _ : st) benchmark::DoNotOptimize(alloc::coop_subproblem(draws[k++ & 1023]));
}
BENCHMARK(BM_CoopSubproblem);

// One cold-started allocation on the reference scenario with loaded queues.
void BM_SolveSlot(benchmark::State& st) {
  SystemConfig c = reference_scenario();
  c.num_subcarriers = static_cast<int>(st.range(0));
  c.p_b_max = 20.0 * c.num_subcarriers / 128.0; // same share of the mask as the reference
  c.o_max = c.j_max = 1.5 * (c.p_b_max + c.dp_b);
  const ValidatedConfig cfg = validate_config(c);
  env::RngStreams rng(3);
  const env::Geometry g = env::build_geometry(cfg, rng.geometry());
  const ChannelRealization ch = env::sample_channels(g, cfg, rng.fading());
  SystemState s = SystemState::initial(cfg);
  for (int n = 0; n < cfg.users(); ++n) {
    s.q[n] = 20000.0 + 2000.0 * n;
    s.u[n] = 12000.0;
  }
  s.s = 0.5 * cfg.theta();
  for (auto _ : st) benchmark::DoNotOptimize(alloc::solve_slot(s, ch, cfg));
}
BENCHMARK(BM_SolveSlot)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);

// Full slot loop, per policy, reference scenario.
void BM_RunSlots(benchmark::State& st) {
  const ValidatedConfig cfg = validate_config(reference_scenario());
  const auto policy = static_cast<sim::Policy>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(sim::run(cfg, policy, 1, 100));
  st.SetItemsProcessed(st.iterations() * 100);
  st.SetLabel(std::string(sim::policy_name(policy)));
}
BENCHMARK(BM_RunSlots)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_ExhaustiveTiny(benchmark::State& st) {
  std::mt19937_64 rng(4);
  const auto inst = oracle::random_tiny_instance(rng);
  for (auto _ : st) benchmark::DoNotOptimize(oracle::exhaustive_slot(inst.prices, inst.ch, inst.cfg, st.range(0)));
}
BENCHMARK(BM_ExhaustiveTiny)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
