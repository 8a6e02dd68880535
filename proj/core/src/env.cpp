#include "greenrelay/env.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace greenrelay::env {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::uint64_t RngStreams::derive_seed(std::uint64_t master_seed, std::string_view stream) {
  return splitmix64(splitmix64(master_seed) ^ fnv1a(stream));
}

RngStreams::RngStreams(std::uint64_t master_seed)
    : seed_(master_seed), traffic_(derive_seed(master_seed, "traffic")), fading_(derive_seed(master_seed, "fading")),
      renewable_(derive_seed(master_seed, "renewable")), geometry_(derive_seed(master_seed, "geometry")),
      uncertainty_(derive_seed(master_seed, "uncertainty")) {}

Geometry build_geometry(const ValidatedConfig& cfg, RngStreams::Engine& rng) {
  Geometry g;
  const double radius = cfg->cell_radius;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  g.users.reserve(cfg.users());
  for (int n = 0; n < cfg.users(); ++n) {
    const double r = radius * std::sqrt(unit(rng));
    const double a = 2.0 * std::numbers::pi * unit(rng);
    g.users.push_back({r * std::cos(a), r * std::sin(a)});
  }
  const int k = cfg.relays();
  g.relays.reserve(k);
  for (int i = 0; i < k; ++i) {
    const double a = 2.0 * std::numbers::pi * i / k;
    g.relays.push_back({0.5 * radius * std::cos(a), 0.5 * radius * std::sin(a)});
  }
  return g;
}

double normalized_gain(double d, double fading_power, const SystemConfig& cfg) {
  if (!(d > 0.0)) throw std::invalid_argument("normalized_gain: link distance must be positive");
  return std::pow(d, -cfg.pathloss_exponent) * fading_power / (cfg.gamma_gap * cfg.noise_power);
}

ChannelRealization sample_channels(const Geometry& geom, const ValidatedConfig& cfg, RngStreams::Engine& rng) {
  const int n_users = static_cast<int>(geom.users.size());
  const int n_relays = static_cast<int>(geom.relays.size());
  const int n_sub = cfg.subcarriers();
  ChannelRealization ch(n_users, n_relays, n_sub);
  std::exponential_distribution<double> rayleigh_power(1.0);
  const Point bs{};

  for (int n = 0; n < n_users; ++n) {
    const double mean = normalized_gain(distance(bs, geom.users[n]), 1.0, cfg.raw());
    for (int m = 0; m < n_sub; ++m) ch.bu(n, m) = mean * rayleigh_power(rng);
  }
  for (int i = 0; i < n_relays; ++i) {
    const double mean = normalized_gain(distance(bs, geom.relays[i]), 1.0, cfg.raw());
    for (int m = 0; m < n_sub; ++m) ch.br(i, m) = mean * rayleigh_power(rng);
  }
  for (int i = 0; i < n_relays; ++i) {
    for (int n = 0; n < n_users; ++n) {
      const double mean = normalized_gain(distance(geom.relays[i], geom.users[n]), 1.0, cfg.raw());
      for (int m = 0; m < n_sub; ++m) ch.ru(i, n, m) = mean * rayleigh_power(rng);
    }
  }
  return ch;
}

std::vector<double> sample_arrivals(const ValidatedConfig& cfg, RngStreams::Engine& rng) {
  std::vector<double> a(cfg.users(), 0.0);
  if (cfg->arrival_rate <= 0.0) return a;
  std::poisson_distribution<int> packets(cfg->arrival_rate);
  std::exponential_distribution<double> size(1.0 / cfg->mean_packet_size);
  for (auto& bits : a) {
    const int k = packets(rng);
    double total = 0.0;
    for (int j = 0; j < k; ++j) total += size(rng);
    bits = std::min(total, cfg->a_max);
  }
  return a;
}

double sample_renewable(const ValidatedConfig& cfg, RngStreams::Engine& rng) {
  const auto& states = cfg->renewable_states;
  if (states.size() == 1) return states.front().value;
  std::vector<double> weights;
  weights.reserve(states.size());
  for (const auto& s : states) weights.push_back(s.probability);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  return states[pick(rng)].value;
}

ChannelRealization perturb_channels(const ChannelRealization& ch, double eps, RngStreams::Engine& rng) {
  ChannelRealization out = ch;
  if (eps == 0.0) return out;
  std::bernoulli_distribution up(0.5);
  auto jitter = [&](double h) { return h * (up(rng) ? 1.0 + eps : 1.0 - eps); };
  for (int m = 0; m < ch.subcarriers(); ++m) {
    for (int n = 0; n < ch.users(); ++n) out.bu(n, m) = jitter(ch.bu(n, m));
    for (int i = 0; i < ch.relays(); ++i) {
      out.br(i, m) = jitter(ch.br(i, m));
      for (int n = 0; n < ch.users(); ++n) out.ru(i, n, m) = jitter(ch.ru(i, n, m));
    }
  }
  return out;
}

} // namespace greenrelay::env
