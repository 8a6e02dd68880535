#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "greenrelay/model.hpp"

namespace greenrelay::env {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

/// Cell layout. The base station sits at the origin.
struct Geometry {
  std::vector<Point> users;
  std::vector<Point> relays;
};

/// Independent generators derived from one master seed. Each substream is
/// seeded from (master seed, stream name) only, so drawing from one stream
/// never shifts another.
class RngStreams {
public:
  using Engine = std::mt19937_64;

  explicit RngStreams(std::uint64_t master_seed);

  Engine& traffic() noexcept { return traffic_; }
  Engine& fading() noexcept { return fading_; }
  Engine& renewable() noexcept { return renewable_; }
  Engine& geometry() noexcept { return geometry_; }
  Engine& uncertainty() noexcept { return uncertainty_; }

  std::uint64_t master_seed() const noexcept { return seed_; }

  static std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view stream);

private:
  std::uint64_t seed_;
  Engine traffic_;
  Engine fading_;
  Engine renewable_;
  Engine geometry_;
  Engine uncertainty_;
};

/// Users uniform over the cell disk; relays on the half-radius circle at
/// equally spaced angles starting from 0.
Geometry build_geometry(const ValidatedConfig& cfg, RngStreams::Engine& rng);

/// Normalized gain of one link: d^-alpha * fading / (gamma_gap * N0).
/// Throws std::invalid_argument when d is not positive.
double normalized_gain(double d, double fading_power, const SystemConfig& cfg);

/// Fresh i.i.d. Rayleigh block fading on every link and subcarrier.
ChannelRealization sample_channels(const Geometry& geom, const ValidatedConfig& cfg, RngStreams::Engine& rng);

/// Bits arriving for each user: compound Poisson (packet count times
/// exponential packet sizes) truncated at a_max.
std::vector<double> sample_arrivals(const ValidatedConfig& cfg, RngStreams::Engine& rng);

/// Harvested energy this slot, drawn from the finite renewable state set.
double sample_renewable(const ValidatedConfig& cfg, RngStreams::Engine& rng);

/// Measured channel H(1 +/- eps) with an independent random sign per entry.
ChannelRealization perturb_channels(const ChannelRealization& ch, double eps, RngStreams::Engine& rng);

} // namespace greenrelay::env
