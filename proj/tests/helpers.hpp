#pragma once

#include <cmath>
#include <random>

#include "greenrelay/model.hpp"

namespace greenrelay::testing {

// Small config used by the examples that need round numbers.
inline SystemConfig small_config() {
  SystemConfig c;
  c.num_users = 2;
  c.num_relays = 1;
  c.num_subcarriers = 4;
  c.power_mask = 1.0;
  c.p_b_max = 2.0;
  c.p_i_max = 1.5;
  return c;
}

inline ChannelRealization random_channels(int users, int relays, int subcarriers, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lg(std::log(0.05), std::log(20.0));
  ChannelRealization ch(users, relays, subcarriers);
  for (int m = 0; m < subcarriers; ++m) {
    for (int n = 0; n < users; ++n) ch.bu(n, m) = std::exp(lg(rng));
    for (int i = 0; i < relays; ++i) {
      ch.br(i, m) = std::exp(lg(rng));
      for (int n = 0; n < users; ++n) ch.ru(i, n, m) = std::exp(lg(rng));
    }
  }
  return ch;
}

} // namespace greenrelay::testing
