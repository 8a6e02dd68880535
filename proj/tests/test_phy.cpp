#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "greenrelay/phy.hpp"

namespace greenrelay {
namespace {

TEST(DirectRate, Examples) {
  EXPECT_DOUBLE_EQ(phy::direct_rate(1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(phy::direct_rate(0.0, 7.3), 0.0);
  EXPECT_DOUBLE_EQ(phy::direct_rate(3.0, 1.0), 2.0);
  EXPECT_THROW(phy::direct_rate(-1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(phy::direct_rate(1.0, -1.0), std::invalid_argument);
}

TEST(DfRate, Examples) {
  EXPECT_NEAR(phy::df_rate(1, 1, 3, 1, 1), 0.5 * std::log2(3.0), 1e-12);
  EXPECT_DOUBLE_EQ(phy::df_rate(0, 0, 2, 3, 4), 0.0);
  EXPECT_DOUBLE_EQ(phy::df_rate(1, 1, 1, 0.5, 0.5), 0.5);
  EXPECT_THROW(phy::df_rate(1, -1, 1, 1, 1), std::invalid_argument);
}

TEST(DfRate, MonotoneAndCappedByFirstHop) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int k = 0; k < 2000; ++k) {
    const double pb = u(rng), pr = u(rng), hbr = u(rng), hbu = u(rng), hru = u(rng), dp = u(rng);
    const double r = phy::df_rate(pb, pr, hbr, hbu, hru);
    EXPECT_LE(r, 0.5 * phy::direct_rate(pb, hbr) + 1e-15);
    EXPECT_GE(phy::df_rate(pb + dp, pr, hbr, hbu, hru), r);
    EXPECT_GE(phy::df_rate(pb, pr + dp, hbr, hbu, hru), r);
    EXPECT_GE(phy::direct_rate(pb + dp, hbu), phy::direct_rate(pb, hbu));
  }
}

TEST(UserRates, Examples) {
  ChannelRealization ch(2, 1, 3);
  for (int m = 0; m < 3; ++m) {
    ch.bu(0, m) = 1.0;
    ch.bu(1, m) = 3.0;
    ch.br(0, m) = 3.0;
    ch.ru(0, 0, m) = 1.0;
    ch.ru(0, 1, m) = 1.0;
  }
  SlotDecision d = SlotDecision::empty(2, 3);
  EXPECT_EQ(phy::user_rates(d, ch), std::vector<double>(2, 0.0));

  d.assign[0] = Assignment::direct(0);
  d.p_b[0] = 1.0;
  auto mu = phy::user_rates(d, ch);
  EXPECT_DOUBLE_EQ(mu[0], 1.0);
  EXPECT_EQ(mu[1], 0.0);

  d.assign[2] = Assignment::coop(0, 0);
  d.p_b[2] = 1.0;
  d.p_r[2] = 1.0;
  mu = phy::user_rates(d, ch);
  EXPECT_NEAR(mu[0], 1.0 + 0.5 * std::log2(3.0), 1e-12);
}

TEST(UserRates, PermutationEquivariant) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 4.0);
  ChannelRealization ch(3, 1, 4), sw(3, 1, 4);
  SlotDecision d = SlotDecision::empty(3, 4);
  const int perm[3] = {2, 0, 1};
  for (int m = 0; m < 4; ++m) {
    ch.br(0, m) = sw.br(0, m) = u(rng);
    for (int n = 0; n < 3; ++n) {
      ch.bu(n, m) = sw.bu(perm[n], m) = u(rng);
      ch.ru(0, n, m) = sw.ru(0, perm[n], m) = u(rng);
    }
    d.p_b[m] = u(rng) / 4.0;
  }
  d.assign = {Assignment::direct(0), Assignment::coop(0, 1), Assignment::direct(2), Assignment::coop(0, 0)};
  d.p_r[1] = 0.3;
  d.p_r[3] = 0.7;
  SlotDecision ds = d;
  for (auto& a : ds.assign) a.user = perm[a.user];
  const auto mu = phy::user_rates(d, ch);
  const auto ms = phy::user_rates(ds, sw);
  for (int n = 0; n < 3; ++n) EXPECT_DOUBLE_EQ(mu[n], ms[perm[n]]);
}

} // namespace
} // namespace greenrelay
