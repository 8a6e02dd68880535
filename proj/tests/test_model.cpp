#include <gtest/gtest.h>

#include <limits>

#include "greenrelay/model.hpp"

namespace greenrelay {
namespace {

TEST(ValidateConfig, ReferenceScenarioAccepted) {
  const ValidatedConfig v = validate_config(reference_scenario());
  EXPECT_DOUBLE_EQ(v->o_max, 1.5 * (20.0 + 194.24));
  EXPECT_DOUBLE_EQ(v.theta(), 0.5 * 100.0 + 321.36);
  EXPECT_DOUBLE_EQ(v.q_max(), 50000.0);
  EXPECT_DOUBLE_EQ(v.w_max(), 195.0);
  EXPECT_DOUBLE_EQ(v->subcarrier_bandwidth, 10e6 / 128.0);
}

TEST(ValidateConfig, MaxFeasibleV) {
  EXPECT_NEAR(max_feasible_v(reference_scenario()), (3000.0 - 195.0 - 321.36) / 0.5, 1e-9);
  SystemConfig c = reference_scenario();
  c.V = max_feasible_v(c);
  EXPECT_NO_THROW(validate_config(c));
  c.V += 1.0;
  EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(ValidateConfig, ThetaIsExact) {
  SystemConfig c;
  for (double v : {1.0, 37.5, 999.0}) {
    for (double vp : {0.1, 0.5, 0.9}) {
      c.V = v;
      c.varphi = vp;
      if (v > max_feasible_v(c)) continue;
      EXPECT_EQ(validate_config(c).theta(), vp * v + c.o_max);
    }
  }
}

TEST(ValidateConfig, Idempotent) {
  const ValidatedConfig once = validate_config(reference_scenario());
  EXPECT_EQ(validate_config(once), once);
}

void expect_rejected(const SystemConfig& c, const std::string& fragment) {
  try {
    validate_config(c);
    FAIL() << "accepted, expected rejection mentioning " << fragment;
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(ValidateConfig, RejectsZeroV) {
  SystemConfig c;
  c.V = 0.0;
  expect_rejected(c, "0 < V");
}

TEST(ValidateConfig, RejectsSmallGridDraw) {
  SystemConfig c;
  c.j_max = c.p_b_max + c.dp_b - 1.0;
  expect_rejected(c, "j_max >= p_b_max + dp_b");
}

TEST(ValidateConfig, RejectsSmallDischarge) {
  SystemConfig c;
  c.o_max = c.p_b_max + c.dp_b - 1.0;
  expect_rejected(c, "o_max >= p_b_max + dp_b");
}

TEST(ValidateConfig, RejectsProbabilitiesNotSummingToOne) {
  SystemConfig c;
  c.renewable_states = {{195.0, 0.5}, {100.0, 0.4}};
  expect_rejected(c, "sum to 1");
}

TEST(ValidateConfig, RejectsNegativeState) {
  SystemConfig c;
  c.renewable_states = {{-1.0, 1.0}};
  expect_rejected(c, "renewable state values");
}

TEST(ValidateConfig, RejectsTrivialMask) {
  SystemConfig c;
  c.num_subcarriers = 100; // 100 * 0.2 == p_b_max
  expect_rejected(c, "M * power_mask > p_b_max");
  c = SystemConfig{};
  c.num_users = 1;
  c.num_subcarriers = 101;
  c.p_i_max = 30.0;
  expect_rejected(c, "N * M * power_mask > p_i_max");
  c.num_relays = 0;
  EXPECT_NO_THROW(validate_config(c));
}

TEST(ValidateConfig, RejectsBufferNotAboveArrivalCap) {
  SystemConfig c;
  c.a_max = 50000.0;
  expect_rejected(c, "q_max > a_max");
}

TEST(ValidateConfig, RejectsArrivalCapBelowMeanArrival) {
  SystemConfig c;
  c.a_max = 39999.0;
  expect_rejected(c, "a_max >= mean arrival");
}

TEST(ValidateConfig, RejectsOtherFields) {
  SystemConfig c;
  c.num_users = 0;
  expect_rejected(c, "num_users");
  c = SystemConfig{};
  c.gamma_gap = 0.5;
  expect_rejected(c, "gamma_gap");
  c = SystemConfig{};
  c.s_init = 4000.0;
  expect_rejected(c, "s_init");
  c = SystemConfig{};
  c.channel_uncertainty = 1.0;
  expect_rejected(c, "channel_uncertainty");
  c = SystemConfig{};
  c.dual_max_iters = 0;
  expect_rejected(c, "dual_max_iters");
}

TEST(InBandwidthUnits, RescalesData) {
  const SystemConfig ref = reference_scenario();
  const SystemConfig c = in_bandwidth_units(ref);
  EXPECT_DOUBLE_EQ(c.subcarrier_bandwidth, 1.0);
  EXPECT_DOUBLE_EQ(c.mean_packet_size, 5000.0 / 78125.0);
  EXPECT_DOUBLE_EQ(c.a_max, 45000.0 / 78125.0);
  EXPECT_EQ(c.num_users, ref.num_users);
  EXPECT_NO_THROW(validate_config(c));
  SystemConfig bad = ref;
  bad.subcarrier_bandwidth = 0.0;
  EXPECT_THROW(in_bandwidth_units(bad), ConfigError);
}

TEST(ChannelRealization, IndexingAndValidity) {
  ChannelRealization ch(2, 3, 4);
  EXPECT_TRUE(ch.valid());
  ch.bu(1, 3) = 2.0;
  ch.br(2, 0) = 3.0;
  ch.ru(2, 1, 3) = 4.0;
  EXPECT_EQ(ch.bu(1, 3), 2.0);
  EXPECT_EQ(ch.bu(0, 3), 0.0);
  EXPECT_EQ(ch.br(2, 0), 3.0);
  EXPECT_EQ(ch.ru(2, 1, 3), 4.0);
  EXPECT_EQ(ch.ru(1, 1, 3), 0.0);
  ch.ru(0, 0, 0) = -1.0;
  EXPECT_FALSE(ch.valid());
  ch.ru(0, 0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_FALSE(ch.valid());
}

TEST(SlotDecision, PowerTotals) {
  SlotDecision d = SlotDecision::empty(2, 3);
  d.assign = {Assignment::direct(0), Assignment::coop(1, 1), Assignment::coop(1, 0)};
  d.p_b = {0.1, 0.2, 0.3};
  d.p_r = {0.0, 0.5, 0.25};
  EXPECT_DOUBLE_EQ(d.bs_power(), 0.6);
  const auto r = d.relay_powers(2);
  EXPECT_EQ(r[0], 0.0);
  EXPECT_DOUBLE_EQ(r[1], 0.75);
}

TEST(SystemState, InitialState) {
  SystemConfig c;
  c.s_init = 12.0;
  const SystemState s = SystemState::initial(validate_config(c));
  EXPECT_EQ(s.q, std::vector<double>(8, 0.0));
  EXPECT_EQ(s.u, std::vector<double>(8, 0.0));
  EXPECT_EQ(s.s, 12.0);
  EXPECT_EQ(s.t, 0);
}

} // namespace
} // namespace greenrelay
