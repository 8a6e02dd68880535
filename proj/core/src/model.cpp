#include "greenrelay/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace greenrelay {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid config: " + what);
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

} // namespace

double max_feasible_v(const SystemConfig& cfg) {
  double w_max = 0.0;
  for (const auto& st : cfg.renewable_states) w_max = std::max(w_max, st.value);
  const double room = cfg.s_max - w_max - cfg.o_max;
  if (cfg.varphi <= 0.0) return room > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return room / cfg.varphi;
}

ValidatedConfig validate_config(const SystemConfig& cfg) {
  require(cfg.num_users > 0, "num_users > 0");
  require(cfg.num_relays >= 0, "num_relays >= 0");
  require(cfg.num_subcarriers > 0, "num_subcarriers > 0");
  require(cfg.cell_radius > 0.0, "cell_radius > 0");
  require(cfg.pathloss_exponent >= 0.0, "pathloss_exponent >= 0");
  require(cfg.noise_power > 0.0, "noise_power > 0");
  require(cfg.gamma_gap >= 1.0, "gamma_gap >= 1");
  require(cfg.subcarrier_bandwidth > 0.0, "subcarrier_bandwidth > 0");

  require(cfg.p_b_max > 0.0 && cfg.dp_b >= 0.0, "p_b_max > 0 and dp_b >= 0");
  require(cfg.p_i_max > 0.0 && cfg.dp_i >= 0.0, "p_i_max > 0 and dp_i >= 0");
  require(cfg.power_mask > 0.0, "power_mask > 0");
  require(cfg.num_subcarriers * cfg.power_mask > cfg.p_b_max,
          "M * power_mask > p_b_max (" + num(cfg.num_subcarriers * cfg.power_mask) + " <= " +
              num(cfg.p_b_max) + ")");
  if (cfg.num_relays > 0) {
    require(static_cast<double>(cfg.num_users) * cfg.num_subcarriers * cfg.power_mask > cfg.p_i_max,
            "N * M * power_mask > p_i_max");
  }

  require(!cfg.renewable_states.empty(), "renewable_states non-empty");
  double psum = 0.0;
  double w_max = 0.0;
  for (const auto& st : cfg.renewable_states) {
    require(st.value >= 0.0 && std::isfinite(st.value), "renewable state values >= 0");
    require(st.probability >= 0.0, "renewable state probabilities >= 0");
    psum += st.probability;
    w_max = std::max(w_max, st.value);
  }
  require(std::abs(psum - 1.0) <= 1e-9, "renewable probabilities sum to 1 (got " + num(psum) + ")");

  const double bs_peak = cfg.p_b_max + cfg.dp_b;
  require(cfg.j_max >= bs_peak, "j_max >= p_b_max + dp_b (" + num(cfg.j_max) + " < " + num(bs_peak) + ")");
  require(cfg.o_max >= bs_peak, "o_max >= p_b_max + dp_b (" + num(cfg.o_max) + " < " + num(bs_peak) + ")");
  require(cfg.s_max > 0.0, "s_max > 0");
  require(cfg.s_init >= 0.0 && cfg.s_init <= cfg.s_max, "0 <= s_init <= s_max");

  require(cfg.varphi >= 0.0, "varphi >= 0");
  require(cfg.phi > 0.0, "phi > 0");
  require(cfg.V > 0.0, "0 < V");
  const double v_cap = max_feasible_v(cfg);
  require(cfg.V <= v_cap * (1.0 + 1e-12),
          "V <= (s_max - w_max - o_max) / varphi (" + num(cfg.V) + " > " + num(v_cap) + ")");

  require(cfg.arrival_rate >= 0.0, "arrival_rate >= 0");
  require(cfg.mean_packet_size > 0.0, "mean_packet_size > 0");
  require(cfg.buffer_packets > 0.0, "buffer_packets > 0");
  const double q_max = cfg.buffer_packets * cfg.mean_packet_size;
  require(q_max > cfg.a_max, "q_max > a_max (" + num(q_max) + " <= " + num(cfg.a_max) + ")");
  require(cfg.a_max >= cfg.arrival_rate * cfg.mean_packet_size,
          "a_max >= mean arrival per slot (" + num(cfg.a_max) + " < " +
              num(cfg.arrival_rate * cfg.mean_packet_size) + ")");
  require(cfg.a_max > 0.0, "a_max > 0");

  require(cfg.dual_step0 > 0.0, "dual_step0 > 0");
  require(cfg.dual_max_iters >= 1, "dual_max_iters >= 1");
  require(cfg.dual_tol > 0.0, "dual_tol > 0");
  require(cfg.channel_uncertainty >= 0.0 && cfg.channel_uncertainty < 1.0, "0 <= channel_uncertainty < 1");

  ValidatedConfig out;
  out.cfg_ = cfg;
  out.q_max_ = q_max;
  out.w_max_ = w_max;
  out.theta_ = cfg.varphi * cfg.V + cfg.o_max;
  return out;
}

SystemConfig reference_scenario() {
  SystemConfig cfg;
  // 10 MHz over 128 subcarriers, one-second slots
  cfg.subcarrier_bandwidth = 10e6 / 128.0;
  cfg.o_max = 1.5 * (cfg.p_b_max + cfg.dp_b);
  cfg.j_max = cfg.o_max;
  return cfg;
}

SystemConfig in_bandwidth_units(const SystemConfig& cfg) {
  if (!(cfg.subcarrier_bandwidth > 0.0)) throw ConfigError("invalid config: subcarrier_bandwidth > 0");
  SystemConfig out = cfg;
  out.mean_packet_size = cfg.mean_packet_size / cfg.subcarrier_bandwidth;
  out.a_max = cfg.a_max / cfg.subcarrier_bandwidth;
  out.subcarrier_bandwidth = 1.0;
  return out;
}

ChannelRealization::ChannelRealization(int users, int relays, int subcarriers)
    : users_(users), relays_(relays), subcarriers_(subcarriers),
      h_bu_(static_cast<std::size_t>(users) * subcarriers, 0.0),
      h_br_(static_cast<std::size_t>(relays) * subcarriers, 0.0),
      h_ru_(static_cast<std::size_t>(relays) * users * subcarriers, 0.0) {}

bool ChannelRealization::valid() const {
  auto ok = [](double h) { return std::isfinite(h) && h >= 0.0; };
  return std::all_of(h_bu_.begin(), h_bu_.end(), ok) && std::all_of(h_br_.begin(), h_br_.end(), ok) &&
         std::all_of(h_ru_.begin(), h_ru_.end(), ok);
}

SystemState SystemState::initial(const ValidatedConfig& cfg) {
  SystemState st;
  st.q.assign(cfg.users(), 0.0);
  st.u.assign(cfg.users(), 0.0);
  st.s = cfg->s_init;
  return st;
}

SlotDecision SlotDecision::empty(int users, int subcarriers) {
  SlotDecision d;
  d.admit_r.assign(users, 0.0);
  d.aux_x.assign(users, 0.0);
  d.rate_mu.assign(users, 0.0);
  d.assign.assign(subcarriers, Assignment::unassigned());
  d.p_b.assign(subcarriers, 0.0);
  d.p_r.assign(subcarriers, 0.0);
  return d;
}

double SlotDecision::bs_power() const { return std::accumulate(p_b.begin(), p_b.end(), 0.0); }

std::vector<double> SlotDecision::relay_powers(int relays) const {
  std::vector<double> out(relays, 0.0);
  for (std::size_t m = 0; m < assign.size(); ++m) {
    if (assign[m].mode == Assignment::Mode::Coop) out[assign[m].relay] += p_r[m];
  }
  return out;
}

} // namespace greenrelay
