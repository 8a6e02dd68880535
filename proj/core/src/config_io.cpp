#include "greenrelay/config_io.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace greenrelay {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view v) {
  // std::from_chars for double is available in libstdc++ 11
  double out = 0.0;
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError("config key '" + std::string(key) + "': not a number: '" + std::string(v) + "'");
  }
  return out;
}

int to_int(std::string_view key, std::string_view v) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + std::string(key) + "': not an integer: '" + std::string(v) + "'");
  }
  return out;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<RenewableState> parse_states(std::string_view v) {
  std::vector<RenewableState> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    const auto item = trim(v.substr(0, comma));
    v = comma == std::string_view::npos ? std::string_view{} : v.substr(comma + 1);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ConfigError("config key 'renewable_states': expected value:probability, got '" + std::string(item) + "'");
    }
    out.push_back({to_double("renewable_states", trim(item.substr(0, colon))),
                   to_double("renewable_states", trim(item.substr(colon + 1)))});
  }
  return out;
}

struct Field {
  const char* key;
  std::function<void(SystemConfig&, std::string_view)> set;
  std::function<std::string(const SystemConfig&)> get;
};

template <typename T>
Field num_field(const char* key, T SystemConfig::*member) {
  return Field{key,
               [key, member](SystemConfig& c, std::string_view v) {
                 if constexpr (std::is_same_v<T, int>) c.*member = to_int(key, v);
                 else c.*member = to_double(key, v);
               },
               [member](const SystemConfig& c) {
                 if constexpr (std::is_same_v<T, int>) return std::to_string(c.*member);
                 else return fmt_double(c.*member);
               }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f{
        num_field("num_users", &SystemConfig::num_users),
        num_field("num_relays", &SystemConfig::num_relays),
        num_field("num_subcarriers", &SystemConfig::num_subcarriers),
        num_field("cell_radius", &SystemConfig::cell_radius),
        num_field("pathloss_exponent", &SystemConfig::pathloss_exponent),
        num_field("noise_power", &SystemConfig::noise_power),
        num_field("gamma_gap", &SystemConfig::gamma_gap),
        num_field("subcarrier_bandwidth", &SystemConfig::subcarrier_bandwidth),
        num_field("p_b_max", &SystemConfig::p_b_max),
        num_field("dp_b", &SystemConfig::dp_b),
        num_field("p_i_max", &SystemConfig::p_i_max),
        num_field("dp_i", &SystemConfig::dp_i),
        num_field("power_mask", &SystemConfig::power_mask),
        num_field("s_max", &SystemConfig::s_max),
        num_field("o_max", &SystemConfig::o_max),
        num_field("j_max", &SystemConfig::j_max),
        num_field("s_init", &SystemConfig::s_init),
        num_field("arrival_rate", &SystemConfig::arrival_rate),
        num_field("mean_packet_size", &SystemConfig::mean_packet_size),
        num_field("buffer_packets", &SystemConfig::buffer_packets),
        num_field("a_max", &SystemConfig::a_max),
        num_field("phi", &SystemConfig::phi),
        num_field("varphi", &SystemConfig::varphi),
        num_field("V", &SystemConfig::V),
        num_field("dual_step0", &SystemConfig::dual_step0),
        num_field("dual_max_iters", &SystemConfig::dual_max_iters),
        num_field("dual_tol", &SystemConfig::dual_tol),
        num_field("channel_uncertainty", &SystemConfig::channel_uncertainty),
    };
    f.push_back({"renewable_states",
                 [](SystemConfig& c, std::string_view v) { c.renewable_states = parse_states(v); },
                 [](const SystemConfig& c) {
                   std::string s;
                   for (const auto& st : c.renewable_states) {
                     if (!s.empty()) s += ", ";
                     s += fmt_double(st.value) + ":" + fmt_double(st.probability);
                   }
                   return s;
                 }});
    f.push_back({"num_utility",
                 [](SystemConfig& c, std::string_view v) {
                   if (v == "log") c.num_utility = UtilityKind::Log1p;
                   else if (v == "linear") c.num_utility = UtilityKind::Linear;
                   else throw ConfigError("config key 'num_utility': expected log or linear, got '" + std::string(v) + "'");
                 },
                 [](const SystemConfig& c) { return std::string(c.num_utility == UtilityKind::Log1p ? "log" : "linear"); }});
    return f;
  }();
  return table;
}

} // namespace

SystemConfig parse_config(std::string_view text, const SystemConfig& base) {
  SystemConfig cfg = base;
  int lineno = 0;
  while (!text.empty()) {
    ++lineno;
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    bool found = false;
    for (const auto& f : fields()) {
      if (key == f.key) {
        f.set(cfg, value);
        found = true;
        break;
      }
    }
    if (!found) {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + std::string(key) + "'");
    }
  }
  return cfg;
}

SystemConfig load_config(const std::filesystem::path& path, const SystemConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

std::string format_config(const SystemConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(cfg);
    out += '\n';
  }
  return out;
}

} // namespace greenrelay
