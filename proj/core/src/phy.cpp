#include "greenrelay/phy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace greenrelay::phy {

double direct_rate(double p, double h) {
  if (p < 0.0 || h < 0.0) throw std::invalid_argument("direct_rate: negative power or gain");
  return std::log2(1.0 + p * h);
}

double df_rate(double p_b, double p_r, double h_br, double h_bu, double h_ru) {
  if (p_b < 0.0 || p_r < 0.0 || h_br < 0.0 || h_bu < 0.0 || h_ru < 0.0) {
    throw std::invalid_argument("df_rate: negative power or gain");
  }
  const double first_hop = p_b * h_br;
  const double combined = p_b * h_bu + p_r * h_ru;
  return 0.5 * std::log2(1.0 + std::min(first_hop, combined));
}

std::vector<double> user_rates(const SlotDecision& decision, const ChannelRealization& ch) {
  std::vector<double> mu(ch.users(), 0.0);
  for (int m = 0; m < static_cast<int>(decision.assign.size()); ++m) {
    const auto& a = decision.assign[m];
    switch (a.mode) {
    case Assignment::Mode::Unassigned:
      break;
    case Assignment::Mode::Direct:
      mu[a.user] += direct_rate(decision.p_b[m], ch.bu(a.user, m));
      break;
    case Assignment::Mode::Coop:
      mu[a.user] += df_rate(decision.p_b[m], decision.p_r[m], ch.br(a.relay, m), ch.bu(a.user, m),
                            ch.ru(a.relay, a.user, m));
      break;
    }
  }
  return mu;
}

} // namespace greenrelay::phy
