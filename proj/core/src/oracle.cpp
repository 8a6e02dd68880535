#include "greenrelay/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace greenrelay::oracle {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_resolution(int resolution) {
  if (resolution < 1) throw std::invalid_argument("oracle resolution must be at least 1");
}

// Row-major (rows x cols) table.
struct Table {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;
  Table(int r, int c, double init) : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, init) {}
  double& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }
};

// In place: at(b, r) <- max over b' <= b, r' <= r.
void prefix_max(Table& t) {
  for (int b = 0; b < t.rows; ++b)
    for (int r = 0; r < t.cols; ++r) {
      double x = t.at(b, r);
      if (b > 0) x = std::max(x, t.at(b - 1, r));
      if (r > 0) x = std::max(x, t.at(b, r - 1));
      t.at(b, r) = x;
    }
}

// Best single-subcarrier value using BS grid power b and relay grid power r.
Table subcarrier_table(const alloc::SlotPrices& prices, const ChannelRealization& ch, int m, double step,
                       int resolution) {
  const int nb = resolution + 1;
  const int nr = ch.relays() > 0 ? resolution + 1 : 1;
  Table t(nb, nr, kNegInf);
  t.at(0, 0) = 0.0; // unassigned
  for (int b = 0; b < nb; ++b) {
    const double pb = b * step;
    for (int n = 0; n < ch.users(); ++n) {
      const double v = prices.rate_weight[n] * std::log2(1.0 + pb * ch.bu(n, m)) + prices.bs_gain * pb;
      t.at(b, 0) = std::max(t.at(b, 0), v);
    }
    if (ch.relays() == 0) continue;
    for (int n = 0; n < ch.users(); ++n) {
      const double first = pb * ch.br(0, m);
      for (int r = 0; r < nr; ++r) {
        const double pr = r * step;
        const double snr = std::min(first, pb * ch.bu(n, m) + pr * ch.ru(0, n, m));
        const double v =
            0.5 * prices.rate_weight[n] * std::log2(1.0 + snr) + prices.bs_gain * pb - prices.relay_cost * pr;
        t.at(b, r) = std::max(t.at(b, r), v);
      }
    }
  }
  return t;
}

// W(b, r) = max over b1 + b2 <= b, r1 + r2 <= r of a(b1, r1) + c(b2, r2), with
// a and c already prefix-maximized; b < rows_out, r < cols_out.
Table combine(const Table& a, const Table& c, int rows_out, int cols_out) {
  Table w(rows_out, cols_out, kNegInf);
  for (int b = 0; b < rows_out; ++b)
    for (int r = 0; r < cols_out; ++r) {
      double best = kNegInf;
      for (int b1 = 0; b1 <= std::min(b, a.rows - 1); ++b1) {
        const int b2 = std::min(b - b1, c.rows - 1);
        for (int r1 = 0; r1 <= std::min(r, a.cols - 1); ++r1) {
          const int r2 = std::min(r - r1, c.cols - 1);
          best = std::max(best, a.at(b1, r1) + c.at(b2, r2));
        }
      }
      w.at(b, r) = best;
    }
  return w;
}

} // namespace

GridResult grid_search_direct(const alloc::DirectParams& prm, int resolution) {
  check_resolution(resolution);
  GridResult best{kNegInf, 0.0, 0.0};
  for (int k = 0; k <= resolution; ++k) {
    const double p = prm.mask * k / resolution;
    const double v = alloc::direct_objective(prm, p);
    if (v > best.objective) best = {v, p, 0.0};
  }
  return best;
}

GridResult grid_search_coop(const alloc::CoopParams& prm, int resolution) {
  check_resolution(resolution);
  GridResult best{kNegInf, 0.0, 0.0};
  const double half_w = 0.5 * prm.weight;
  for (int i = 0; i <= resolution; ++i) {
    const double pb = prm.mask * i / resolution;
    const double first = pb * prm.h_br;
    const double base = prm.bs_coeff * pb;
    const double capped = half_w * std::log2(1.0 + first);
    for (int j = 0; j <= resolution; ++j) {
      const double pr = prm.mask * j / resolution;
      const double second = pb * prm.h_bu + pr * prm.h_ru;
      // past the first-hop cap more relay power only costs
      const double rate = second >= first ? capped : half_w * std::log2(1.0 + second);
      const double v = rate + base - prm.relay_cost * pr;
      if (v > best.objective) best = {v, pb, pr};
      if (second >= first && prm.relay_cost >= 0.0) break;
    }
  }
  return best;
}

double direct_grid_error(const alloc::DirectParams& prm, int resolution) {
  const double lip = std::abs(prm.weight) * prm.h_bu / std::numbers::ln2 + std::abs(prm.bs_coeff);
  return 0.5 * lip * prm.mask / resolution;
}

double coop_grid_error(const alloc::CoopParams& prm, int resolution) {
  const double q = std::abs(prm.weight) / (2.0 * std::numbers::ln2);
  const double lip_b = q * std::max(prm.h_br, prm.h_bu) + std::abs(prm.bs_coeff);
  const double lip_r = q * prm.h_ru + std::abs(prm.relay_cost);
  return 0.5 * (lip_b + lip_r) * prm.mask / resolution;
}

double exhaustive_slot(const alloc::SlotPrices& prices, const ChannelRealization& ch, const ValidatedConfig& cfg,
                       int resolution) {
  check_resolution(resolution);
  if (ch.users() > 2 || ch.relays() > 1 || ch.subcarriers() > 3)
    throw std::invalid_argument("exhaustive_slot: instance too large (limit N=2, K=1, M=3)");
  const int M = ch.subcarriers();
  if (M == 0) return 0.0;

  const double step = cfg->power_mask / resolution;
  // grid units available under each sum constraint
  const int b_cap = static_cast<int>(std::floor(cfg->p_b_max / step + 1e-9));
  const int r_cap = ch.relays() > 0 ? static_cast<int>(std::floor(cfg->p_i_max / step + 1e-9)) : 0;

  std::vector<Table> tables;
  tables.reserve(M);
  for (int m = 0; m < M; ++m) {
    tables.push_back(subcarrier_table(prices, ch, m, step, resolution));
    prefix_max(tables.back());
  }

  Table acc = tables.back();
  for (int m = M - 2; m >= 0; --m) {
    const bool last = m == 0;
    const int rows = last ? 1 : std::min(b_cap, (M - m) * resolution) + 1;
    const int cols = last ? 1 : std::min(r_cap, ch.relays() > 0 ? (M - m) * resolution : 0) + 1;
    if (last) {
      // only the full budget matters for the final merge
      double best = kNegInf;
      const Table& a = tables[0];
      for (int b1 = 0; b1 <= std::min(b_cap, a.rows - 1); ++b1) {
        const int b2 = std::min(b_cap - b1, acc.rows - 1);
        for (int r1 = 0; r1 <= std::min(r_cap, a.cols - 1); ++r1) {
          const int r2 = std::min(r_cap - r1, acc.cols - 1);
          best = std::max(best, a.at(b1, r1) + acc.at(b2, r2));
        }
      }
      return best;
    }
    acc = combine(tables[m], acc, rows, cols);
  }
  // M == 1
  return acc.at(std::min(b_cap, acc.rows - 1), std::min(r_cap, acc.cols - 1));
}

} // namespace greenrelay::oracle
