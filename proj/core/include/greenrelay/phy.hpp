#pragma once

#include <vector>

#include "greenrelay/model.hpp"

namespace greenrelay::phy {

/// Spectral efficiency of a direct link, log2(1 + p h). Gains are already
/// normalized by the SNR gap and noise. Throws std::invalid_argument on
/// negative inputs.
double direct_rate(double p, double h);

/// Two-hop decode-and-forward spectral efficiency. The half-duplex relay
/// costs a factor 1/2; the first hop (BS to relay) caps the rate.
double df_rate(double p_b, double p_r, double h_br, double h_bu, double h_ru);

/// Per-user spectral efficiency summed over the subcarriers assigned to
/// that user. Multiply by the subcarrier bandwidth to get bits per slot.
std::vector<double> user_rates(const SlotDecision& decision, const ChannelRealization& ch);

} // namespace greenrelay::phy
