#pragma once

#include <string>
#include <vector>

#include "polar/core.hpp"
#include "polar/llr_ops.hpp"
#include "polar/rng.hpp"

namespace polar {

enum class ChannelKind { Bec, Bsc, AwgnBpsk, AwgnQpsk };

std::string channel_token(ChannelKind k);
ChannelKind channel_from_token(const std::string& token);

// param: erasure probability for BEC, cross-over probability for BSC,
// noise variance per dimension for the AWGN kinds.
struct ChannelModel {
    ChannelKind kind = ChannelKind::AwgnBpsk;
    double param = 1.0;
    void validate() const;
};

struct LlrVector {
    std::vector<double> values;
    double saturation = kLlrSaturation;
};

// Observation conventions:
//   BEC:  +1 for bit 0, -1 for bit 1, exactly 0 for an erasure.
//   BSC:  the received bit as 0.0 / 1.0.
//   AWGN: y = (1-2x) + n, n ~ N(0, sigma^2) per dimension. QPSK maps bit
//         pairs onto two orthogonal dimensions with the same per-dimension
//         variance, so the flat observation vector has one entry per bit.
std::vector<double> transmit(const BitVector& code, const ChannelModel& ch, Rng& rng);

// Positive LLR favours bit 0. BSC/BEC extremes saturate at +/-B instead of
// producing infinities; erasures map to exactly 0.
LlrVector demodulate_llr(const std::vector<double>& obs, const ChannelModel& ch);

// E_b/N_0 (dB) to noise variance per dimension for unit-energy symbols:
// sigma^2 = 1 / (2 R 10^{dB/10}). The one place the conversion lives.
double sigma2_from_ebn0_db(double ebn0_db, double rate);

}  // namespace polar
