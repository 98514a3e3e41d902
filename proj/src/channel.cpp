#include "polar/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace polar {

std::string channel_token(ChannelKind k) {
    switch (k) {
        case ChannelKind::Bec: return "bec";
        case ChannelKind::Bsc: return "bsc";
        case ChannelKind::AwgnBpsk: return "awgn-bpsk";
        case ChannelKind::AwgnQpsk: return "awgn-qpsk";
    }
    return "?";
}

ChannelKind channel_from_token(const std::string& token) {
    if (token == "bec") return ChannelKind::Bec;
    if (token == "bsc") return ChannelKind::Bsc;
    if (token == "awgn-bpsk") return ChannelKind::AwgnBpsk;
    if (token == "awgn-qpsk") return ChannelKind::AwgnQpsk;
    throw std::invalid_argument("unknown channel '" + token + "'");
}

void ChannelModel::validate() const {
    switch (kind) {
        case ChannelKind::Bec:
        case ChannelKind::Bsc:
            if (param < 0.0 || param > 1.0)
                throw std::invalid_argument("channel probability out of [0,1]");
            break;
        case ChannelKind::AwgnBpsk:
        case ChannelKind::AwgnQpsk:
            if (!(param > 0.0))
                throw std::invalid_argument("noise variance must be positive");
            break;
    }
}

std::vector<double> transmit(const BitVector& code, const ChannelModel& ch, Rng& rng) {
    ch.validate();
    std::vector<double> obs(code.size());
    switch (ch.kind) {
        case ChannelKind::Bec:
            for (std::size_t i = 0; i < code.size(); ++i)
                obs[i] = rng.uniform() < ch.param ? 0.0 : (code[i] ? -1.0 : 1.0);
            break;
        case ChannelKind::Bsc:
            for (std::size_t i = 0; i < code.size(); ++i) {
                Bit flip = rng.uniform() < ch.param ? 1 : 0;
                obs[i] = static_cast<double>(code[i] ^ flip);
            }
            break;
        case ChannelKind::AwgnBpsk:
        case ChannelKind::AwgnQpsk: {
            // QPSK differs from BPSK only in how bits pair onto symbol
            // dimensions; per-bit statistics are identical.
            double sigma = std::sqrt(ch.param);
            for (std::size_t i = 0; i < code.size(); ++i)
                obs[i] = (1.0 - 2.0 * code[i]) + sigma * rng.gaussian();
            break;
        }
    }
    return obs;
}

LlrVector demodulate_llr(const std::vector<double>& obs, const ChannelModel& ch) {
    ch.validate();
    LlrVector out;
    out.values.resize(obs.size());
    switch (ch.kind) {
        case ChannelKind::Bec:
            for (std::size_t i = 0; i < obs.size(); ++i)
                out.values[i] = obs[i] == 0.0 ? 0.0
                                              : (obs[i] > 0.0 ? out.saturation : -out.saturation);
            break;
        case ChannelKind::Bsc: {
            double p = ch.param;
            double mag;
            if (p <= 0.0 || p >= 1.0) mag = out.saturation;
            else mag = std::log((1.0 - p) / p);
            mag = std::min(mag, out.saturation);
            double lo = p >= 1.0 ? -1.0 : 1.0;  // p=1 inverts the channel
            for (std::size_t i = 0; i < obs.size(); ++i)
                out.values[i] = saturate((1.0 - 2.0 * obs[i]) * mag * lo, out.saturation);
            break;
        }
        case ChannelKind::AwgnBpsk:
        case ChannelKind::AwgnQpsk:
            for (std::size_t i = 0; i < obs.size(); ++i)
                out.values[i] = saturate(2.0 * obs[i] / ch.param, out.saturation);
            break;
    }
    return out;
}

double sigma2_from_ebn0_db(double ebn0_db, double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("rate must be positive");
    return 1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0));
}

}  // namespace polar
