#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polar/channel.hpp"

namespace polar {

enum class Metric { MutualInformation, Bhattacharyya, BitErrorRate, MeanLlr };

std::string metric_token(Metric m);
Metric metric_from_token(const std::string& token);

struct DesignParam {
    std::string channel;  // "bec", "bsc", "awgn", "external", ...
    double value = 0.0;
};

struct ReliabilityProfile {
    std::vector<double> values;
    Metric metric = Metric::MutualInformation;
    DesignParam design;
    // per-index 95% binomial interval; filled by Monte-Carlo profiles only
    std::vector<std::pair<double, double>> ci;
};

// BEC recursions, natural indexing:
//   I(W_{2i-1}) = I^2            Z(W_{2i-1}) = 2Z - Z^2
//   I(W_{2i})   = 2I - I^2       Z(W_{2i})   = Z^2
ReliabilityProfile bec_capacity_profile(std::size_t n, double epsilon);
ReliabilityProfile bec_bhattacharyya_profile(std::size_t n, double epsilon);

// phi(x) = 1 - (4 pi x)^{-1/2} Int tanh(u/2) exp(-(u-x)^2 / 4x) du, taken in
// its three-region closed-form approximation. Monotone decreasing, phi(0)=1.
double gade_phi(double x);
// Bracketed bisection on [0, 1e6]; phi_inv(1) = 0.
double gade_phi_inv(double y);

// Mean-LLR density evolution under the Gaussian assumption. Root mean is
// 2/sigma^2; the all-doubling path ends at N * 2/sigma^2 exactly.
ReliabilityProfile gade_profile(std::size_t n, double noise_sigma2);

// BER_i ~ Q(sqrt(mean)).
double mean_to_ber(double mean);

// Genie-aided SC over M all-zero transmissions. The g operation reduces to
// a+b (all partial sums are zero), so every leaf LLR is computed by parallel
// in-place sweeps. Error weights are halves of a unit so the tallies stay in
// integers and are independent of the worker count. For the BEC an erasure
// (leaf LLR exactly 0) counts as a failure; elsewhere an exact 0 counts 1/2.
ReliabilityProfile monte_carlo_profile(std::size_t n, const ChannelModel& ch,
                                       std::uint64_t rounds, std::uint64_t seed,
                                       unsigned workers = 0);

// The N-k least reliable indices under the profile's metric orientation,
// ascending. Ties freeze the lower index first.
std::vector<std::size_t> select_frozen(const ReliabilityProfile& profile,
                                       std::size_t k);

// All indices ordered most reliable first (ties: lower index more reliable).
std::vector<std::size_t> reliability_order(const ReliabilityProfile& profile);

struct SequenceFile {
    std::size_t n_bits = 0;
    Metric metric = Metric::MutualInformation;
    std::string design;
    std::vector<std::size_t> order;  // 0-based, most reliable first
};

// Header `polar-seq v1 N=<n> metric=<m> design=<d>`, then one 1-based index
// per line, most reliable first.
void write_sequence(std::ostream& os, const SequenceFile& seq);
SequenceFile read_sequence(std::istream& is);
SequenceFile sequence_from_profile(const ReliabilityProfile& profile);

// Frozen set = the N-k least reliable tail of a sequence.
std::vector<std::size_t> frozen_from_sequence(const SequenceFile& seq,
                                              std::size_t k);

}  // namespace polar
