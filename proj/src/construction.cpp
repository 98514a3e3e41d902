#include "polar/construction.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "polar/stats.hpp"

namespace polar {

std::string metric_token(Metric m) {
    switch (m) {
        case Metric::MutualInformation: return "mi";
        case Metric::Bhattacharyya: return "z";
        case Metric::BitErrorRate: return "ber";
        case Metric::MeanLlr: return "mllr";
    }
    return "?";
}

Metric metric_from_token(const std::string& token) {
    if (token == "mi") return Metric::MutualInformation;
    if (token == "z") return Metric::Bhattacharyya;
    if (token == "ber") return Metric::BitErrorRate;
    if (token == "mllr") return Metric::MeanLlr;
    throw std::invalid_argument("unknown metric '" + token + "'");
}

template <typename WorseFn, typename BetterFn>
static std::vector<double> doubling_recursion(std::size_t n, double root,
                                              WorseFn worse, BetterFn better) {
    std::vector<double> cur{root}, next;
    while (cur.size() < n) {
        next.resize(2 * cur.size());
        for (std::size_t i = 0; i < cur.size(); ++i) {
            next[2 * i] = worse(cur[i]);
            next[2 * i + 1] = better(cur[i]);
        }
        cur.swap(next);
    }
    return cur;
}

ReliabilityProfile bec_capacity_profile(std::size_t n, double epsilon) {
    if (!is_power_of_two(n) || n < 2)
        throw std::invalid_argument("bec_capacity_profile: N must be 2^n, n >= 1");
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("bec_capacity_profile: epsilon out of [0,1]");
    ReliabilityProfile prof;
    prof.metric = Metric::MutualInformation;
    prof.design = {"bec", epsilon};
    prof.values = doubling_recursion(
        n, 1.0 - epsilon, [](double i) { return i * i; },
        [](double i) { return 2.0 * i - i * i; });
    return prof;
}

ReliabilityProfile bec_bhattacharyya_profile(std::size_t n, double epsilon) {
    if (!is_power_of_two(n) || n < 2)
        throw std::invalid_argument("bec_bhattacharyya_profile: N must be 2^n, n >= 1");
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("bec_bhattacharyya_profile: epsilon out of [0,1]");
    ReliabilityProfile prof;
    prof.metric = Metric::Bhattacharyya;
    prof.design = {"bec", epsilon};
    prof.values = doubling_recursion(
        n, epsilon, [](double z) { return 2.0 * z - z * z; },
        [](double z) { return z * z; });
    return prof;
}

// Three-region approximation. The printed constant pair (a = -0.0564,
// b = 0.48560) only yields a decreasing function when the region-1 exponent
// is read as -(a x^2 + b x) = +0.0564 x^2 - 0.48560 x; that reading is also
// continuous with region 2 at c = 0.867861 to six decimal places. The
// large-x form steps up ~2.5% at the x=10 seam (within the 5% boundary
// tolerance); the inverse is two-valued in that thin sliver.
double gade_phi(double x) {
    if (x < 0.0) throw std::invalid_argument("gade_phi: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (x < 0.867861) return std::exp(0.0564 * x * x - 0.48560 * x);
    if (x < 10.0) return std::exp(-0.4527 * std::pow(x, 0.86) + 0.0218);
    return std::sqrt(M_PI / x) * std::exp(-x / 4.0) * (1.0 - 10.0 / (7.0 * x));
}

double gade_phi_inv(double y) {
    if (!(y > 0.0) || y > 1.0)
        throw std::invalid_argument("gade_phi_inv: y must be in (0,1]");
    if (y >= 1.0) return 0.0;
    double lo = 0.0, hi = 1e6;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (gade_phi(mid) > y) lo = mid;
        else hi = mid;
        if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

ReliabilityProfile gade_profile(std::size_t n, double noise_sigma2) {
    if (!is_power_of_two(n) || n < 2)
        throw std::invalid_argument("gade_profile: N must be 2^n, n >= 1");
    if (!(noise_sigma2 > 0.0))
        throw std::invalid_argument("gade_profile: sigma^2 must be positive");
    ReliabilityProfile prof;
    prof.metric = Metric::MeanLlr;
    prof.design = {"awgn", noise_sigma2};
    prof.values = doubling_recursion(
        n, 2.0 / noise_sigma2,
        [](double e) {
            double z = gade_phi(e);
            // 1 - (1 - z)^2 = z (2 - z), written cancellation-free
            return gade_phi_inv(std::min(1.0, z * (2.0 - z)));
        },
        [](double e) { return 2.0 * e; });
    return prof;
}

double mean_to_ber(double mean) {
    if (mean < 0.0) throw std::invalid_argument("mean_to_ber: mean must be >= 0");
    return 0.5 * std::erfc(std::sqrt(mean / 2.0));
}

// Leaf LLRs of the genie-aided SC in natural order, in place: with an
// all-zero input every partial sum is zero and g reduces to a+b. Min-sum f
// matches how the resulting codes are decoded (and is exact on BEC LLRs).
static void genie_sweep(double* llr, std::size_t m) {
    for (std::size_t half = m >> 1; half >= 1; half >>= 1) {
        for (std::size_t base = 0; base < m; base += 2 * half) {
            for (std::size_t i = base; i < base + half; ++i) {
                double a = llr[i], b = llr[i + half];
                llr[i] = f_minsum(a, b);
                llr[i + half] = a + b;
            }
        }
    }
}

ReliabilityProfile monte_carlo_profile(std::size_t n, const ChannelModel& ch,
                                       std::uint64_t rounds, std::uint64_t seed,
                                       unsigned workers) {
    if (!is_power_of_two(n) || n < 2)
        throw std::invalid_argument("monte_carlo_profile: N must be 2^n, n >= 1");
    if (rounds == 0) throw std::invalid_argument("monte_carlo_profile: rounds must be >= 1");
    ch.validate();
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    bool bec = ch.kind == ChannelKind::Bec;

    // tallies in half-units so the sums stay integral
    std::vector<std::vector<std::uint64_t>> partial(workers,
                                                    std::vector<std::uint64_t>(n, 0));
    auto work = [&](unsigned w) {
        BitVector zero(n, 0);
        std::vector<std::uint64_t>& tally = partial[w];
        for (std::uint64_t r = w; r < rounds; r += workers) {
            Rng rng(derive_seed(seed, 0, r));
            std::vector<double> obs = transmit(zero, ch, rng);
            LlrVector llr = demodulate_llr(obs, ch);
            genie_sweep(llr.values.data(), n);
            for (std::size_t i = 0; i < n; ++i) {
                double v = llr.values[i];
                if (v < 0.0) tally[i] += 2;
                else if (v == 0.0) tally[i] += bec ? 2 : 1;
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }

    ReliabilityProfile prof;
    prof.metric = Metric::BitErrorRate;
    prof.design = {channel_token(ch.kind), ch.param};
    prof.values.resize(n);
    prof.ci.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t halves = 0;
        for (unsigned w = 0; w < workers; ++w) halves += partial[w][i];
        prof.values[i] = static_cast<double>(halves) / (2.0 * static_cast<double>(rounds));
        prof.ci[i] = wilson_from_rate(prof.values[i], static_cast<double>(rounds));
    }
    return prof;
}

// true when index a is strictly less reliable than b
static bool less_reliable(const ReliabilityProfile& p, std::size_t a, std::size_t b) {
    double va = p.values[a], vb = p.values[b];
    switch (p.metric) {
        case Metric::MutualInformation:
        case Metric::MeanLlr:
            return va < vb;
        case Metric::Bhattacharyya:
        case Metric::BitErrorRate:
            return va > vb;
    }
    return false;
}

static std::vector<std::size_t> ascending_reliability(const ReliabilityProfile& p) {
    std::vector<std::size_t> idx(p.values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (less_reliable(p, a, b)) return true;
        if (less_reliable(p, b, a)) return false;
        return a < b;  // ties: lower index frozen first
    });
    return idx;
}

std::vector<std::size_t> select_frozen(const ReliabilityProfile& profile,
                                       std::size_t k) {
    std::size_t n = profile.values.size();
    if (k > n) throw std::invalid_argument("select_frozen: k > N");
    std::vector<std::size_t> order = ascending_reliability(profile);
    std::vector<std::size_t> frozen(order.begin(), order.begin() + (n - k));
    std::sort(frozen.begin(), frozen.end());
    return frozen;
}

std::vector<std::size_t> reliability_order(const ReliabilityProfile& profile) {
    std::vector<std::size_t> order = ascending_reliability(profile);
    std::reverse(order.begin(), order.end());
    return order;
}

void write_sequence(std::ostream& os, const SequenceFile& seq) {
    os << "polar-seq v1 N=" << seq.n_bits << " metric=" << metric_token(seq.metric)
       << " design=" << seq.design << "\n";
    for (std::size_t i : seq.order) os << i + 1 << "\n";
}

SequenceFile read_sequence(std::istream& is) {
    std::string header;
    if (!std::getline(is, header))
        throw std::invalid_argument("sequence file: missing header");
    std::istringstream hs(header);
    std::string magic, ver;
    hs >> magic >> ver;
    if (magic != "polar-seq" || ver != "v1")
        throw std::invalid_argument("sequence file: bad header");
    SequenceFile seq;
    std::string field;
    while (hs >> field) {
        auto eq = field.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("sequence file: malformed header field");
        std::string key = field.substr(0, eq), val = field.substr(eq + 1);
        if (key == "N") seq.n_bits = std::stoull(val);
        else if (key == "metric") seq.metric = metric_from_token(val);
        else if (key == "design") seq.design = val;
        else throw std::invalid_argument("sequence file: unknown header key '" + key + "'");
    }
    if (!is_power_of_two(seq.n_bits) || seq.n_bits < 2)
        throw std::invalid_argument("sequence file: bad N");
    std::vector<bool> seen(seq.n_bits, false);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::size_t idx = std::stoull(line);
        if (idx < 1 || idx > seq.n_bits)
            throw std::invalid_argument("sequence file: index out of range");
        if (seen[idx - 1])
            throw std::invalid_argument("sequence file: duplicate index");
        seen[idx - 1] = true;
        seq.order.push_back(idx - 1);
    }
    if (seq.order.size() != seq.n_bits)
        throw std::invalid_argument("sequence file: not a permutation of [1,N]");
    return seq;
}

SequenceFile sequence_from_profile(const ReliabilityProfile& profile) {
    SequenceFile seq;
    seq.n_bits = profile.values.size();
    seq.metric = profile.metric;
    std::ostringstream d;
    d << profile.design.channel << ":" << profile.design.value;
    seq.design = d.str();
    seq.order = reliability_order(profile);
    return seq;
}

std::vector<std::size_t> frozen_from_sequence(const SequenceFile& seq,
                                              std::size_t k) {
    if (k > seq.n_bits) throw std::invalid_argument("frozen_from_sequence: k > N");
    std::vector<std::size_t> frozen(seq.order.begin() + k, seq.order.end());
    std::sort(frozen.begin(), frozen.end());
    return frozen;
}

}  // namespace polar
