#include "polar/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "polar/construction.hpp"
#include "polar/decoders.hpp"
#include "polar/stats.hpp"

namespace polar {

Pauli pauli_from_masks(Bit x, Bit z) {
    if (x && z) return Pauli::Y;
    if (x) return Pauli::X;
    if (z) return Pauli::Z;
    return Pauli::I;
}

char pauli_label(Pauli p) {
    switch (p) {
        case Pauli::I: return 'I';
        case Pauli::X: return 'X';
        case Pauli::Z: return 'Z';
        case Pauli::Y: return 'Y';
    }
    return '?';
}

std::vector<std::size_t> QuantumCodeSpec::bit_frozen() const {
    std::vector<std::size_t> s = f_b;
    s.insert(s.end(), f_bp.begin(), f_bp.end());
    std::sort(s.begin(), s.end());
    return s;
}

std::vector<std::size_t> QuantumCodeSpec::phase_frozen() const {
    std::vector<std::size_t> s = f_p;
    s.insert(s.end(), f_bp.begin(), f_bp.end());
    std::sort(s.begin(), s.end());
    return s;
}

void QuantumCodeSpec::validate() const {
    if (!is_power_of_two(n_qubits) || n_qubits < 2)
        throw std::invalid_argument("quantum spec: N must be 2^n, n >= 1");
    if (f_c.size() + f_p.size() + f_b.size() + f_bp.size() != n_qubits)
        throw std::invalid_argument("quantum spec: sets do not partition [1,N]");
    std::vector<int> hits(n_qubits, 0);
    for (const auto* set : {&f_c, &f_p, &f_b, &f_bp})
        for (std::size_t i : *set) {
            if (i >= n_qubits)
                throw std::invalid_argument("quantum spec: index out of range");
            ++hits[i];
        }
    for (int h : hits)
        if (h != 1) throw std::invalid_argument("quantum spec: sets overlap or miss");
}

QuantumCodeSpec classify_channels(std::size_t n, double p, const ClassifyRule& rule,
                                  std::uint64_t mc_rounds, std::uint64_t mc_seed,
                                  unsigned workers) {
    if (p < 0.0 || p > 0.75)
        throw std::invalid_argument("classify_channels: p out of [0, 3/4]");
    ChannelModel bsc{ChannelKind::Bsc, 2.0 * p / 3.0};
    ReliabilityProfile bit_prof =
        monte_carlo_profile(n, bsc, mc_rounds, mc_seed, workers);
    const std::vector<double>& ber = bit_prof.values;

    QuantumCodeSpec spec;
    spec.n_qubits = n;

    if (const auto* th = std::get_if<ClassifyThreshold>(&rule)) {
        for (std::size_t i = 0; i < n; ++i) {
            bool good_bit = ber[i] <= th->max_ber;
            bool good_phase = ber[n - 1 - i] <= th->max_ber;
            if (good_bit && good_phase) spec.f_c.push_back(i);
            else if (good_bit) spec.f_p.push_back(i);
            else if (good_phase) spec.f_b.push_back(i);
            else spec.f_bp.push_back(i);
        }
        spec.validate();
        return spec;
    }

    const auto& tgt = std::get<ClassifyTarget>(rule);
    if (tgt.k + tgt.c > n)
        throw std::invalid_argument("classify_channels: k + c > N");

    // rank 0 = most reliable; phase rank is the mirrored bit rank
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ber[a] != ber[b]) return ber[a] < ber[b];
        return a < b;
    });
    std::vector<std::size_t> bit_rank(n), phase_rank(n);
    for (std::size_t r = 0; r < n; ++r) bit_rank[order[r]] = r;
    for (std::size_t i = 0; i < n; ++i) phase_rank[i] = bit_rank[n - 1 - i];

    // F_c: best k by the worse of the two ranks; F_BP: worst c of the rest
    // by the better of the two ranks; remainder splits by side rank.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        std::size_t ka = std::max(bit_rank[a], phase_rank[a]);
        std::size_t kb = std::max(bit_rank[b], phase_rank[b]);
        if (ka != kb) return ka < kb;
        return a < b;
    });
    std::vector<bool> placed(n, false);
    for (std::size_t j = 0; j < tgt.k; ++j) {
        spec.f_c.push_back(idx[j]);
        placed[idx[j]] = true;
    }
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < n; ++i)
        if (!placed[i]) rest.push_back(i);
    std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
        std::size_t ka = std::min(bit_rank[a], phase_rank[a]);
        std::size_t kb = std::min(bit_rank[b], phase_rank[b]);
        if (ka != kb) return ka > kb;  // worst better-side first
        return a < b;
    });
    for (std::size_t j = 0; j < tgt.c; ++j) {
        spec.f_bp.push_back(rest[j]);
        placed[rest[j]] = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (placed[i]) continue;
        if (bit_rank[i] < phase_rank[i]) spec.f_p.push_back(i);
        else spec.f_b.push_back(i);
    }
    std::sort(spec.f_c.begin(), spec.f_c.end());
    std::sort(spec.f_bp.begin(), spec.f_bp.end());
    spec.validate();
    return spec;
}

PauliErrorVector sample_pauli(std::size_t n, double p, Rng& rng) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("sample_pauli: p out of [0,1]");
    PauliErrorVector err;
    err.x_mask.assign(n, 0);
    err.z_mask.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double u = rng.uniform();
        if (u < p / 3.0) err.x_mask[i] = 1;                        // X
        else if (u < 2.0 * p / 3.0) err.x_mask[i] = err.z_mask[i] = 1;  // Y
        else if (u < p) err.z_mask[i] = 1;                         // Z
    }
    return err;
}

SyndromePair extract_syndromes(const PauliErrorVector& err,
                               const QuantumCodeSpec& spec) {
    spec.validate();
    if (err.x_mask.size() != spec.n_qubits || err.z_mask.size() != spec.n_qubits)
        throw std::invalid_argument("extract_syndromes: mask length mismatch");
    BitVector ux = polar_transform(err.x_mask);
    BitVector uz = polar_transform_transposed(err.z_mask);
    SyndromePair syn;
    for (std::size_t i : spec.f_b) syn.s_x.push_back(ux[i]);
    for (std::size_t i : spec.f_p) syn.s_z.push_back(uz[i]);
    for (std::size_t i : spec.f_bp) syn.s_y.push_back({ux[i], uz[i]});
    return syn;
}

BitVector syndrome_sc_decode(const BitVector& synd,
                             const std::vector<std::size_t>& frozen_set,
                             std::size_t n, double p_marginal) {
    if (!(p_marginal > 0.0) || !(p_marginal < 0.5))
        throw std::invalid_argument("syndrome_sc_decode: p_marginal must be in (0, 0.5)");
    if (synd.size() != frozen_set.size())
        throw std::invalid_argument("syndrome_sc_decode: syndrome length mismatch");
    CodeSpec spec;
    spec.n_bits = n;
    spec.frozen_set = frozen_set;
    spec.k_info = n - frozen_set.size();
    spec.frozen_values = synd;
    spec.validate();
    LlrVector llr;
    llr.values.assign(n, std::log((1.0 - p_marginal) / p_marginal));
    DecodeOutput out = sc_decode(llr, spec, OpMode::Exact);
    return out.codeword_hat;  // transform of the decoded u-vector
}

BitVector syndrome_sc_decode_transposed(const BitVector& synd,
                                        const std::vector<std::size_t>& frozen_set,
                                        std::size_t n, double p_marginal) {
    // G^T equals G conjugated by full index reversal, so mirror the frozen
    // set, decode with G, and mirror the estimate back.
    std::vector<std::size_t> mirrored(frozen_set.size());
    for (std::size_t j = 0; j < frozen_set.size(); ++j)
        mirrored[j] = n - 1 - frozen_set[j];
    std::reverse(mirrored.begin(), mirrored.end());
    BitVector synd_m(synd.rbegin(), synd.rend());
    if (!std::is_sorted(mirrored.begin(), mirrored.end()))
        throw std::invalid_argument("syndrome_sc_decode_transposed: frozen set not ascending");
    BitVector est = syndrome_sc_decode(synd_m, mirrored, n, p_marginal);
    return BitVector(est.rbegin(), est.rend());
}

LogicalErrorRecord simulate_logical_error_rate(const QuantumCodeSpec& spec, double p,
                                               std::uint64_t blocks, std::uint64_t seed,
                                               unsigned workers) {
    spec.validate();
    if (blocks == 0) throw std::invalid_argument("simulate: blocks must be >= 1");
    if (p < 0.0 || p > 0.75) throw std::invalid_argument("simulate: p out of [0, 3/4]");
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());

    std::size_t n = spec.n_qubits;
    std::vector<std::size_t> bit_frozen = spec.bit_frozen();
    std::vector<std::size_t> phase_frozen = spec.phase_frozen();
    double pm = 2.0 * p / 3.0;

    // p = 0 transmits error-free; no decoding needed
    if (pm <= 0.0) {
        LogicalErrorRecord rec;
        rec.p = p;
        rec.blocks = blocks;
        rec.ebits = spec.ebit_count();
        rec.seed = seed;
        auto [lo, hi] = wilson_interval(0, blocks);
        rec.ci_low = lo;
        rec.ci_high = hi;
        return rec;
    }

    std::vector<std::uint64_t> fails(workers, 0);
    auto work = [&](unsigned w) {
        BitVector synd_bit(bit_frozen.size()), synd_phase(phase_frozen.size());
        for (std::uint64_t b = w; b < blocks; b += workers) {
            Rng rng(derive_seed(seed, 0, b));
            PauliErrorVector err = sample_pauli(n, p, rng);
            BitVector ux = polar_transform(err.x_mask);
            BitVector uz = polar_transform_transposed(err.z_mask);
            for (std::size_t j = 0; j < bit_frozen.size(); ++j)
                synd_bit[j] = ux[bit_frozen[j]];
            for (std::size_t j = 0; j < phase_frozen.size(); ++j)
                synd_phase[j] = uz[phase_frozen[j]];
            BitVector ex_hat = syndrome_sc_decode(synd_bit, bit_frozen, n, pm);
            BitVector ez_hat =
                syndrome_sc_decode_transposed(synd_phase, phase_frozen, n, pm);
            BitVector ux_hat = polar_transform(ex_hat);
            BitVector uz_hat = polar_transform_transposed(ez_hat);
            bool fail = false;
            for (std::size_t i : spec.f_c)
                if (ux_hat[i] != ux[i] || uz_hat[i] != uz[i]) {
                    fail = true;
                    break;
                }
            if (fail) ++fails[w];
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }

    LogicalErrorRecord rec;
    rec.p = p;
    rec.blocks = blocks;
    rec.logical_errors = std::accumulate(fails.begin(), fails.end(), std::uint64_t{0});
    rec.rate = static_cast<double>(rec.logical_errors) / static_cast<double>(blocks);
    auto [lo, hi] = wilson_interval(rec.logical_errors, blocks);
    rec.ci_low = lo;
    rec.ci_high = hi;
    rec.ebits = spec.ebit_count();
    rec.seed = seed;
    return rec;
}

static void write_set(std::ostream& os, const char* name,
                      const std::vector<std::size_t>& set) {
    os << name;
    for (std::size_t i : set) os << ' ' << i + 1;
    os << "\n";
}

void write_quantum_spec(std::ostream& os, const QuantumCodeSpec& spec) {
    spec.validate();
    os << "quantum-polar v1\n";
    os << "N " << spec.n_qubits << "\n";
    write_set(os, "Fc", spec.f_c);
    write_set(os, "FP", spec.f_p);
    write_set(os, "FB", spec.f_b);
    write_set(os, "FBP", spec.f_bp);
}

QuantumCodeSpec read_quantum_spec(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header != "quantum-polar v1")
        throw std::invalid_argument("quantum spec: bad header");
    QuantumCodeSpec spec;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        std::vector<std::size_t>* dst = nullptr;
        if (key == "N") {
            ls >> spec.n_qubits;
            continue;
        } else if (key == "Fc") dst = &spec.f_c;
        else if (key == "FP") dst = &spec.f_p;
        else if (key == "FB") dst = &spec.f_b;
        else if (key == "FBP") dst = &spec.f_bp;
        else throw std::invalid_argument("quantum spec: unknown key '" + key + "'");
        std::size_t idx;
        while (ls >> idx) {
            if (idx == 0) throw std::invalid_argument("quantum spec: indices are 1-based");
            dst->push_back(idx - 1);
        }
    }
    spec.validate();
    return spec;
}

}  // namespace polar
