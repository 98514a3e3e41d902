#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polar/llr_ops.hpp"
#include "polar/quantum.hpp"

using namespace polar;

namespace {

// Exact genie bit-channel error probabilities over a BSC by enumerating all
// error patterns. `transposed` evaluates the mirrored-kernel recursion.
std::vector<double> exact_genie_profile(std::size_t n, double q, bool transposed) {
    double mag = std::log((1.0 - q) / q);
    std::vector<double> prof(n, 0.0);
    for (std::size_t pat = 0; pat < (std::size_t{1} << n); ++pat) {
        double prob = 1.0;
        std::vector<double> llr(n);
        for (std::size_t j = 0; j < n; ++j) {
            bool flip = (pat >> j) & 1;
            prob *= flip ? q : 1.0 - q;
            llr[j] = flip ? -mag : mag;
        }
        // genie sweep: f on one half, sum on the other
        for (std::size_t half = n >> 1; half >= 1; half >>= 1) {
            for (std::size_t base = 0; base < n; base += 2 * half) {
                for (std::size_t i = base; i < base + half; ++i) {
                    double a = llr[i], b = llr[i + half];
                    if (!transposed) {
                        llr[i] = f_minsum(a, b);
                        llr[i + half] = a + b;
                    } else {
                        llr[i + half] = f_minsum(a, b);
                        llr[i] = a + b;
                    }
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (llr[i] < 0.0) prof[i] += prob;
            else if (llr[i] == 0.0) prof[i] += 0.5 * prob;
        }
    }
    return prof;
}

PauliErrorVector single_error(std::size_t n, std::size_t q, Pauli kind) {
    PauliErrorVector e;
    e.x_mask.assign(n, 0);
    e.z_mask.assign(n, 0);
    if (kind == Pauli::X || kind == Pauli::Y) e.x_mask[q] = 1;
    if (kind == Pauli::Z || kind == Pauli::Y) e.z_mask[q] = 1;
    return e;
}

}  // namespace

TEST_CASE("binary to pauli mapping") {
    CHECK(pauli_from_masks(0, 0) == Pauli::I);
    CHECK(pauli_from_masks(1, 0) == Pauli::X);
    CHECK(pauli_from_masks(0, 1) == Pauli::Z);
    CHECK(pauli_from_masks(1, 1) == Pauli::Y);
    CHECK(pauli_label(Pauli::Y) == 'Y');
}

TEST_CASE("sample_pauli marginals") {
    Rng rng(1);
    std::size_t n = 1000000;
    PauliErrorVector clean = sample_pauli(16, 0.0, rng);
    CHECK(std::count(clean.x_mask.begin(), clean.x_mask.end(), 1) == 0);
    CHECK(std::count(clean.z_mask.begin(), clean.z_mask.end(), 1) == 0);

    double p = 0.12;
    PauliErrorVector e = sample_pauli(n, p, rng);
    std::size_t x_hits = 0, y_hits = 0, z_hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (e.x_mask[i]) ++x_hits;
        if (e.x_mask[i] && e.z_mask[i]) ++y_hits;
        if (e.z_mask[i]) ++z_hits;
    }
    double sig_marg = std::sqrt((2 * p / 3) * (1 - 2 * p / 3) / n);
    double sig_y = std::sqrt((p / 3) * (1 - p / 3) / n);
    CHECK(std::fabs(double(x_hits) / n - 2 * p / 3) < 3 * sig_marg);
    CHECK(std::fabs(double(z_hits) / n - 2 * p / 3) < 3 * sig_marg);
    CHECK(std::fabs(double(y_hits) / n - p / 3) < 3 * sig_y);
}

TEST_CASE("classification: perfect channel puts everything in F_c") {
    QuantumCodeSpec spec = classify_channels(16, 0.0, ClassifyThreshold{0.01}, 2000, 1);
    CHECK(spec.f_c.size() == 16);
    CHECK(spec.ebit_count() == 0);
}

TEST_CASE("classification partitions the indices for random draws") {
    Rng rng(2);
    for (int t = 0; t < 100; ++t) {
        std::size_t n = std::size_t{1} << (2 + rng.next_u64() % 4);  // 4..32
        double p = 0.02 + 0.5 * rng.uniform();
        QuantumCodeSpec spec;
        if (rng.bit()) {
            spec = classify_channels(n, p, ClassifyThreshold{0.2 * rng.uniform()}, 2000,
                                     t + 1);
        } else {
            std::size_t k = rng.next_u64() % (n / 2);
            std::size_t c = rng.next_u64() % (n - k);
            spec = classify_channels(n, p, ClassifyTarget{k, c}, 2000, t + 1);
            CHECK(spec.f_c.size() == k);
            CHECK(spec.f_bp.size() == c);
        }
        CHECK_NOTHROW(spec.validate());
        CHECK(spec.f_c.size() + spec.f_p.size() + spec.f_b.size() + spec.f_bp.size() ==
              n);
    }
    CHECK_THROWS_AS(classify_channels(8, 0.9, ClassifyThreshold{0.1}, 100, 1),
                    std::invalid_argument);
}

TEST_CASE("phase profile is the mirrored bit profile, exactly") {
    // independent route: exhaustive genie profiles for G and G^T at N=4
    for (double q : {0.05, 0.2, 0.33}) {
        std::vector<double> fwd = exact_genie_profile(4, q, false);
        std::vector<double> rev = exact_genie_profile(4, q, true);
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(rev[i] == doctest::Approx(fwd[3 - i]).epsilon(1e-12));
    }
}

TEST_CASE("extract_syndromes: zero error, matrix rows, CSS separation") {
    QuantumCodeSpec spec = classify_channels(8, 0.06, ClassifyTarget{2, 2}, 50000, 5);
    PauliErrorVector nothing = single_error(8, 0, Pauli::I);
    SyndromePair zero = extract_syndromes(nothing, spec);
    CHECK(std::count(zero.s_x.begin(), zero.s_x.end(), 1) == 0);
    CHECK(std::count(zero.s_z.begin(), zero.s_z.end(), 1) == 0);
    for (auto [b, p] : zero.s_y) {
        CHECK(b == 0);
        CHECK(p == 0);
    }

    // single X on qubit q: syndrome bits are row q of G at the frozen columns
    for (std::size_t q = 0; q < 8; ++q) {
        PauliErrorVector e = single_error(8, q, Pauli::X);
        SyndromePair syn = extract_syndromes(e, spec);
        BitVector unit(8, 0);
        unit[q] = 1;
        BitVector row = polar_transform(unit);
        for (std::size_t j = 0; j < spec.f_b.size(); ++j)
            CHECK(syn.s_x[j] == row[spec.f_b[j]]);
        for (std::size_t j = 0; j < spec.f_bp.size(); ++j)
            CHECK(syn.s_y[j].first == row[spec.f_bp[j]]);
        // X errors never touch the phase components
        CHECK(std::count(syn.s_z.begin(), syn.s_z.end(), 1) == 0);
        for (auto [b, ph] : syn.s_y) CHECK(ph == 0);
    }
    for (std::size_t q = 0; q < 8; ++q) {
        PauliErrorVector e = single_error(8, q, Pauli::Z);
        SyndromePair syn = extract_syndromes(e, spec);
        BitVector unit(8, 0);
        unit[q] = 1;
        BitVector row = polar_transform_transposed(unit);
        for (std::size_t j = 0; j < spec.f_p.size(); ++j)
            CHECK(syn.s_z[j] == row[spec.f_p[j]]);
        CHECK(std::count(syn.s_x.begin(), syn.s_x.end(), 1) == 0);
    }
}

TEST_CASE("syndrome decode: zero syndrome gives zero error") {
    std::vector<std::size_t> frozen{0, 1, 2, 4};
    BitVector zero_syn(4, 0);
    BitVector est = syndrome_sc_decode(zero_syn, frozen, 8, 0.05);
    CHECK(std::count(est.begin(), est.end(), 1) == 0);
    BitVector est_t = syndrome_sc_decode_transposed(zero_syn, {3, 5, 6, 7}, 8, 0.05);
    CHECK(std::count(est_t.begin(), est_t.end(), 1) == 0);

    CHECK_THROWS_AS(syndrome_sc_decode(zero_syn, frozen, 8, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(syndrome_sc_decode(zero_syn, frozen, 8, 0.5), std::invalid_argument);
}

TEST_CASE("syndrome decode recovers every single error exactly at N=8") {
    // the worked frozen set {1,2,3,5} spans a distance-4 syndrome code on
    // either side, so weight-1 patterns are unique coset leaders
    std::vector<std::size_t> frozen{0, 1, 2, 4};
    std::vector<std::size_t> mirrored{3, 5, 6, 7};
    double pm = 2.0 * 0.01 / 3.0;
    for (std::size_t q = 0; q < 8; ++q) {
        BitVector e(8, 0);
        e[q] = 1;
        BitVector ue = polar_transform(e);
        BitVector syn;
        for (auto i : frozen) syn.push_back(ue[i]);
        CHECK(syndrome_sc_decode(syn, frozen, 8, pm) == e);

        BitVector uez = polar_transform_transposed(e);
        BitVector syn_t;
        for (auto i : mirrored) syn_t.push_back(uez[i]);
        CHECK(syndrome_sc_decode_transposed(syn_t, mirrored, 8, pm) == e);
    }
}

TEST_CASE("syndrome decode is maximum likelihood on low-weight cosets") {
    // brute-force cross-check: the decoded pattern carries the minimum
    // weight among all patterns of weight <= 2 with the same syndrome
    std::vector<std::size_t> frozen{0, 1, 2, 4};
    double pm = 2.0 * 0.01 / 3.0;
    Rng rng(6);
    for (int t = 0; t < 64; ++t) {
        BitVector e(8, 0);
        e[rng.next_u64() % 8] = 1;
        if (rng.bit()) e[rng.next_u64() % 8] ^= 1;
        BitVector ue = polar_transform(e);
        BitVector syn;
        for (auto i : frozen) syn.push_back(ue[i]);
        BitVector est = syndrome_sc_decode(syn, frozen, 8, pm);
        int est_w = std::count(est.begin(), est.end(), 1);
        int best = 99;
        for (std::size_t pat = 0; pat < 256; ++pat) {
            BitVector cand(8);
            int w = 0;
            for (std::size_t j = 0; j < 8; ++j) {
                cand[j] = (pat >> j) & 1;
                w += cand[j];
            }
            if (w > 2) continue;
            BitVector uc = polar_transform(cand);
            bool hit = true;
            for (std::size_t j = 0; j < frozen.size(); ++j)
                if (uc[frozen[j]] != syn[j]) {
                    hit = false;
                    break;
                }
            if (hit) best = std::min(best, w);
        }
        if (best <= 2) CHECK(est_w <= best);
    }
}

TEST_CASE("full pipeline corrects every single-qubit error at N=64") {
    QuantumCodeSpec spec = classify_channels(64, 0.06, ClassifyTarget{16, 8}, 100000, 3);
    double pm = 2.0 * 0.06 / 3.0;
    std::vector<std::size_t> bitf = spec.bit_frozen();
    std::vector<std::size_t> phf = spec.phase_frozen();
    for (std::size_t q = 0; q < 64; ++q) {
        for (Pauli kind : {Pauli::X, Pauli::Z, Pauli::Y}) {
            PauliErrorVector e = single_error(64, q, kind);
            BitVector ux = polar_transform(e.x_mask);
            BitVector uz = polar_transform_transposed(e.z_mask);
            BitVector sb, sp;
            for (auto i : bitf) sb.push_back(ux[i]);
            for (auto i : phf) sp.push_back(uz[i]);
            BitVector uxh = polar_transform(syndrome_sc_decode(sb, bitf, 64, pm));
            BitVector uzh = polar_transform_transposed(
                syndrome_sc_decode_transposed(sp, phf, 64, pm));
            for (auto i : spec.f_c) {
                REQUIRE(uxh[i] == ux[i]);
                REQUIRE(uzh[i] == uz[i]);
            }
        }
    }
}

TEST_CASE("decoded errors re-extract to the observed syndromes") {
    QuantumCodeSpec spec = classify_channels(32, 0.08, ClassifyTarget{8, 4}, 50000, 7);
    std::vector<std::size_t> bitf = spec.bit_frozen();
    std::vector<std::size_t> phf = spec.phase_frozen();
    double pm = 2.0 * 0.08 / 3.0;
    Rng rng(8);
    for (int t = 0; t < 500; ++t) {
        PauliErrorVector e = sample_pauli(32, 0.08, rng);
        BitVector ux = polar_transform(e.x_mask);
        BitVector uz = polar_transform_transposed(e.z_mask);
        BitVector sb, sp;
        for (auto i : bitf) sb.push_back(ux[i]);
        for (auto i : phf) sp.push_back(uz[i]);
        BitVector ex_hat = syndrome_sc_decode(sb, bitf, 32, pm);
        BitVector ez_hat = syndrome_sc_decode_transposed(sp, phf, 32, pm);
        BitVector uxh = polar_transform(ex_hat);
        BitVector uzh = polar_transform_transposed(ez_hat);
        for (std::size_t j = 0; j < bitf.size(); ++j) REQUIRE(uxh[bitf[j]] == sb[j]);
        for (std::size_t j = 0; j < phf.size(); ++j) REQUIRE(uzh[phf[j]] == sp[j]);
    }
}

TEST_CASE("x-side decoding ignores the z mask and vice versa") {
    QuantumCodeSpec spec = classify_channels(16, 0.1, ClassifyTarget{4, 2}, 20000, 9);
    Rng rng(10);
    PauliErrorVector e = sample_pauli(16, 0.15, rng);
    SyndromePair syn_a = extract_syndromes(e, spec);
    PauliErrorVector e2 = e;
    for (auto& b : e2.z_mask) b = rng.bit();  // scramble phase errors
    SyndromePair syn_b = extract_syndromes(e2, spec);
    CHECK(syn_a.s_x == syn_b.s_x);
    for (std::size_t j = 0; j < syn_a.s_y.size(); ++j)
        CHECK(syn_a.s_y[j].first == syn_b.s_y[j].first);
}

TEST_CASE("logical error simulation basics") {
    QuantumCodeSpec spec = classify_channels(16, 0.05, ClassifyTarget{4, 2}, 20000, 11);
    LogicalErrorRecord clean = simulate_logical_error_rate(spec, 0.0, 500, 1);
    CHECK(clean.logical_errors == 0);
    CHECK(clean.rate == 0.0);
    CHECK(clean.ebits == 2);
    CHECK_THROWS_AS(simulate_logical_error_rate(spec, 0.05, 0, 1), std::invalid_argument);

    LogicalErrorRecord rec = simulate_logical_error_rate(spec, 0.05, 2000, 12);
    CHECK(rec.ci_low <= rec.rate);
    CHECK(rec.rate <= rec.ci_high);
    CHECK(rec.blocks == 2000);

    // worker-count independence
    LogicalErrorRecord w1 = simulate_logical_error_rate(spec, 0.05, 1000, 13, 1);
    LogicalErrorRecord w3 = simulate_logical_error_rate(spec, 0.05, 1000, 13, 3);
    CHECK(w1.logical_errors == w3.logical_errors);
}

TEST_CASE("ebit fraction grows with the depolarizing probability") {
    // channels bad in both bases appear once the noise floods both the
    // profile head and its mirror
    double threshold = 0.02;
    std::size_t prev_c = 0;
    for (double p : {0.01, 0.04, 0.07, 0.10, 0.13}) {
        QuantumCodeSpec spec =
            classify_channels(64, p, ClassifyThreshold{threshold}, 50000, 21);
        CHECK(spec.ebit_count() >= prev_c);
        prev_c = spec.ebit_count();
    }
    CHECK(prev_c > 0);
}

TEST_CASE("quantum spec serialization round-trip") {
    QuantumCodeSpec spec = classify_channels(16, 0.07, ClassifyTarget{4, 3}, 20000, 15);
    std::ostringstream os;
    write_quantum_spec(os, spec);
    std::istringstream is(os.str());
    QuantumCodeSpec back = read_quantum_spec(is);
    CHECK(back.n_qubits == spec.n_qubits);
    CHECK(back.f_c == spec.f_c);
    CHECK(back.f_p == spec.f_p);
    CHECK(back.f_b == spec.f_b);
    CHECK(back.f_bp == spec.f_bp);

    QuantumCodeSpec bad;
    bad.n_qubits = 8;
    bad.f_c = {0, 1};
    bad.f_p = {1, 2};  // overlap
    bad.f_b = {3, 4, 5};
    bad.f_bp = {6, 7};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
