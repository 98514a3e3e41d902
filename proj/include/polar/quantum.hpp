#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <variant>
#include <vector>

#include "polar/core.hpp"
#include "polar/rng.hpp"

namespace polar {

// n-qubit Pauli error as paired masks: X sets x_mask, Z sets z_mask,
// Y sets both.
struct PauliErrorVector {
    BitVector x_mask;
    BitVector z_mask;
};

enum class Pauli { I, X, Z, Y };
Pauli pauli_from_masks(Bit x, Bit z);
char pauli_label(Pauli p);

// Four-way channel classification under the depolarizing-as-two-BSC model.
//   F_c : good in both bases (information qubits)
//   F_P : good bit-only, frozen in the Hadamard basis
//   F_B : good phase-only, frozen in the computational basis
//   F_BP: bad in both, frozen via pre-shared ebits (c = |F_BP|)
struct QuantumCodeSpec {
    std::size_t n_qubits = 0;
    std::vector<std::size_t> f_c, f_p, f_b, f_bp;  // 0-based, ascending

    std::size_t ebit_count() const { return f_bp.size(); }
    std::vector<std::size_t> bit_frozen() const;    // F_B u F_BP
    std::vector<std::size_t> phase_frozen() const;  // F_P u F_BP
    void validate() const;  // the four sets must partition [0, N)
};

// Classification driver: either a reliability threshold on the bit-channel
// BER (positions at or below it count as good) or explicit target sizes
// (k, c) resolved by rank.
struct ClassifyThreshold {
    double max_ber;
};
struct ClassifyTarget {
    std::size_t k;
    std::size_t c;
};
using ClassifyRule = std::variant<ClassifyThreshold, ClassifyTarget>;

// Bit-flip reliabilities come from the genie Monte-Carlo profile of
// BSC(2p/3); the phase-flip profile is the same profile mirrored
// index-wise (kernel G vs G^T polarize in opposite directions).
QuantumCodeSpec classify_channels(std::size_t n, double p, const ClassifyRule& rule,
                                  std::uint64_t mc_rounds = 100000,
                                  std::uint64_t mc_seed = 1, unsigned workers = 0);

// I with probability 1-p; X, Y, Z with p/3 each.
PauliErrorVector sample_pauli(std::size_t n, double p, Rng& rng);

// Syndrome outcomes, named after the measurements that produce them:
//   s_x : bit-flip outcomes on F_B   (computational-basis measurements)
//   s_z : phase-flip outcomes on F_P (Hadamard-basis measurements)
//   s_y : per-ebit (bit, phase) outcome pairs on F_BP (XX / ZZ stabilizers)
struct SyndromePair {
    BitVector s_x;
    BitVector s_z;
    std::vector<std::pair<Bit, Bit>> s_y;
};

// Classically: propagate x_mask through G, z_mask through G^T, read the
// frozen positions.
SyndromePair extract_syndromes(const PauliErrorVector& err,
                               const QuantumCodeSpec& spec);

// Most likely error pattern consistent with a syndrome: SC over uniform
// channel-error LLRs ln((1-p_m)/p_m) with the frozen positions pinned to
// the syndrome bits; returns the transform of the decoded u-vector.
// p_marginal must lie strictly inside (0, 0.5).
BitVector syndrome_sc_decode(const BitVector& synd,
                             const std::vector<std::size_t>& frozen_set,
                             std::size_t n, double p_marginal);

// Same decoder against the transposed transform (phase side): realized by
// index mirroring, i <-> N-1-i.
BitVector syndrome_sc_decode_transposed(const BitVector& synd,
                                        const std::vector<std::size_t>& frozen_set,
                                        std::size_t n, double p_marginal);

struct LogicalErrorRecord {
    double p = 0.0;
    std::uint64_t blocks = 0;
    std::uint64_t logical_errors = 0;
    double rate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t ebits = 0;
    std::uint64_t seed = 0;
};

// Per block: sample a Pauli error, extract syndromes, run the two syndrome
// decoders, compare true and estimated u-domain masks on F_c. Any mismatch
// in either mask is a logical error.
LogicalErrorRecord simulate_logical_error_rate(const QuantumCodeSpec& spec, double p,
                                               std::uint64_t blocks, std::uint64_t seed,
                                               unsigned workers = 0);

void write_quantum_spec(std::ostream& os, const QuantumCodeSpec& spec);
QuantumCodeSpec read_quantum_spec(std::istream& is);

}  // namespace polar
