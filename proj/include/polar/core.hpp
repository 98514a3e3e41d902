#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace polar {

using Bit = std::uint8_t;
using BitVector = std::vector<Bit>;

bool is_power_of_two(std::size_t n);
int log2_exact(std::size_t n);

// x = u * G_N over GF(2), G_N = G_2^{\otimes n}, natural indexing.
// G_2 = [[1,0],[1,1]]; the transform is an involution. O(N log N).
BitVector polar_transform(const BitVector& u);

// x = u * G_N^T. Same butterfly with the XOR direction flipped.
BitVector polar_transform_transposed(const BitVector& u);

// Self-inverse permutation; perm[i] is the bit-reversal of i (0-based).
std::vector<std::size_t> bit_reversal_permutation(std::size_t n);

// CRC generator polynomial, MSB first including the leading coefficient,
// e.g. x^3+x+1 -> {1,0,1,1}. Degree = bits.size()-1.
struct CrcPoly {
    BitVector bits;
    int degree() const { return static_cast<int>(bits.size()) - 1; }
};

// x^11 + x^10 + x^9 + x^5 + 1 (0xE21)
CrcPoly default_crc11();
CrcPoly crc_poly_from_hex(const std::string& hex);
std::string crc_poly_to_hex(const CrcPoly& poly);

// Systematic CRC: payload followed by the r-bit remainder of payload*x^r
// modulo poly.
BitVector crc_attach(const BitVector& payload, const CrcPoly& poly);
bool crc_check(const BitVector& word, const CrcPoly& poly);

// (N, k, F, u_F) plus optional CRC carved from the constituent code's
// unfrozen positions. Indices are 0-based internally; file formats and
// documentation are 1-based.
struct CodeSpec {
    std::size_t n_bits = 0;                // N
    std::size_t k_info = 0;                // unfrozen count
    std::vector<std::size_t> frozen_set;   // ascending, size N-k
    BitVector frozen_values;               // aligned with frozen_set
    std::optional<CrcPoly> crc;

    std::size_t payload_length() const {
        return crc ? k_info - static_cast<std::size_t>(crc->degree()) : k_info;
    }
    std::vector<bool> frozen_mask() const;
    std::vector<std::size_t> info_set() const;  // ascending complement
    void validate() const;                      // throws std::invalid_argument
};

CodeSpec make_code_spec(std::size_t n, const std::vector<std::size_t>& frozen,
                        std::optional<CrcPoly> crc = std::nullopt);

// Scatters frozen values / info (plus CRC when configured) and applies the
// transform. info length must equal payload_length().
BitVector encode(const BitVector& info, const CodeSpec& spec);

// u-domain word behind encode(): frozen values and CRC-attached payload
// placed at their positions, before the transform.
BitVector assemble_u(const BitVector& info, const CodeSpec& spec);

// Text serialization; grammar documented in the README.
void write_code_spec(std::ostream& os, const CodeSpec& spec);
CodeSpec read_code_spec(std::istream& is);

}  // namespace polar
