#include "polar/core.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace polar {

bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

int log2_exact(std::size_t n) {
    if (!is_power_of_two(n)) throw std::invalid_argument("length must be a power of two");
    int lg = 0;
    while ((std::size_t{1} << lg) < n) ++lg;
    return lg;
}

BitVector polar_transform(const BitVector& u) {
    std::size_t n = u.size();
    if (!is_power_of_two(n) || n < 2)
        throw std::invalid_argument("polar_transform: length must be 2^n, n >= 1");
    BitVector x = u;
    for (std::size_t inc = 1; inc < n; inc <<= 1)
        for (std::size_t i = 0; i < n; i += 2 * inc)
            for (std::size_t j = 0; j < inc; ++j) x[i + j] ^= x[i + j + inc];
    return x;
}

BitVector polar_transform_transposed(const BitVector& u) {
    std::size_t n = u.size();
    if (!is_power_of_two(n) || n < 2)
        throw std::invalid_argument("polar_transform_transposed: length must be 2^n, n >= 1");
    BitVector x = u;
    for (std::size_t inc = 1; inc < n; inc <<= 1)
        for (std::size_t i = 0; i < n; i += 2 * inc)
            for (std::size_t j = 0; j < inc; ++j) x[i + j + inc] ^= x[i + j];
    return x;
}

std::vector<std::size_t> bit_reversal_permutation(std::size_t n) {
    if (!is_power_of_two(n) || n < 2)
        throw std::invalid_argument("bit_reversal_permutation: N must be 2^n, n >= 1");
    int lg = log2_exact(n);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < lg; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (lg - 1 - b);
        perm[i] = r;
    }
    return perm;
}

CrcPoly default_crc11() { return CrcPoly{{1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1}}; }

CrcPoly crc_poly_from_hex(const std::string& hex) {
    std::string s = hex;
    if (s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0) s = s.substr(2);
    if (s.empty()) throw std::invalid_argument("empty CRC polynomial");
    unsigned long long v = 0;
    for (char c : s) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else throw std::invalid_argument("bad hex digit in CRC polynomial");
        v = (v << 4) | static_cast<unsigned>(d);
    }
    if (v < 2) throw std::invalid_argument("CRC polynomial must have degree >= 1");
    BitVector bits;
    bool seen = false;
    for (int b = 63; b >= 0; --b) {
        Bit bit = static_cast<Bit>((v >> b) & 1);
        if (bit) seen = true;
        if (seen) bits.push_back(bit);
    }
    return CrcPoly{bits};
}

std::string crc_poly_to_hex(const CrcPoly& poly) {
    unsigned long long v = 0;
    for (Bit b : poly.bits) v = (v << 1) | b;
    std::ostringstream os;
    os << "0x" << std::hex << std::uppercase << v;
    return os.str();
}

static BitVector crc_remainder(const BitVector& dividend, const CrcPoly& poly) {
    int r = poly.degree();
    BitVector work = dividend;
    for (std::size_t i = 0; i + r < work.size(); ++i) {
        if (!work[i]) continue;
        for (int j = 0; j <= r; ++j) work[i + j] ^= poly.bits[j];
    }
    return BitVector(work.end() - r, work.end());
}

BitVector crc_attach(const BitVector& payload, const CrcPoly& poly) {
    int r = poly.degree();
    if (r < 1) throw std::invalid_argument("crc_attach: polynomial degree must be >= 1");
    if (payload.empty()) throw std::invalid_argument("crc_attach: empty payload");
    BitVector shifted = payload;
    shifted.insert(shifted.end(), static_cast<std::size_t>(r), 0);
    BitVector rem = crc_remainder(shifted, poly);
    BitVector out = payload;
    out.insert(out.end(), rem.begin(), rem.end());
    return out;
}

bool crc_check(const BitVector& word, const CrcPoly& poly) {
    int r = poly.degree();
    if (static_cast<int>(word.size()) <= r)
        throw std::invalid_argument("crc_check: word shorter than CRC");
    BitVector rem = crc_remainder(word, poly);
    return std::all_of(rem.begin(), rem.end(), [](Bit b) { return b == 0; });
}

std::vector<bool> CodeSpec::frozen_mask() const {
    std::vector<bool> mask(n_bits, false);
    for (std::size_t i : frozen_set) mask[i] = true;
    return mask;
}

std::vector<std::size_t> CodeSpec::info_set() const {
    std::vector<bool> mask = frozen_mask();
    std::vector<std::size_t> info;
    info.reserve(k_info);
    for (std::size_t i = 0; i < n_bits; ++i)
        if (!mask[i]) info.push_back(i);
    return info;
}

void CodeSpec::validate() const {
    if (!is_power_of_two(n_bits) || n_bits < 2)
        throw std::invalid_argument("CodeSpec: N must be 2^n, n >= 1");
    if (k_info > n_bits) throw std::invalid_argument("CodeSpec: k > N");
    if (frozen_set.size() != n_bits - k_info)
        throw std::invalid_argument("CodeSpec: |frozen_set| != N - k");
    if (frozen_values.size() != frozen_set.size())
        throw std::invalid_argument("CodeSpec: frozen value count mismatch");
    std::vector<bool> seen(n_bits, false);
    for (std::size_t i : frozen_set) {
        if (i >= n_bits) throw std::invalid_argument("CodeSpec: frozen index out of range");
        if (seen[i]) throw std::invalid_argument("CodeSpec: duplicate frozen index");
        seen[i] = true;
    }
    if (!std::is_sorted(frozen_set.begin(), frozen_set.end()))
        throw std::invalid_argument("CodeSpec: frozen set must be ascending");
    for (Bit b : frozen_values)
        if (b > 1) throw std::invalid_argument("CodeSpec: frozen values must be bits");
    if (crc) {
        if (crc->degree() < 1) throw std::invalid_argument("CodeSpec: CRC degree < 1");
        if (static_cast<std::size_t>(crc->degree()) >= k_info)
            throw std::invalid_argument("CodeSpec: CRC length must be < k");
    }
}

CodeSpec make_code_spec(std::size_t n, const std::vector<std::size_t>& frozen,
                        std::optional<CrcPoly> crc) {
    CodeSpec spec;
    spec.n_bits = n;
    spec.frozen_set = frozen;
    std::sort(spec.frozen_set.begin(), spec.frozen_set.end());
    spec.k_info = n - frozen.size();
    spec.frozen_values.assign(frozen.size(), 0);
    spec.crc = std::move(crc);
    spec.validate();
    return spec;
}

BitVector assemble_u(const BitVector& info, const CodeSpec& spec) {
    spec.validate();
    if (info.size() != spec.payload_length())
        throw std::invalid_argument("encode: info length mismatch");
    BitVector word = spec.crc ? crc_attach(info, *spec.crc) : info;
    BitVector u(spec.n_bits, 0);
    for (std::size_t i = 0; i < spec.frozen_set.size(); ++i)
        u[spec.frozen_set[i]] = spec.frozen_values[i];
    std::vector<std::size_t> info_pos = spec.info_set();
    for (std::size_t i = 0; i < info_pos.size(); ++i) u[info_pos[i]] = word[i];
    return u;
}

BitVector encode(const BitVector& info, const CodeSpec& spec) {
    return polar_transform(assemble_u(info, spec));
}

void write_code_spec(std::ostream& os, const CodeSpec& spec) {
    spec.validate();
    os << "polar-code v1\n";
    os << "N " << spec.n_bits << "\n";
    os << "k " << spec.k_info << "\n";
    os << "frozen";
    for (std::size_t i : spec.frozen_set) os << ' ' << i + 1;
    os << "\n";
    os << "frozen_values";
    for (Bit b : spec.frozen_values) os << ' ' << int(b);
    os << "\n";
    if (spec.crc) os << "crc " << crc_poly_to_hex(*spec.crc) << "\n";
}

CodeSpec read_code_spec(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header != "polar-code v1")
        throw std::invalid_argument("code spec: bad header");
    CodeSpec spec;
    bool have_n = false, have_k = false, have_frozen = false, have_values = false;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "N") {
            ls >> spec.n_bits;
            have_n = true;
        } else if (key == "k") {
            ls >> spec.k_info;
            have_k = true;
        } else if (key == "frozen") {
            std::size_t idx;
            while (ls >> idx) {
                if (idx == 0) throw std::invalid_argument("code spec: indices are 1-based");
                spec.frozen_set.push_back(idx - 1);
            }
            have_frozen = true;
        } else if (key == "frozen_values") {
            int b;
            while (ls >> b) spec.frozen_values.push_back(static_cast<Bit>(b));
            have_values = true;
        } else if (key == "crc") {
            std::string hex;
            ls >> hex;
            spec.crc = crc_poly_from_hex(hex);
        } else {
            throw std::invalid_argument("code spec: unknown key '" + key + "'");
        }
    }
    if (!have_n || !have_k || !have_frozen)
        throw std::invalid_argument("code spec: missing required field");
    if (!have_values) spec.frozen_values.assign(spec.frozen_set.size(), 0);
    spec.validate();
    return spec;
}

}  // namespace polar
