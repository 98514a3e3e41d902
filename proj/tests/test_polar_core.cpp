#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "polar/core.hpp"
#include "polar/rng.hpp"

using namespace polar;

namespace {

BitVector random_bits(std::size_t n, Rng& rng) {
    BitVector v(n);
    for (auto& b : v) b = rng.bit();
    return v;
}

// Explicit Kronecker-built generator matrix, row-major; the independent
// route for checking the butterfly.
std::vector<BitVector> kronecker_gn(std::size_t n) {
    std::vector<BitVector> g{{1}};
    while (g.size() < n) {
        std::size_t m = g.size();
        std::vector<BitVector> g2(2 * m, BitVector(2 * m, 0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                if (!g[i][j]) continue;
                g2[i][j] = 1;          // top-left
                g2[i + m][j] = 1;      // bottom-left
                g2[i + m][j + m] = 1;  // bottom-right
            }
        g = std::move(g2);
    }
    return g;
}

BitVector matvec_gf2(const BitVector& u, const std::vector<BitVector>& g) {
    BitVector x(u.size(), 0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!u[i]) continue;
        for (std::size_t j = 0; j < u.size(); ++j) x[j] ^= g[i][j];
    }
    return x;
}

}  // namespace

TEST_CASE("polar_transform matches the worked examples") {
    CHECK(polar_transform({1, 0}) == BitVector{1, 0});
    CHECK(polar_transform({0, 0, 0, 1, 0, 0, 0, 1}) ==
          BitVector{0, 0, 0, 0, 1, 1, 1, 1});
    BitVector zero(64, 0);
    CHECK(polar_transform(zero) == zero);
}

TEST_CASE("polar_transform rejects non-power-of-two lengths") {
    CHECK_THROWS_AS(polar_transform({1, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(polar_transform({1}), std::invalid_argument);
    CHECK_THROWS_AS(polar_transform({}), std::invalid_argument);
}

TEST_CASE("transform equals the Kronecker generator matrix") {
    Rng rng(7);
    for (std::size_t n : {2, 4, 8, 16}) {
        auto g = kronecker_gn(n);
        for (int t = 0; t < 50; ++t) {
            BitVector u = random_bits(n, rng);
            CHECK(polar_transform(u) == matvec_gf2(u, g));
        }
    }
}

TEST_CASE("involution over many random words") {
    Rng rng(11);
    for (std::size_t n = 2; n <= 256; n <<= 1) {
        for (int t = 0; t < 1000; ++t) {
            BitVector u = random_bits(n, rng);
            CHECK(polar_transform(polar_transform(u)) == u);
        }
    }
}

TEST_CASE("linearity of the transform") {
    Rng rng(13);
    for (int t = 0; t < 200; ++t) {
        BitVector u = random_bits(64, rng), v = random_bits(64, rng);
        BitVector s(64);
        for (int i = 0; i < 64; ++i) s[i] = u[i] ^ v[i];
        BitVector tu = polar_transform(u), tv = polar_transform(v);
        BitVector ts(64);
        for (int i = 0; i < 64; ++i) ts[i] = tu[i] ^ tv[i];
        CHECK(polar_transform(s) == ts);
    }
}

TEST_CASE("transposed transform matches G^T") {
    Rng rng(17);
    for (std::size_t n : {2, 4, 8, 16}) {
        auto g = kronecker_gn(n);
        // transpose
        std::vector<BitVector> gt(n, BitVector(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) gt[j][i] = g[i][j];
        for (int t = 0; t < 50; ++t) {
            BitVector u = random_bits(n, rng);
            CHECK(polar_transform_transposed(u) == matvec_gf2(u, gt));
        }
    }
}

TEST_CASE("bit reversal permutation") {
    CHECK(bit_reversal_permutation(2) == std::vector<std::size_t>{0, 1});
    // 1-based paper examples {1,3,2,4} and {1,5,3,7,2,6,4,8}
    CHECK(bit_reversal_permutation(4) == std::vector<std::size_t>{0, 2, 1, 3});
    CHECK(bit_reversal_permutation(8) ==
          std::vector<std::size_t>{0, 4, 2, 6, 1, 5, 3, 7});
    CHECK_THROWS_AS(bit_reversal_permutation(6), std::invalid_argument);

    for (std::size_t n : {16, 64, 256}) {
        auto perm = bit_reversal_permutation(n);
        for (std::size_t i = 0; i < n; ++i) CHECK(perm[perm[i]] == i);
    }
}

TEST_CASE("natural and bit-reversed orderings are consistent") {
    // permute input, transform, permute output == transform
    Rng rng(19);
    for (std::size_t n : {8, 32, 128}) {
        auto perm = bit_reversal_permutation(n);
        for (int t = 0; t < 100; ++t) {
            BitVector u = random_bits(n, rng);
            BitVector pu(n);
            for (std::size_t i = 0; i < n; ++i) pu[i] = u[perm[i]];
            BitVector x = polar_transform(pu);
            BitVector px(n);
            for (std::size_t i = 0; i < n; ++i) px[i] = x[perm[i]];
            CHECK(px == polar_transform(u));
        }
    }
}

TEST_CASE("encode reproduces the N=8 coset example") {
    CodeSpec spec = make_code_spec(8, {0, 1, 2, 4});
    CHECK(spec.k_info == 4);
    CHECK(encode({1, 0, 0, 1}, spec) == BitVector{0, 0, 0, 0, 1, 1, 1, 1});
    CHECK(encode({0, 0, 0, 0}, spec) == BitVector(8, 0));
    CHECK_THROWS_AS(encode({1, 0, 0}, spec), std::invalid_argument);
}

TEST_CASE("encode with k=N round-trips under the involution") {
    Rng rng(23);
    CodeSpec spec = make_code_spec(32, {});
    for (int t = 0; t < 200; ++t) {
        BitVector x = random_bits(32, rng);
        BitVector w = encode(x, spec);
        CHECK(encode(w, spec) == x);
    }
}

TEST_CASE("encode agrees with the generator-matrix form on all inputs") {
    // includes a nonzero coset
    for (std::size_t n : {8, 16}) {
        auto g = kronecker_gn(n);
        CodeSpec spec = make_code_spec(n, {0, 1, 2, 4});
        spec.frozen_values = {0, 1, 1, 0};
        std::vector<std::size_t> info = spec.info_set();
        std::size_t k = spec.k_info;
        BitVector coset(n, 0);
        for (std::size_t i = 0; i < spec.frozen_set.size(); ++i)
            coset[spec.frozen_set[i]] = spec.frozen_values[i];
        BitVector coset_part = matvec_gf2(coset, g);
        for (std::uint64_t w = 0; w < (std::uint64_t{1} << k); ++w) {
            BitVector payload(k);
            BitVector u(n, 0);
            for (std::size_t j = 0; j < k; ++j) {
                payload[j] = static_cast<Bit>((w >> j) & 1);
                u[info[j]] = payload[j];
            }
            BitVector expected = matvec_gf2(u, g);
            for (std::size_t i = 0; i < n; ++i) expected[i] ^= coset_part[i];
            CHECK(encode(payload, spec) == expected);
        }
    }
}

TEST_CASE("crc attach and check") {
    CrcPoly parity{{1, 1}};  // x + 1
    CHECK(crc_attach({1}, parity) == BitVector{1, 1});
    CHECK(crc_attach({0, 0, 0}, parity) == BitVector{0, 0, 0, 0});
    CHECK(crc_check({1, 1}, parity));
    CHECK_FALSE(crc_check({1, 0}, parity));

    // single bit-flip detection, exhaustive for short payloads
    for (const CrcPoly& poly : {CrcPoly{{1, 1, 0, 1, 0, 1}}, default_crc11()}) {
        std::size_t payload_len = static_cast<std::size_t>(12 - poly.degree());
        for (std::uint64_t w = 0; w < (std::uint64_t{1} << payload_len); ++w) {
            BitVector payload(payload_len);
            for (std::size_t j = 0; j < payload_len; ++j)
                payload[j] = static_cast<Bit>((w >> j) & 1);
            BitVector word = crc_attach(payload, poly);
            CHECK(crc_check(word, poly));
            for (std::size_t flip = 0; flip < word.size(); ++flip) {
                word[flip] ^= 1;
                CHECK_FALSE(crc_check(word, poly));
                word[flip] ^= 1;
            }
        }
    }
}

TEST_CASE("crc hex parsing") {
    CrcPoly p = crc_poly_from_hex("0xE21");
    CHECK(p.degree() == 11);
    CHECK(p.bits == default_crc11().bits);
    CHECK(crc_poly_to_hex(p) == "0xE21");
    CHECK_THROWS_AS(crc_poly_from_hex("zz"), std::invalid_argument);
    CHECK_THROWS_AS(crc_poly_from_hex("0x1"), std::invalid_argument);
}

TEST_CASE("crc length must stay below k") {
    CHECK_THROWS_AS(make_code_spec(8, {0, 1, 2, 4}, default_crc11()),
                    std::invalid_argument);
}

TEST_CASE("code spec validation") {
    CHECK_THROWS_AS(make_code_spec(6, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(make_code_spec(8, {0, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(make_code_spec(8, {9}), std::invalid_argument);
}

TEST_CASE("code spec serialization round-trip") {
    CodeSpec spec = make_code_spec(32, {0, 1, 2, 3, 4, 5, 8}, default_crc11());
    spec.frozen_values = {0, 1, 0, 1, 1, 0, 1};
    std::ostringstream os;
    write_code_spec(os, spec);
    std::istringstream is(os.str());
    CodeSpec back = read_code_spec(is);
    CHECK(back.n_bits == spec.n_bits);
    CHECK(back.k_info == spec.k_info);
    CHECK(back.frozen_set == spec.frozen_set);
    CHECK(back.frozen_values == spec.frozen_values);
    REQUIRE(back.crc.has_value());
    CHECK(back.crc->bits == spec.crc->bits);

    std::istringstream bad("polar-code v2\n");
    CHECK_THROWS_AS(read_code_spec(bad), std::invalid_argument);
}
