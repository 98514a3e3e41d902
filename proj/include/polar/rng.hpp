#pragma once

#include <cmath>
#include <cstdint>

namespace polar {

// SplitMix64 (Steele/Lea/Flood). Counter-based: the whole stream is a pure
// function of the seed, so independently seeded streams can be handed to
// workers and results do not depend on scheduling.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return splitmix64_mix(state_);
    }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; draws two uniforms per call
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    std::uint8_t bit() { return static_cast<std::uint8_t>(next_u64() >> 63); }

  private:
    std::uint64_t state_;
};

// Documented derivation of per-(point, block) stream seeds from a master
// seed. Streams for distinct (a, b) pairs are distinct regardless of how
// blocks are distributed over workers.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b) {
    std::uint64_t s = splitmix64_mix(master ^ (0x9E3779B97F4A7C15ULL * (a + 1)));
    return splitmix64_mix(s ^ (0xD1B54A32D192ED03ULL * (b + 1)));
}

}  // namespace polar
