#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>

namespace polar {

// Positive LLR favours bit 0. All decoder arithmetic is clamped to a finite
// saturation bound so that "known bit" is +/-B rather than an infinity.
inline constexpr double kLlrSaturation = 40.0;

enum class OpMode { Exact, MinSum };

inline double saturate(double v, double bound = kLlrSaturation) {
    return std::clamp(v, -bound, bound);
}

// Box-plus in its numerically stable split form:
//   sign(a)sign(b) min(|a|,|b|) + log(1+e^{-|a+b|}) - log(1+e^{-|a-b|})
// which equals 2 atanh(tanh(a/2) tanh(b/2)).
inline double f_exact(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    double m = std::min(std::fabs(a), std::fabs(b));
    if ((a >= 0.0) != (b >= 0.0)) m = -m;
    double v = m + std::log1p(std::exp(-std::fabs(a + b))) -
               std::log1p(std::exp(-std::fabs(a - b)));
    return saturate(v);
}

inline double f_minsum(double a, double b) {
    double m = std::min(std::fabs(a), std::fabs(b));
    return (a >= 0.0) == (b >= 0.0) ? m : -m;
}

inline double f_op(double a, double b, OpMode mode) {
    return mode == OpMode::Exact ? f_exact(a, b) : f_minsum(a, b);
}

// g(a, b, bit) = (-1)^bit a + b
inline double g_op(double a, double b, std::uint8_t bit) {
    return saturate(bit ? b - a : a + b);
}

inline std::pair<std::uint8_t, std::uint8_t> partial_sum(std::uint8_t b_left,
                                                         std::uint8_t b_right) {
    return {static_cast<std::uint8_t>(b_left ^ b_right), b_right};
}

// Hard decision with the closed lower branch: L >= 0 -> 0.
inline std::uint8_t hard_bit(double llr) { return llr < 0.0 ? 1 : 0; }

// Path metric update. Exact form: phi + ln(1 + e^{-(1-2u)L}).
// Min-sum form: unchanged when the bit agrees with the LLR sign, else +|L|.
inline double path_metric_update(double phi, double llr, std::uint8_t bit,
                                 OpMode mode) {
    if (mode == OpMode::Exact) {
        double z = -(1.0 - 2.0 * static_cast<double>(bit)) * llr;
        // log(1+e^z) without overflow for large z
        double inc = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        return phi + inc;
    }
    return bit == hard_bit(llr) ? phi : phi + std::fabs(llr);
}

}  // namespace polar
