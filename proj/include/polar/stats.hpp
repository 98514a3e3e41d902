#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace polar {

// Wilson score interval for a binomial proportion, default 95%.
inline std::pair<double, double> wilson_from_rate(double phat, double n,
                                                  double z = 1.959963984540054) {
    if (n <= 0.0) return {0.0, 1.0};
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    double lo = center - half, hi = center + half;
    if (lo < 0.0) lo = 0.0;
    if (hi > 1.0) hi = 1.0;
    return {lo, hi};
}

inline std::pair<double, double> wilson_interval(std::uint64_t successes,
                                                 std::uint64_t trials,
                                                 double z = 1.959963984540054) {
    if (trials == 0) return {0.0, 1.0};
    return wilson_from_rate(static_cast<double>(successes) / static_cast<double>(trials),
                            static_cast<double>(trials), z);
}

}  // namespace polar
