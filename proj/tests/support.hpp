#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

// Shared test helpers.

namespace ks::test {

inline double rel_err(double got, double want) {
    const double denom = std::max({std::abs(got), std::abs(want), 1e-300});
    return std::abs(got - want) / denom;
}

// Units-in-the-last-place distance (monotone integer mapping of the float
// line, -0 and +0 identified).
inline std::int64_t ulp_distance(float a, float b) {
    auto key = [](float v) -> std::int64_t {
        const std::int32_t i = std::bit_cast<std::int32_t>(v);
        return i < 0 ? std::numeric_limits<std::int32_t>::min() - std::int64_t{i}
                     : std::int64_t{i};
    };
    return std::abs(key(a) - key(b));
}

inline std::int64_t ulp_distance(double a, double b) {
    auto key = [](double v) -> std::int64_t {
        const std::int64_t i = std::bit_cast<std::int64_t>(v);
        return i < 0 ? std::numeric_limits<std::int64_t>::min() - i : i;
    };
    const std::int64_t ka = key(a);
    const std::int64_t kb = key(b);
    return ka > kb ? ka - kb : kb - ka;
}

inline std::vector<double> log_params_grid() {
    return {-5.0, -2.0, 0.0, 2.0, 5.0, 12.0};
}

inline std::vector<double> unit_grid() {
    return {1e-6, 0.01, 0.5, 0.99, 1.0 - 1e-6};
}

}  // namespace ks::test
