#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <random>

namespace ks {

// Deterministic random source. All mappings from raw engine output to
// floating-point values are implemented here (not via std distributions)
// so sequences are reproducible bit-for-bit from the seed.
class RandomSource {
  public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    // Uniform draw strictly inside (0, 1): endpoints are rejected, never
    // clamped. Double values are k * 2^-53 with k in [1, 2^53).
    template <std::floating_point Real>
    Real unit() {
        for (;;) {
            const std::uint64_t k = engine_() >> 11;
            const double u = static_cast<double>(k) * 0x1.0p-53;
            const Real v = static_cast<Real>(u);
            if (v > Real(0) && v < Real(1))
                return v;
        }
    }

    // Standard normal via the Marsaglia polar method.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        for (;;) {
            const double x = 2.0 * unit<double>() - 1.0;
            const double y = 2.0 * unit<double>() - 1.0;
            const double s = x * x + y * y;
            if (s > 0.0 && s < 1.0) {
                const double m = std::sqrt(-2.0 * std::log(s) / s);
                spare_ = y * m;
                have_spare_ = true;
                return x * m;
            }
        }
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace ks
