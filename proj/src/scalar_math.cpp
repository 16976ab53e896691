#include "ksdist/scalar_math.hpp"

#include <cmath>

namespace ks {

namespace {

// Shift the argument above this value before applying the asymptotic series.
constexpr double kAsymptoticCutoff = 6.0;

}  // namespace

double digamma(double x) {
    if (!(x > 0.0))
        throw std::domain_error("digamma: require x > 0");
    // psi(x) = psi(x + 1) - 1/x, applied until x >= 6.
    double acc = 0.0;
    while (x < kAsymptoticCutoff) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // psi(x) ~ log x - 1/(2x) - sum_k B_{2k} / (2k x^{2k})
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double series =
        inv2 * (1.0 / 12 -
        inv2 * (1.0 / 120 -
        inv2 * (1.0 / 252 -
        inv2 * (1.0 / 240 -
        inv2 * (1.0 / 132 -
        inv2 * (691.0 / 32760 -
        inv2 * (1.0 / 12 -
        inv2 * (3617.0 / 8160))))))));
    return acc + std::log(x) - 0.5 * inv - series;
}

float digamma(float x) {
    return static_cast<float>(digamma(static_cast<double>(x)));
}

double trigamma(double x) {
    if (!(x > 0.0))
        throw std::domain_error("trigamma: require x > 0");
    // psi'(x) = psi'(x + 1) + 1/x^2
    double acc = 0.0;
    while (x < kAsymptoticCutoff) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    // psi'(x) ~ 1/x + 1/(2x^2) + sum_k B_{2k} / x^{2k+1}
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double series =
        inv * (1.0 + 0.5 * inv +
        inv2 * (1.0 / 6 -
        inv2 * (1.0 / 30 -
        inv2 * (1.0 / 42 -
        inv2 * (1.0 / 30 -
        inv2 * (5.0 / 66 -
        inv2 * (691.0 / 2730 -
        inv2 * (7.0 / 6 -
        inv2 * (3617.0 / 510)))))))));
    return acc + series;
}

float trigamma(float x) {
    return static_cast<float>(trigamma(static_cast<double>(x)));
}

double log_gamma(double x) {
    if (!(x > 0.0))
        throw std::domain_error("log_gamma: require x > 0");
    // Gamma(1) = Gamma(2) = 1 exactly.
    if (x == 1.0 || x == 2.0)
        return 0.0;
    // Lanczos approximation, g = 7, 9 coefficients.
    static constexpr double kCoef[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    if (x < 0.5) {
        // Reflection: lgamma(x) = log(pi / sin(pi x)) - lgamma(1 - x).
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) -
               log_gamma(1.0 - x);
    }
    const double z = x - 1.0;
    double acc = kCoef[0];
    for (int i = 1; i < 9; ++i)
        acc += kCoef[i] / (z + i);
    const double t = z + 7.5;
    constexpr double half_log_two_pi = 0.91893853320467274178032973640562;
    return half_log_two_pi + (z + 0.5) * std::log(t) - t + std::log(acc);
}

float log_gamma(float x) {
    return static_cast<float>(log_gamma(static_cast<double>(x)));
}

double log_beta(double p, double q) {
    if (!(p > 0.0) || !(q > 0.0))
        throw std::domain_error("log_beta: require p > 0 and q > 0");
    return log_gamma(p) + log_gamma(q) - log_gamma(p + q);
}

float log_beta(float p, float q) {
    return static_cast<float>(
        log_beta(static_cast<double>(p), static_cast<double>(q)));
}

}  // namespace ks
