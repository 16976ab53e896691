#pragma once

#include <cmath>
#include <concepts>
#include <numbers>
#include <stdexcept>

// Precision-safe scalar building blocks. Precision is selected at the call
// site through the argument type: every function has distinct float and
// double entry points and never changes precision behind the caller's back
// (the gamma-family functions are the one documented exception: their float
// entry points evaluate in double and round once at the end).

namespace ks {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// log(1 + x), accurate for |x| << 1. Domain: x > -1.
template <std::floating_point Real>
inline Real log1p(Real x) {
    if (!(x > Real(-1)))
        throw std::domain_error("log1p: require x > -1");
    return std::log1p(x);
}

// exp(x) - 1, accurate for |x| << 1. Overflow follows IEEE semantics.
template <std::floating_point Real>
inline Real expm1(Real x) {
    return std::expm1(x);
}

// log(1 - exp(x)) for x < 0.
// Neither log(-expm1(x)) nor log1p(-exp(x)) is accurate on the whole
// domain; each is accurate on one side of -log 2, so branch there.
template <std::floating_point Real>
inline Real log1mexp(Real x) {
    if (!(x < Real(0)))
        throw std::domain_error("log1mexp: require x < 0");
    constexpr Real neg_log2 = -std::numbers::ln2_v<Real>;
    if (x >= neg_log2)
        return std::log(-std::expm1(x));
    return std::log1p(-std::exp(x));
}

// psi(x) = d/dx log Gamma(x). Domain: x > 0.
double digamma(double x);
float digamma(float x);

// psi'(x). Domain: x > 0.
double trigamma(double x);
float trigamma(float x);

// log Gamma(x) for x > 0 (Lanczos, g = 7, 9 coefficients).
double log_gamma(double x);
float log_gamma(float x);

// log B(p, q) = lgamma(p) + lgamma(q) - lgamma(p + q). Domain: p, q > 0.
double log_beta(double p, double q);
float log_beta(float p, float q);

}  // namespace ks
