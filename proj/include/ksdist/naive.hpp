#pragma once

#include <concepts>

#include "ksdist/distribution.hpp"

// Faithful naive Kumaraswamy, as found in framework implementations:
// linear-space parameters, direct log(1 - exp(.)), chain-rule-factored
// gradients. No guard rails anywhere in this namespace; producing -inf,
// +inf and exact zeros in the regimes where frameworks do is the point.
// Precision-parametric so diagnostics can show that double precision only
// postpones the failure threshold.

namespace ks::naive {

template <std::floating_point Real>
struct Params {
    Real a{};
    Real b{};
};

// log(1 - exp(x)) computed directly, no branch split. Returns -inf once
// exp(x) rounds to 1.
template <std::floating_point Real>
inline Real log_one_minus_exp(Real x) {
    return std::log(Real(1) - std::exp(x));
}

// log a + log b + (a-1) log x + (b-1) log(1 - exp(a log x)), unguarded.
template <std::floating_point Real>
Real log_pdf(Real x, Params<Real> p);

// (1 - u^(1/b))^(1/a), evaluated literally in the working precision.
// Returns exactly 0 once u^(1/b) rounds to 1.
template <std::floating_point Real>
Real icdf(Real u, Params<Real> p);

// The chain-rule factorizations of the inverse-CDF parameter gradients,
// evaluated term by term. Non-finite factors propagate into the result
// with the sign of the overall product (an infinite factor dominates any
// zero factor), mirroring how the underflow regime manifests as infinite
// gradients rather than quiet zeros.
template <std::floating_point Real>
GradPair<Real> icdf_grad_chainrule(Real u, Params<Real> p);

}  // namespace ks::naive
