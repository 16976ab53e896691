#include "ksdist/naive.hpp"

#include <cmath>
#include <initializer_list>
#include <limits>

namespace ks::naive {

namespace {

// Product of factors where any infinite factor wins over zeros: the result
// keeps the sign of the product of all factor signs. A plain IEEE product
// would turn 0 * inf into NaN and hide which term diverged.
template <std::floating_point Real>
Real propagating_product(std::initializer_list<Real> factors) {
    bool negative = false;
    bool infinite = false;
    Real product = Real(1);
    for (Real f : factors) {
        if (std::isnan(f))
            return f;
        if (std::signbit(f))
            negative = !negative;
        if (std::isinf(f))
            infinite = true;
        product *= f;
    }
    if (infinite) {
        const Real inf = std::numeric_limits<Real>::infinity();
        return negative ? -inf : inf;
    }
    return product;
}

}  // namespace

template <std::floating_point Real>
Real log_pdf(Real x, Params<Real> p) {
    const Real log_x = std::log(x);
    return std::log(p.a) + std::log(p.b) + (p.a - Real(1)) * log_x +
           (p.b - Real(1)) * log_one_minus_exp(p.a * log_x);
}

template <std::floating_point Real>
Real icdf(Real u, Params<Real> p) {
    return std::pow(Real(1) - std::pow(u, Real(1) / p.b), Real(1) / p.a);
}

template <std::floating_point Real>
GradPair<Real> icdf_grad_chainrule(Real u, Params<Real> p) {
    const Real a = p.a;
    const Real b = p.b;
    const Real log_u = std::log(u);
    const Real u_pow = std::exp(log_u / b);               // u^(1/b)
    const Real w = log_one_minus_exp(log_u / b);          // log(1 - u^(1/b))
    GradPair<Real> g;
    // d/d log a of exp(w/a): exp(w/a) * w * d(1/a)/da * da/dlog a
    g.d_log_a = propagating_product<Real>({
        std::exp(w / a),
        w,
        Real(-1) / (a * a),
        a,
    });
    // d/d log b, factored exactly as backpropagation composes it:
    // 1/a * exp(w/a) * -(1 - u^(1/b))^-1 * u^(1/b) * log u * -1/b^2 * b
    g.d_log_b = propagating_product<Real>({
        Real(1) / a,
        std::exp(w / a),
        Real(-1) / (Real(1) - u_pow),
        u_pow,
        log_u,
        Real(-1) / (b * b),
        b,
    });
    return g;
}

#define KS_NAIVE_INSTANTIATE(Real)                                            \
    template Real log_pdf<Real>(Real, Params<Real>);                          \
    template Real icdf<Real>(Real, Params<Real>);                             \
    template GradPair<Real> icdf_grad_chainrule<Real>(Real, Params<Real>);

KS_NAIVE_INSTANTIATE(float)
KS_NAIVE_INSTANTIATE(double)

#undef KS_NAIVE_INSTANTIATE

}  // namespace ks::naive
