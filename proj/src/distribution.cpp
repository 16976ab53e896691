#include "ksdist/distribution.hpp"

#include <cmath>

namespace ks {

namespace {

template <std::floating_point Real>
void check_params(LogParams<Real> p) {
    if (!std::isfinite(p.log_a) || !std::isfinite(p.log_b))
        throw std::domain_error("LogParams: require finite log a, log b");
}

template <std::floating_point Real>
void check_beta(BetaParams<Real> p) {
    if (!(p.alpha > Real(0)) || !(p.beta > Real(0)))
        throw std::domain_error("BetaParams: require alpha > 0 and beta > 0");
}

}  // namespace

template <std::floating_point Real>
Real log_pdf(UnitValue<Real> x, LogParams<Real> p) {
    check_params(p);
    const Real a = std::exp(p.log_a);
    const Real b = std::exp(p.log_b);
    const Real a_log_x = a * x.log();
    const Real w = log1mexp(a_log_x);  // log(1 - x^a)
    return p.log_a + p.log_b + (a - Real(1)) * x.log() + (b - Real(1)) * w;
}

template <std::floating_point Real>
GradPair<Real> log_pdf_grads(UnitValue<Real> x, LogParams<Real> p) {
    check_params(p);
    const Real a = std::exp(p.log_a);
    const Real b = std::exp(p.log_b);
    const Real a_log_x = a * x.log();
    const Real w = log1mexp(a_log_x);
    // exp(a log x - w) = x^a / (1 - x^a)
    const Real ratio = std::exp(a_log_x - w);
    GradPair<Real> g;
    g.d_log_x = (a - Real(1)) - (b - Real(1)) * std::exp(a_log_x - w + p.log_a);
    g.d_log_a = Real(1) + a_log_x * (Real(1) - (b - Real(1)) * ratio);
    g.d_log_b = Real(1) + b * w;
    return g;
}

template <std::floating_point Real>
Real icdf_log_value(UnitValue<Real> u, LogParams<Real> p) {
    check_params(p);
    const Real s = std::exp(-p.log_b) * u.log();  // log u^(1/b)
    const Real w = log1mexp(s);                   // log(1 - u^(1/b))
    return std::exp(-p.log_a) * w;
}

template <std::floating_point Real>
UnitValue<Real> icdf(UnitValue<Real> u, LogParams<Real> p) {
    const Real log_value = icdf_log_value(u, p);
    if (!(log_value < Real(0)))
        throw std::domain_error(
            "icdf: result indistinguishable from 1 at this precision");
    return UnitValue<Real>::from_log(log_value);
}

template <std::floating_point Real>
GradPair<Real> icdf_grads(UnitValue<Real> u, LogParams<Real> p) {
    check_params(p);
    const Real s = std::exp(-p.log_b) * u.log();
    const Real w = log1mexp(s);
    GradPair<Real> g;
    // d F^-1 / d log a = exp(-log a + w/a) * (-w); -w > 0, so the whole
    // expression is one exponential: exp(-log a + w/a + log(-w)).
    g.d_log_a = std::exp(-p.log_a + std::exp(-p.log_a) * w + std::log(-w));
    // d F^-1 / d log b
    //   = exp(-log a - log b + s + (1/a - 1) w) * log u; log u < 0, so the
    // magnitude is exp(... + log(-log u)) and the sign is applied last.
    g.d_log_b = -std::exp(-p.log_a - p.log_b + s +
                          (std::exp(-p.log_a) - Real(1)) * w +
                          std::log(-u.log()));
    return g;
}

template <std::floating_point Real>
Real cdf(UnitValue<Real> x, LogParams<Real> p) {
    return -std::expm1(log_survival(x, p));
}

template <std::floating_point Real>
Real log_survival(UnitValue<Real> x, LogParams<Real> p) {
    check_params(p);
    const Real a = std::exp(p.log_a);
    const Real b = std::exp(p.log_b);
    return b * log1mexp(a * x.log());
}

template <std::floating_point Real>
UnitValue<Real> sample(LogParams<Real> p, RandomSource& rng) {
    return icdf(UnitValue<Real>::from_value(rng.unit<Real>()), p);
}

template <std::floating_point Real>
Real entropy(LogParams<Real> p) {
    check_params(p);
    const double log_a = p.log_a;
    const double log_b = p.log_b;
    const double a_inv = std::exp(-log_a);
    const double b = std::exp(log_b);
    const double b_inv = std::exp(-log_b);
    const double h = 1.0 - b_inv +
                     (1.0 - a_inv) * (euler_gamma + digamma(b + 1.0)) -
                     log_a - log_b;
    return static_cast<Real>(h);
}

template <std::floating_point Real>
GradPair<Real> entropy_grads(LogParams<Real> p) {
    check_params(p);
    const double a_inv = std::exp(-static_cast<double>(p.log_a));
    const double b = std::exp(static_cast<double>(p.log_b));
    const double b_inv = std::exp(-static_cast<double>(p.log_b));
    GradPair<Real> g;
    g.d_log_a =
        static_cast<Real>(a_inv * (euler_gamma + digamma(b + 1.0)) - 1.0);
    g.d_log_b = static_cast<Real>(b_inv + (1.0 - a_inv) * b * trigamma(b + 1.0) -
                                  1.0);
    return g;
}

template <std::floating_point Real>
Real moment(int n, LogParams<Real> p) {
    check_params(p);
    if (n <= 0)
        throw std::domain_error("moment: require n >= 1");
    const double a_inv = std::exp(-static_cast<double>(p.log_a));
    const double log_b = p.log_b;
    const double b = std::exp(log_b);
    // E[X^n] = b B(1 + n/a, b), evaluated in log space.
    return static_cast<Real>(std::exp(log_b + log_beta(1.0 + n * a_inv, b)));
}

template <std::floating_point Real>
Real kl_to_beta(LogParams<Real> q, BetaParams<Real> p, int terms) {
    check_params(q);
    check_beta(p);
    if (terms < 1)
        throw std::domain_error("kl_to_beta: require terms >= 1");
    const double log_a = q.log_a;
    const double log_b = q.log_b;
    const double a = std::exp(log_a);
    const double b = std::exp(log_b);
    const double alpha = p.alpha;
    const double beta = p.beta;
    const double ab = std::exp(log_a + log_b);

    double kl = (1.0 - alpha * std::exp(-log_a)) *
                    (-euler_gamma - digamma(b) - std::exp(-log_b)) +
                (log_a + log_b) + log_beta(alpha, beta) -
                (1.0 - std::exp(-log_b));
    double series = 0.0;
    for (int m = 1; m <= terms; ++m)
        series += std::exp(log_beta(m / a, b) - std::log(m + ab));
    kl += (beta - 1.0) * b * series;
    return static_cast<Real>(kl);
}

#define KS_INSTANTIATE(Real)                                                   \
    template Real log_pdf<Real>(UnitValue<Real>, LogParams<Real>);             \
    template GradPair<Real> log_pdf_grads<Real>(UnitValue<Real>,               \
                                                LogParams<Real>);              \
    template Real icdf_log_value<Real>(UnitValue<Real>, LogParams<Real>);      \
    template UnitValue<Real> icdf<Real>(UnitValue<Real>, LogParams<Real>);     \
    template GradPair<Real> icdf_grads<Real>(UnitValue<Real>,                  \
                                             LogParams<Real>);                 \
    template Real cdf<Real>(UnitValue<Real>, LogParams<Real>);                 \
    template Real log_survival<Real>(UnitValue<Real>, LogParams<Real>);        \
    template UnitValue<Real> sample<Real>(LogParams<Real>, RandomSource&);     \
    template Real entropy<Real>(LogParams<Real>);                              \
    template GradPair<Real> entropy_grads<Real>(LogParams<Real>);              \
    template Real moment<Real>(int, LogParams<Real>);                          \
    template Real kl_to_beta<Real>(LogParams<Real>, BetaParams<Real>, int);

KS_INSTANTIATE(float)
KS_INSTANTIATE(double)

#undef KS_INSTANTIATE

}  // namespace ks
