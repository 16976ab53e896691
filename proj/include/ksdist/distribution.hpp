#pragma once

#include <cmath>
#include <concepts>
#include <optional>
#include <stdexcept>

#include "ksdist/random.hpp"
#include "ksdist/scalar_math.hpp"

// Kumaraswamy distribution with unconstrained log-space parameters
//
//   pdf      f(x) = a b x^(a-1) (1 - x^a)^(b-1),          x in (0, 1)
//   sampler  F^-1(u) = (1 - u^(1/b))^(1/a),               u in (0, 1)
//
// parameterized by (log a, log b). All computation stays in log space; the
// recurring unstable terms log(1 - x^a) and log(1 - u^(1/b)) are evaluated
// with log1mexp. Note F^-1 above (the paper-standard reparameterization
// map) is the quantile of the *complement*: it is strictly decreasing in u
// and survival(F^-1(u)) = u, while cdf(F^-1(u)) = 1 - u. Samples follow the
// ordinary CDF 1 - (1 - x^a)^b either way.

namespace ks {

template <std::floating_point Real>
struct LogParams {
    Real log_a{};
    Real log_b{};
};

template <std::floating_point Real>
struct BetaParams {
    Real alpha{};
    Real beta{};
};

// Partial derivatives of a scalar with respect to (log a, log b) and,
// where defined, log x.
template <std::floating_point Real>
struct GradPair {
    Real d_log_a{};
    Real d_log_b{};
    std::optional<Real> d_log_x{};
};

// A value in the open unit interval, stored canonically as log value < 0.
// Boundary inputs (0 and 1, or log values that round to -0) are rejected,
// never clamped: silently producing a point mass on the boundary is exactly
// the failure mode this library exists to remove.
template <std::floating_point Real>
class UnitValue {
  public:
    static UnitValue from_log(Real log_value) {
        if (!(log_value < Real(0)) || !std::isfinite(log_value))
            throw std::domain_error(
                "UnitValue: require finite log value < 0 (value in (0,1))");
        return UnitValue(log_value);
    }

    static UnitValue from_value(Real value) {
        if (!(value > Real(0)) || !(value < Real(1)))
            throw std::domain_error("UnitValue: require value in (0,1)");
        return UnitValue(std::log(value));
    }

    Real log() const { return log_value_; }
    Real value() const { return std::exp(log_value_); }
    // log(1 - x)
    Real log_complement() const { return log1mexp(log_value_); }

  private:
    explicit UnitValue(Real log_value) : log_value_(log_value) {}
    Real log_value_;
};

// log f(x) = log a + log b + (a-1) log x + (b-1) log(1 - x^a)
template <std::floating_point Real>
Real log_pdf(UnitValue<Real> x, LogParams<Real> p);

// Gradients of log f with respect to (log x, log a, log b).
template <std::floating_point Real>
GradPair<Real> log_pdf_grads(UnitValue<Real> x, LogParams<Real> p);

// log F^-1(u) = exp(-log a) * log1mexp(exp(-log b) * log u).
// Total on interior u; equals -0 only when the true value is closer to 1
// than any representable interior value in this precision.
template <std::floating_point Real>
Real icdf_log_value(UnitValue<Real> u, LogParams<Real> p);

// F^-1(u) as a UnitValue. Throws if the result is indistinguishable from
// the boundary at this precision (see icdf_log_value).
template <std::floating_point Real>
UnitValue<Real> icdf(UnitValue<Real> u, LogParams<Real> p);

// Gradients of F^-1 (the linear value, not its log) with respect to
// (log a, log b), each assembled as a single fused log-space expression
// with the sign applied last. Chain-rule compositions of the same
// quantities diverge for extreme parameters; see ks::naive.
template <std::floating_point Real>
GradPair<Real> icdf_grads(UnitValue<Real> u, LogParams<Real> p);

// F(x) = 1 - (1 - x^a)^b, computed as -expm1(b * log1mexp(a log x)).
template <std::floating_point Real>
Real cdf(UnitValue<Real> x, LogParams<Real> p);

// log S(x) = b * log1mexp(a log x), the log survival function.
// survival(icdf(u)) recovers u: log1mexp is an involution, so this is the
// numerically faithful round-trip partner of icdf.
template <std::floating_point Real>
Real log_survival(UnitValue<Real> x, LogParams<Real> p);

// Reparameterized draw: u ~ U(0,1) open interval, then icdf(u).
template <std::floating_point Real>
UnitValue<Real> sample(LogParams<Real> p, RandomSource& rng);

// Differential entropy:
//   H = 1 - 1/b + (1 - 1/a)(gamma + psi(b + 1)) - log a - log b
// (validated against quadrature of -E[log f]; the well-known closed form,
// re-derived from E[log X] = -(gamma + psi(b+1))/a and E[log(1-X^a)] = -1/b
// with X^a ~ Beta(1, b)).
template <std::floating_point Real>
Real entropy(LogParams<Real> p);

// Analytic partials of entropy with respect to (log a, log b):
//   dH/dlog a = (gamma + psi(b+1))/a - 1
//   dH/dlog b = 1/b + (1 - 1/a) b psi'(b+1) - 1
template <std::floating_point Real>
GradPair<Real> entropy_grads(LogParams<Real> p);

// E[X^n] = b B(1 + n/a, b), n >= 1.
template <std::floating_point Real>
Real moment(int n, LogParams<Real> p);

// KL(KS(a,b) || Beta(alpha,beta)) with the E[log(1-x)] series truncated to
// `terms` terms:
//   (a-alpha)/a (-gamma - psi(b) - 1/b) + log(ab) + log B(alpha,beta)
//   - (b-1)/b + (beta-1) b sum_m B(m/a, b) / (m + ab)
template <std::floating_point Real>
Real kl_to_beta(LogParams<Real> q, BetaParams<Real> p, int terms = 10);

}  // namespace ks
