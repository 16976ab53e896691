#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ksdist/distribution.hpp"
#include "ksdist/random.hpp"

// Independent ground-truth machinery: finite-difference gradients, adaptive
// quadrature against the KS density, and Monte Carlo estimators. These back
// every derived expected value in the tests and can be regenerated through
// the CLI (`oracle-regen`), so no asserted constant is unreproducible.

namespace ks::oracle {

struct McEstimate {
    double mean = 0.0;
    double standard_error = 0.0;  // sample stdv / sqrt(n)
    std::size_t n = 0;
};

// Relative error with the conventional guarded denominator.
inline double rel_error(double analytic, double fd) {
    const double denom =
        std::max({std::abs(analytic), std::abs(fd), 1e-12});
    return std::abs(analytic - fd) / denom;
}

// Central finite differences of f in each log parameter independently.
// Step: rel_step * max(1, |coordinate|). Throws if f is non-finite at a
// stencil point (reported, not masked).
GradPair<double> fd_gradient(
    const std::function<double(LogParams<double>)>& f, LogParams<double> p,
    double rel_step = 1e-6);

// Adaptive quadrature of E[g(X)] = int g(x) f(x) dx over (0, 1) to absolute
// tolerance tol. The two halves of the support are integrated after the
// substitutions s = log(x^a) and t = log(1 - x^a) (x^a ~ Beta(1, b)), which
// remove both endpoint singularities; g receives the point as a UnitValue.
// Throws on non-convergence within the refinement budget.
double quadrature_expectation(
    const std::function<double(UnitValue<double>)>& g, LogParams<double> p,
    double tol);

// Sample mean and standard error of g over n reparameterized draws.
McEstimate mc_expectation(const std::function<double(UnitValue<double>)>& g,
                          LogParams<double> p, std::size_t n,
                          RandomSource& rng);

// log Beta(alpha, beta) density at x; oracle for the KL-to-Beta check.
double beta_log_pdf(UnitValue<double> x, BetaParams<double> p);

// Verifies int f = 1 within tol at p before oracle values there are
// trusted. Throws if the check fails.
void check_normalization(LogParams<double> p, double tol);

// One row of an analytic-vs-finite-difference sweep.
struct GradCheckRow {
    std::string component;
    double log_a = 0.0;
    double log_b = 0.0;
    double point = 0.0;  // x or u where applicable, else NaN
    double analytic = 0.0;
    double finite_difference = 0.0;
    double relative_error = 0.0;
    double abs_diff = 0.0;
};

// Absolute floor under which an analytic/FD pair counts as matching even
// when the relative error is meaningless (true-zero gradients, where the
// finite difference is pure roundoff).
inline constexpr double kGradCheckAbsFloor = 1e-8;

struct GradCheckReport {
    std::vector<GradCheckRow> rows;
    // Worst relative error over rows whose absolute difference exceeds the
    // floor; 0 if every row is within the floor.
    double worst_rel_error = 0.0;
    GradCheckRow worst;
};

// Sweeps every analytic gradient (log-pdf: d_log_x/d_log_a/d_log_b,
// inverse CDF: d_log_a/d_log_b on the linear value, entropy: both) against
// central finite differences over the given grids. The differences are
// taken in well-conditioned coordinates (the icdf through its log value,
// d/d log x through xi = log(-log x)) with step 1e-4: at grid extremes
// |log f| reaches ~2e6, where 1e-6 steps leave the quotient
// roundoff-bound above the 1e-5 acceptance tolerance. `corrupt` perturbs
// the analytic values; it exists as a negative control for the checker.
GradCheckReport gradient_sweep(const std::vector<double>& log_params_grid,
                               const std::vector<double>& unit_grid,
                               double corrupt = 0.0);

}  // namespace ks::oracle
