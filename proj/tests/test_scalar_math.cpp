#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ksdist/naive.hpp"
#include "ksdist/scalar_math.hpp"
#include "support.hpp"

using ks::test::rel_err;
using ks::test::ulp_distance;

namespace {

// Double-precision oracle for log(1 - exp(x)); for |x| < 1e-5 a 30-term
// series of (1 - exp(x))/(-x) keeps full accuracy independently of the
// branch split under test.
double log1mexp_oracle(double x) {
    if (std::abs(x) < 1e-5) {
        double poly = 0.0;
        for (int k = 30; k >= 1; --k)
            poly = x / (k + 1) * (1.0 + poly);
        // 1 - exp(x) = -x * (1 + poly)
        return std::log(-x) + std::log1p(poly);
    }
    return x >= -std::numbers::ln2 ? std::log(-std::expm1(x))
                                   : std::log1p(-std::exp(x));
}

}  // namespace

TEST_CASE("log1p examples and domain") {
    CHECK(ks::log1p(0.0) == 0.0);
    CHECK(rel_err(ks::log1p(1e-10), 9.9999999995000000e-11) < 1e-14);
    CHECK(rel_err(ks::log1p(std::numbers::e - 1.0), 1.0) < 1e-15);
    CHECK_THROWS_AS(ks::log1p(-1.0), std::domain_error);
    CHECK_THROWS_AS(ks::log1p(-1.5), std::domain_error);
    CHECK(ks::log1p(0.0f) == 0.0f);
}

TEST_CASE("expm1 examples") {
    CHECK(ks::expm1(0.0) == 0.0);
    CHECK(rel_err(ks::expm1(1e-10), 1.0000000000500000e-10) < 1e-14);
    CHECK(rel_err(ks::expm1(std::numbers::ln2), 1.0) < 1e-15);
}

TEST_CASE("log1mexp examples") {
    // Fixed point: 1 - exp(-log 2) = 1/2.
    CHECK(rel_err(ks::log1mexp(-std::numbers::ln2), -std::numbers::ln2) <
          1e-15);
    CHECK(rel_err(ks::log1mexp(-20.0), -2.0611536245627350e-9) < 1e-13);
    CHECK_THROWS_AS(ks::log1mexp(0.0), std::domain_error);
    CHECK_THROWS_AS(ks::log1mexp(-0.0), std::domain_error);
    CHECK_THROWS_AS(ks::log1mexp(0.5), std::domain_error);
}

TEST_CASE("log1mexp stays finite in single precision where the naive form "
          "returns -inf") {
    const float x = -std::exp2(-30.0f);
    const float stable = ks::log1mexp(x);
    CHECK(std::isfinite(stable));
    CHECK(stable < 0.0f);
    CHECK(std::isinf(ks::naive::log_one_minus_exp(x)));
}

TEST_CASE("log1mexp is negative and strictly monotone") {
    // log(1 - exp(x)) falls from 0- to -inf as x rises toward 0: strictly
    // decreasing in x (equivalently, strictly increasing in |x|).
    std::mt19937 gen(1234);
    std::uniform_real_distribution<double> dist(-30.0, -1e-12);
    std::vector<double> xs;
    for (int i = 0; i < 2000; ++i)
        xs.push_back(dist(gen));
    xs.push_back(-40.0);
    std::sort(xs.begin(), xs.end());
    double prev_x = xs.front();
    double prev_v = ks::log1mexp(prev_x);
    CHECK(prev_v < 0.0);
    for (double x : xs) {
        const double v = ks::log1mexp(x);
        CHECK(v < 0.0);
        if (x > prev_x) {
            CHECK(v < prev_v);
            prev_x = x;
            prev_v = v;
        }
    }
}

TEST_CASE("log1mexp single-precision relative accuracy <= 1e-6 vs double "
          "oracle") {
    // Figure-2 domain: x in (-30 log2, 0), log-spaced, plus random fill.
    double worst = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        const double l2 = -30.0 + 34.4 * i / 20000.0;
        const float x = static_cast<float>(-std::exp2(l2));
        if (!(x < 0.0f) || x <= -30.0 * std::numbers::ln2)
            continue;
        const double got = ks::log1mexp(x);
        const double want = log1mexp_oracle(static_cast<double>(x));
        worst = std::max(worst, std::abs(got - want) / std::abs(want));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("log1mexp branch continuity at -log 2 within 4 ulps") {
    const float bf = -std::numbers::ln2_v<float>;
    const float above_f = std::nextafter(bf, 0.0f);
    const float below_f = std::nextafter(bf, -1.0f);
    CHECK(ulp_distance(ks::log1mexp(above_f), ks::log1mexp(below_f)) < 4);

    const double bd = -std::numbers::ln2;
    const double above_d = std::nextafter(bd, 0.0);
    const double below_d = std::nextafter(bd, -1.0);
    CHECK(ulp_distance(ks::log1mexp(above_d), ks::log1mexp(below_d)) < 4);
}

TEST_CASE("digamma examples and domain") {
    CHECK(rel_err(ks::digamma(1.0), -ks::euler_gamma) < 5e-13);
    CHECK(rel_err(ks::digamma(2.0), 1.0 - ks::euler_gamma) < 5e-13);
    // High-precision series oracle value (psi(10.5)).
    CHECK(std::abs(ks::digamma(10.5) - 2.3030010342976863753) < 1e-12);
    CHECK_THROWS_AS(ks::digamma(0.0), std::domain_error);
    CHECK_THROWS_AS(ks::digamma(-3.0), std::domain_error);
    CHECK(ks::digamma(1.0f) == doctest::Approx(-0.5772157f));
}

TEST_CASE("trigamma examples and domain") {
    const double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
    CHECK(rel_err(ks::trigamma(1.0), pi2_6) < 5e-13);
    CHECK(rel_err(ks::trigamma(2.0), pi2_6 - 1.0) < 5e-13);
    CHECK_THROWS_AS(ks::trigamma(0.0), std::domain_error);
    // Central difference of digamma at 7.3.
    const double h = 1e-5;
    const double fd = (ks::digamma(7.3 + h) - ks::digamma(7.3 - h)) / (2 * h);
    CHECK(rel_err(ks::trigamma(7.3), fd) < 1e-6);
}

TEST_CASE("digamma/trigamma recurrences to 1e-10") {
    for (double x : {0.1, 0.35, 0.9, 1.0, 2.7, 5.5, 6.0, 17.0, 123.4}) {
        CHECK(std::abs(ks::digamma(x + 1.0) - (ks::digamma(x) + 1.0 / x)) <
              1e-10);
        CHECK(std::abs(ks::trigamma(x + 1.0) -
                       (ks::trigamma(x) - 1.0 / (x * x))) < 1e-10);
    }
}

TEST_CASE("trigamma matches digamma central difference on [0.1, 100]") {
    const double h = 1e-5;
    for (int i = 0; i <= 200; ++i) {
        const double x = 0.1 * std::pow(1000.0, i / 200.0);
        const double fd =
            (ks::digamma(x + h) - ks::digamma(x - h)) / (2.0 * h);
        CHECK(rel_err(ks::trigamma(x), fd) < 1e-5);
    }
}

TEST_CASE("log_beta examples and domain") {
    CHECK(ks::log_beta(1.0, 1.0) == 0.0);
    CHECK(rel_err(ks::log_beta(1.5, 2.0), -1.3217558399823194) < 1e-13);
    for (double n : {2.0, 5.0, 17.0, 1000.0})
        CHECK(rel_err(ks::log_beta(1.0, n), -std::log(n)) < 1e-12);
    CHECK_THROWS_AS(ks::log_beta(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(ks::log_beta(1.0, -2.0), std::domain_error);
}

TEST_CASE("log_gamma agrees with libm lgamma") {
    for (double x : {0.05, 0.3, 0.5, 1.0, 1.5, 2.0, 3.7, 10.5, 100.0, 1e4,
                     16777216.0}) {
        CHECK(rel_err(ks::log_gamma(x), std::lgamma(x)) < 1e-12);
    }
}

TEST_CASE("gamma-family float entry points round the double result") {
    CHECK(ks::log_gamma(3.7f) ==
          static_cast<float>(ks::log_gamma(3.7f + 0.0)));
    CHECK(ks::digamma(3.7f) == static_cast<float>(ks::digamma(3.7f + 0.0)));
    CHECK(ks::trigamma(3.7f) == static_cast<float>(ks::trigamma(3.7f + 0.0)));
}
