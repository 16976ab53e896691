#include "ksdist/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace ks::oracle {

namespace {

constexpr int kMaxDepth = 48;

double simpson_recurse(const std::function<double(double)>& f, double lo,
                       double hi, double flo, double fmid, double fhi,
                       double whole, double tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid);
    const double rm = 0.5 * (mid + hi);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    if (depth <= 0)
        throw std::runtime_error(
            "quadrature_expectation: refinement budget exhausted");
    return simpson_recurse(f, lo, mid, flo, flm, fmid, left, 0.5 * tol,
                           depth - 1) +
           simpson_recurse(f, mid, hi, fmid, frm, fhi, right, 0.5 * tol,
                           depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double lo,
                        double hi, double tol) {
    if (!(hi > lo))
        return 0.0;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fmid = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    return simpson_recurse(f, lo, hi, flo, fmid, fhi, whole, tol, kMaxDepth);
}

// Integrate f over panels delimited by the sorted knot sequence.
double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& knots, double tol) {
    double total = 0.0;
    const double per_panel =
        tol / static_cast<double>(std::max<std::size_t>(knots.size(), 2));
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        total += adaptive_simpson(f, knots[i], knots[i + 1], per_panel);
    return total;
}

std::vector<double> clip_sort(std::vector<double> knots, double lo,
                              double hi) {
    std::set<double> uniq{lo, hi};
    for (double k : knots)
        if (k > lo && k < hi)
            uniq.insert(k);
    return {uniq.begin(), uniq.end()};
}

}  // namespace

GradPair<double> fd_gradient(
    const std::function<double(LogParams<double>)>& f, LogParams<double> p,
    double rel_step) {
    auto eval = [&](LogParams<double> q) {
        const double v = f(q);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "fd_gradient: non-finite value " << v
                << " at stencil point (log_a=" << q.log_a
                << ", log_b=" << q.log_b << ")";
            throw std::runtime_error(msg.str());
        }
        return v;
    };
    GradPair<double> g;
    const double ha = rel_step * std::max(1.0, std::abs(p.log_a));
    g.d_log_a = (eval({p.log_a + ha, p.log_b}) - eval({p.log_a - ha, p.log_b})) /
                (2.0 * ha);
    const double hb = rel_step * std::max(1.0, std::abs(p.log_b));
    g.d_log_b = (eval({p.log_a, p.log_b + hb}) - eval({p.log_a, p.log_b - hb})) /
                (2.0 * hb);
    return g;
}

double quadrature_expectation(
    const std::function<double(UnitValue<double>)>& g, LogParams<double> p,
    double tol) {
    if (!(tol > 0.0))
        throw std::domain_error("quadrature_expectation: require tol > 0");
    const double log_a = p.log_a;
    const double log_b = p.log_b;
    const double a_inv = std::exp(-log_a);
    const double b = std::exp(log_b);
    const double b_inv = std::exp(-log_b);
    constexpr double ln2 = std::numbers::ln2;
    const double log_tol = std::log(tol);

    // Lower half, x^a in (0, 1/2]. With s = log(x^a), x^a ~ Beta(1, b):
    //   E-part = int g(x(s)) exp(log b + s + (b-1) log1mexp(s)) ds,
    // whose exponent peaks at s = -log b with O(1) width for any b.
    const double s_hi = -ln2;
    const double s_lo = std::min(log_tol - 40.0 - log_b, s_hi - 1.0);
    auto lower = [&](double s) {
        const double x_log = s * a_inv;
        const double weight = log_b + s + (b - 1.0) * log1mexp(s);
        return g(UnitValue<double>::from_log(x_log)) * std::exp(weight);
    };
    std::vector<double> s_knots;
    for (double off : {-40.0, -20.0, -10.0, -5.0, -2.0, 0.0, 2.0, 5.0, 10.0,
                       20.0, 40.0})
        s_knots.push_back(-log_b + off);
    for (double back : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0})
        s_knots.push_back(s_hi - back);
    const double lower_part =
        integrate_panels(lower, clip_sort(s_knots, s_lo, s_hi), 0.45 * tol);

    // Upper half, x^a in (1/2, 1). With sigma = log((1-x^a)^b), the
    // complement (1-x^a)^b is uniform, so the weight is exactly exp(sigma)
    // regardless of b. Below sigma_rep, x(sigma) is no longer representable
    // strictly inside (0, 1); that sliver's mass is exact (exp of the edge)
    // and is assigned g at the last representable point, which is exact for
    // any g continuous at the boundary.
    const double sigma_hi = -b * ln2;
    const double sigma_rep = b * (-700.0 + std::min(0.0, log_a));
    const double sigma_lo =
        std::max(std::min(log_tol - 40.0, sigma_hi - 1.0), sigma_rep);
    auto upper = [&](double sigma) {
        const double x_log = a_inv * log1mexp(sigma * b_inv);
        return g(UnitValue<double>::from_log(x_log)) * std::exp(sigma);
    };
    std::vector<double> sigma_knots;
    for (double back : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0})
        sigma_knots.push_back(sigma_hi - back);
    double upper_part = integrate_panels(
        upper, clip_sort(sigma_knots, sigma_lo, sigma_hi), 0.45 * tol);
    if (sigma_lo == sigma_rep && sigma_rep < sigma_hi) {
        const double edge_log_x = a_inv * log1mexp(sigma_rep * b_inv);
        upper_part += std::exp(sigma_rep) *
                      g(UnitValue<double>::from_log(edge_log_x));
    }
    return lower_part + upper_part;
}

McEstimate mc_expectation(const std::function<double(UnitValue<double>)>& g,
                          LogParams<double> p, std::size_t n,
                          RandomSource& rng) {
    if (n < 2)
        throw std::domain_error("mc_expectation: require n >= 2");
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = g(sample(p, rng));
        const double delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
    }
    McEstimate est;
    est.mean = mean;
    est.standard_error =
        std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    est.n = n;
    return est;
}

double beta_log_pdf(UnitValue<double> x, BetaParams<double> p) {
    if (!(p.alpha > 0.0) || !(p.beta > 0.0))
        throw std::domain_error("beta_log_pdf: require alpha, beta > 0");
    return (p.alpha - 1.0) * x.log() + (p.beta - 1.0) * x.log_complement() -
           log_beta(p.alpha, p.beta);
}

void check_normalization(LogParams<double> p, double tol) {
    const double total = quadrature_expectation(
        [](UnitValue<double>) { return 1.0; }, p, tol);
    if (!(std::abs(total - 1.0) <= tol)) {
        std::ostringstream msg;
        msg << "normalization check failed at (log_a=" << p.log_a
            << ", log_b=" << p.log_b << "): integral=" << total;
        throw std::runtime_error(msg.str());
    }
}

GradCheckReport gradient_sweep(const std::vector<double>& log_params_grid,
                               const std::vector<double>& unit_grid,
                               double corrupt) {
    constexpr double kStep = 1e-4;
    GradCheckReport report;
    auto push = [&](const std::string& comp, double la, double lb,
                    double point, double analytic, double fd) {
        GradCheckRow row;
        row.component = comp;
        row.log_a = la;
        row.log_b = lb;
        row.point = point;
        row.analytic = analytic + corrupt;
        row.finite_difference = fd;
        row.relative_error = rel_error(row.analytic, fd);
        row.abs_diff = std::abs(row.analytic - fd);
        const double score =
            row.abs_diff <= kGradCheckAbsFloor ? 0.0 : row.relative_error;
        if (score > report.worst_rel_error || report.rows.empty()) {
            report.worst_rel_error = score;
            report.worst = row;
        }
        report.rows.push_back(row);
    };

    for (double la : log_params_grid) {
        for (double lb : log_params_grid) {
            const LogParams<double> p{la, lb};

            const GradPair<double> eg = entropy_grads(p);
            const GradPair<double> efd = fd_gradient(
                [](LogParams<double> q) { return entropy(q); }, p, kStep);
            push("entropy.d_log_a", la, lb,
                 std::numeric_limits<double>::quiet_NaN(), eg.d_log_a,
                 efd.d_log_a);
            push("entropy.d_log_b", la, lb,
                 std::numeric_limits<double>::quiet_NaN(), eg.d_log_b,
                 efd.d_log_b);

            for (double v : unit_grid) {
                const auto x = UnitValue<double>::from_value(v);

                const GradPair<double> lg = log_pdf_grads(x, p);
                const GradPair<double> lfd = fd_gradient(
                    [&](LogParams<double> q) { return log_pdf(x, q); }, p,
                    kStep);
                push("log_pdf.d_log_a", la, lb, v, lg.d_log_a, lfd.d_log_a);
                push("log_pdf.d_log_b", la, lb, v, lg.d_log_b, lfd.d_log_b);

                // d/d log x, differenced in xi = log(-log x): near x -> 1
                // the pdf's 1/log x curvature makes direct steps either
                // truncation- or roundoff-bound, while in xi it is locally
                // linear. d/d log x = (d/d xi) / log x.
                const double lx = x.log();
                const double xi = std::log(-lx);
                const double hx = kStep * std::max(1.0, std::abs(xi));
                const double fd_xi =
                    (log_pdf(UnitValue<double>::from_log(-std::exp(xi + hx)),
                             p) -
                     log_pdf(UnitValue<double>::from_log(-std::exp(xi - hx)),
                             p)) /
                    (2.0 * hx);
                push("log_pdf.d_log_x", la, lb, v, lg.d_log_x.value(),
                     fd_xi / lx);

                // The icdf gradient is differenced through its log value
                // (exact chain rule by the center value): a direct linear
                // difference drowns once the value is within an ulp of 1.
                const GradPair<double> ig = icdf_grads(x, p);
                const double center = std::exp(icdf_log_value(x, p));
                const GradPair<double> ifd = fd_gradient(
                    [&](LogParams<double> q) {
                        return icdf_log_value(x, q);
                    },
                    p, kStep);
                push("icdf.d_log_a", la, lb, v, ig.d_log_a,
                     center * ifd.d_log_a);
                push("icdf.d_log_b", la, lb, v, ig.d_log_b,
                     center * ifd.d_log_b);
            }
        }
    }
    return report;
}

}  // namespace ks::oracle
