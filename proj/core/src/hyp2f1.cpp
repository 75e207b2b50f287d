#include "faircomp/hyp2f1.hpp"

#include <cmath>
#include <limits>

#include "faircomp/quadrature.hpp"

namespace faircomp {

namespace {

bool near_integer(double x, double tol = 1e-9) {
    return std::abs(x - std::round(x)) < tol;
}

bool nonpositive_integer(double x) {
    return x <= 0.0 && near_integer(x);
}

double digamma(double x) {
    // Recurrence up to x >= 6, then asymptotic series.
    double result = 0.0;
    while (x < 6.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv
            - inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
    return result;
}

// DLMF 15.8.10: c - a - b = m, a nonnegative integer.  Logarithmic
// connection series in u = 1-z, convergent for u < 1.
double hyp2f1_integer_gap(double a, double b, int m, double u, double tol) {
    const double c = a + b + m;
    double finite_part = 0.0;
    if (m > 0) {
        double coef = std::tgamma(m) * std::tgamma(c) / (std::tgamma(a + m) * std::tgamma(b + m));
        double term = 1.0;
        for (int s = 0; s < m; ++s) {
            if (s > 0)
                term *= (a + s - 1) * (b + s - 1) / (static_cast<double>(s) * (1.0 - m + s - 1.0)) * u;
            finite_part += coef * term;
        }
    }
    const double log_u = std::log(u);
    double sign = (m % 2 == 0) ? 1.0 : -1.0;
    double pref = -sign * std::tgamma(c) / (std::tgamma(a) * std::tgamma(b)) * std::pow(u, m);
    double sum = 0.0;
    double coef = 1.0;
    for (int s = 0; s < 400; ++s) {
        if (s > 0)
            coef *= (a + m + s - 1) * (b + m + s - 1) / (static_cast<double>(s) * (s + m)) * u;
        const double bracket = log_u - digamma(s + 1) - digamma(s + m + 1.0)
                             + digamma(a + s + m) + digamma(b + s + m);
        const double term = coef * bracket;
        sum += term;
        if (s > 2 && std::abs(term) < tol * std::abs(sum))
            break;
    }
    if (m == 0)
        pref = -std::tgamma(c) / (std::tgamma(a) * std::tgamma(b));
    return finite_part + pref * sum;
}

// Non-integer c-a-b: standard two-series connection formula at 1-z.
double hyp2f1_connection(double a, double b, double c, double u, double tol) {
    const double t = c - a - b;
    const double g1 = std::tgamma(c) * std::tgamma(t) / (std::tgamma(c - a) * std::tgamma(c - b));
    const double g2 = std::tgamma(c) * std::tgamma(-t) / (std::tgamma(a) * std::tgamma(b));
    const double f1 = hyp2f1_series(a, b, 1.0 - t, u, tol);
    const double f2 = hyp2f1_series(c - a, c - b, 1.0 + t, u, tol);
    return g1 * f1 + g2 * std::pow(u, t) * f2;
}

} // namespace

double pochhammer(double q, int n) {
    double p = 1.0;
    for (int i = 0; i < n; ++i)
        p *= q + i;
    return p;
}

double hyp2f1_series(double a, double b, double c, double z, double tol, int max_terms) {
    double sum = 1.0;
    double term = 1.0;
    for (int n = 0; n < max_terms; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if (std::abs(term) < tol * std::abs(sum) && n > 2)
            return sum;
    }
    return sum;
}

double gauss_hypergeometric(double a, double b, double c, double z, const Hyp2f1Options& opt) {
    if (nonpositive_integer(c))
        throw std::domain_error("gauss_hypergeometric: c is a nonpositive integer");
    if (z < 0.0 || z > 1.0)
        throw std::domain_error("gauss_hypergeometric: z outside [0,1]");
    if (z == 0.0)
        return 1.0;
    const double gap = c - a - b;
    if (z == 1.0) {
        if (gap <= 0.0)
            throw std::domain_error(
                "gauss_hypergeometric: divergent at z=1 for c-a-b <= 0; use the limit form");
        return std::tgamma(c) * std::tgamma(gap) / (std::tgamma(c - a) * std::tgamma(c - b));
    }
    // Terminating series (a or b a nonpositive integer) sums exactly.
    if (nonpositive_integer(a) || nonpositive_integer(b))
        return hyp2f1_series(a, b, c, z, opt.series_tol, opt.max_terms);
    if (z <= opt.z_switch)
        return hyp2f1_series(a, b, c, z, opt.series_tol, opt.max_terms);
    const double u = 1.0 - z;
    if (near_integer(gap)) {
        const int m = static_cast<int>(std::round(gap));
        if (m >= 0 && std::abs(gap - m) < 1e-12)
            return hyp2f1_integer_gap(a, b, m, u, opt.series_tol);
        if (m < 0 && std::abs(gap - m) < 1e-12) {
            // Euler transform maps a negative-integer gap to a positive one.
            const double value = hyp2f1_integer_gap(c - a, c - b, -m, u, opt.series_tol);
            return std::pow(u, gap) * value;
        }
        // Near-integer but not exact: fall back to the raw series, which
        // still converges (slowly) for z < 1.
        return hyp2f1_series(a, b, c, z, opt.series_tol, opt.max_terms);
    }
    return hyp2f1_connection(a, b, c, u, opt.series_tol);
}

} // namespace faircomp
