// Test-side oracles, independent of the library's quadrature/special-function
// paths: composite Simpson with doubling, a graded theta-integral for psi_k,
// and small root-find helpers.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double simpson_fixed(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 == 1)
        ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-12) {
    int n = 32;
    double prev = simpson_fixed(f, a, b, n);
    for (int it = 0; it < 16; ++it) {
        n *= 2;
        const double cur = simpson_fixed(f, a, b, n);
        if (std::abs(cur - prev) <= tol * std::max(1.0, std::abs(cur)))
            return cur;
        prev = cur;
    }
    return prev;
}

inline double sphere_area(int N) {
    return 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
}

// adaptive-by-grading quadrature of the defining sphere integral of psi_k:
// segments shrink geometrically toward theta = 0 where the s ~ 1 boundary
// layer lives.
inline double psi_theta_integral(int N, double k, double s, double tol = 1e-12) {
    auto f = [&](double th) {
        const double a2 = 1.0 + s * s - 2.0 * s * std::cos(th);
        return (1.0 - s * std::cos(th)) * std::pow(std::sin(th), N - 2)
             * std::pow(a2, 0.5 * (k - 2.0));
    };
    double total = 0.0;
    double hi = M_PI;
    for (int j = 0; j < 60; ++j) {
        const double lo = hi / 2.0;
        total += simpson(f, lo, hi, tol);
        hi = lo;
        if (hi < 1e-14)
            break;
    }
    return sphere_area(N - 1) / sphere_area(N) * total;
}

inline double bisect(const std::function<double(double)>& g, double lo, double hi,
                     int iters = 200) {
    double flo = g(lo);
    double fhi = g(hi);
    if (flo * fhi > 0.0)
        throw std::runtime_error("oracle::bisect: no bracket");
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = g(mid);
        if (flo * fm <= 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// Barenblatt profile rho(x) = ((m-1)/m (D - x^2/2))_+^{1/(m-1)} in 1D; D is
// fixed by unit mass via Simpson + bisection.
struct Barenblatt1D {
    double m;
    double D;

    explicit Barenblatt1D(double m_) : m(m_) {
        D = bisect([&](double d) { return mass(d) - 1.0; }, 0.05, 30.0);
    }
    double value(double x) const {
        const double u = (m - 1.0) / m * (D - 0.5 * x * x);
        return u > 0.0 ? std::pow(u, 1.0 / (m - 1.0)) : 0.0;
    }
    double edge() const { return std::sqrt(2.0 * D); }
    double mass(double d) const {
        const double a = std::sqrt(2.0 * d);
        return 2.0 * simpson(
                   [&](double x) {
                       const double u = (m - 1.0) / m * (d - 0.5 * x * x);
                       return u > 0.0 ? std::pow(u, 1.0 / (m - 1.0)) : 0.0;
                   },
                   0.0, a, 1e-13);
    }
    // half-line cumulative mass H(x) = int_0^x rho
    double half_mass(double x) const {
        return simpson([&](double y) { return value(y); }, 0.0, std::min(x, edge()), 1e-13);
    }
    // quantile X(w) for w in (0,1), symmetric profile
    double quantile(double w) const {
        const double u = w - 0.5;
        if (u == 0.0)
            return 0.0;
        const double target = std::min(std::abs(u), 0.5 - 1e-15);
        const double x = bisect([&](double r) { return half_mass(r) - target; }, 0.0, edge());
        return u > 0.0 ? x : -x;
    }
};

} // namespace oracle
