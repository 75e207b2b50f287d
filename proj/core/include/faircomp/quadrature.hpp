// Adaptive Gauss-Kronrod and tanh-sinh quadrature on finite intervals,
// plus helpers for semi-infinite radial integrals.
#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace faircomp {

// Raised when a quadrature fails to reach its tolerance within budget.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct QuadOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-15;
    int max_depth = 48;
    bool throw_on_failure = false;
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod 15(7) on [a, b].
double integrate_gk(const Integrand& f, double a, double b, const QuadOptions& opt = {});

// tanh-sinh (double exponential) rule on [a, b]; tolerates integrable
// power singularities at either endpoint.
double integrate_tanh_sinh(const Integrand& f, double a, double b, double tol = 1e-12);

// Integral of f over [a, inf) via the substitution r = a + u/(1-u).
double integrate_to_infinity(const Integrand& f, double a, const QuadOptions& opt = {});

// Integral of f over (0, inf) in log coordinates r = e^u, u in [u_lo, u_hi];
// the caller picks bounds wide enough that the tails are negligible.
double integrate_log_axis(const Integrand& f, double u_lo, double u_hi, const QuadOptions& opt = {});

// Bisection with bracket expansion; g must be monotone across the root.
// Returns x with g(x) ~ 0 to within x-tolerance xtol (relative).
double bisect(const std::function<double(double)>& g, double lo, double hi,
              double xtol = 1e-13, int max_iter = 200);

// Expands [lo, hi] geometrically until g changes sign, then bisects.
double bisect_expanding(const std::function<double(double)>& g, double lo, double hi,
                        double xtol = 1e-13);

} // namespace faircomp
