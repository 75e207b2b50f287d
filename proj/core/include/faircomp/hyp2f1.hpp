// Gauss hypergeometric function 2F1(a,b;c;z) for real parameters on z in [0,1].
//
// Direct power-series summation for z <= 0.9; for 0.9 < z < 1 the value is
// obtained from the z -> 1-z linear transformation, with the logarithmic
// variants when c-a-b is a (near-)integer. At z = 1 the Gauss value
// Gamma(c)Gamma(c-a-b)/(Gamma(c-a)Gamma(c-b)) is returned when c-a-b > 0.
#pragma once

#include <stdexcept>

namespace faircomp {

struct Hyp2f1Options {
    double series_tol = 1e-15;
    int max_terms = 4000000;
    double z_switch = 0.9;
};

double gauss_hypergeometric(double a, double b, double c, double z,
                            const Hyp2f1Options& opt = {});

// Raw power series sum (no transformations); converges for |z| < 1.
double hyp2f1_series(double a, double b, double c, double z,
                     double tol = 1e-15, int max_terms = 4000000);

double pochhammer(double q, int n);

} // namespace faircomp
