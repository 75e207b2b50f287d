// Rescaled stationary states in the fast-diffusion regime k in (0,1] via
// fixed-point iteration of T rho = (A W_k*rho + B|x|^2 + C)^{-N/k}, with the
// delta-sandwich and m/M envelope checks, plus the nonexistence guards.
#pragma once

#include <vector>

#include "faircomp/domain.hpp"
#include "faircomp/kernel.hpp"

namespace faircomp {

struct TOperatorConfig {
    Params params;
    double r_max = 0.0;       // 0: chosen from the envelope tail bound
    int grid_points = 400;
    double fp_tol = 1e-9;     // sup-norm fixed-point tolerance (relative)
    int max_iter = 500;
    double relaxation = 1.0;  // Picard damping theta in (0,1]
    double mass_tol = 1e-12;  // bisection tolerance on the mass of T rho

    double coef_A() const;    // 2 chi N k/(N-k)
    double coef_B() const;    // N k/(2(N-k))
};

struct DeltaBounds {
    double lower = 0.0;  // w^{-1}(1)
    double upper = 0.0;  // W^{-1}(1)
};

// Solves w(d)=1 and W(d)=1; raises NonIntegrableError when k >= 2 (the
// normalization integrals diverge).
DeltaBounds delta_bounds(const Params& params, double quad_tol = 1e-11);

// w(alpha) (with the attraction term) or W(alpha) (without): the T-operator
// normalization integrals, strictly decreasing in alpha.
double normalization_mass(const Params& params, double alpha, bool with_attraction,
                          double quad_tol = 1e-11);

double envelope_lower(double r, const TOperatorConfig& cfg, const DeltaBounds& db); // m(x)
double envelope_upper(double r, const TOperatorConfig& cfg, const DeltaBounds& db); // M(x)

// Truncation radius with envelope tail mass below tail_tol.
double envelope_truncation_radius(const TOperatorConfig& cfg, const DeltaBounds& db,
                                  double tail_tol = 1e-8);

// First-node target resolving the density cap near the origin: a few decades
// below the radius where the attraction term reaches the delta-upper scale.
double peak_resolution_radius(const TOperatorConfig& cfg, const DeltaBounds& db);

struct ApplyResult {
    RadialDensity density;
    double C_const = 0.0;
};

// One application of T with C fixed by unit mass (bisection bracketed by the
// delta-sandwich).
ApplyResult apply_T(const RadialDensity& rho, const TOperatorConfig& cfg,
                    const DeltaBounds& db, const InteractionKernel* kernel = nullptr);

struct FixedPointReport {
    RadialDensity density;
    double C_const = 0.0;
    double delta_lower = 0.0;
    double delta_upper = 0.0;
    int iterations = 0;
    double final_residual = 0.0;
    bool converged = false;
    bool envelope_ok = false;
    bool sandwich_ok = false;
    double I_k = 0.0;
    std::vector<double> residual_history;
};

FixedPointReport solve_stationary(const RadialDensity& initial, const TOperatorConfig& cfg);

enum class NonexistenceDiag {
    OriginalVariablesNone,     // any k in (0,N), original frame
    RescaledNone,              // k >= 2
    RescaledUnboundedKMoment,  // k in [k*, 2)
    RescaledOpen,              // k in (1, k*)
    RescaledExists,            // k in (0,1]
};

NonexistenceDiag check_nonexistence(const Params& params);

} // namespace faircomp
