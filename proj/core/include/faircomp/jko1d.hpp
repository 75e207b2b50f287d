// 1D gradient-flow simulation via implicit Euler on the pseudoinverse of the
// CDF with Newton-Raphson inner solves, for all three fair-competition cases
// k in (-1,1), m = 1-k.  Positions X_i live at mass coordinates
// w_i = (i+1/2)/M; strict monotonicity of X encodes positivity of the
// density and mass is exact by construction.
#pragma once

#include <vector>

#include "faircomp/domain.hpp"
#include "faircomp/energy.hpp"

namespace faircomp {

struct Pseudoinverse {
    std::vector<double> X;
    double t = 0.0;
    double dt = 0.0; // last accepted step size

    int size() const { return static_cast<int>(X.size()); }
    double dw() const { return 1.0 / size(); }
    bool monotone() const;
    double min_cell() const;
    double com() const;
    double max_density() const;
};

// Quantile energy: entropy from interface slopes, interaction from the
// double Riemann sum with the diagonal excluded (discrete principal value),
// confinement in the rescaled frame.
EnergyBreakdown quantile_energy(const Pseudoinverse& q, const Params& params);

// Right-hand side dX/dt; throws std::invalid_argument on non-monotone X.
std::vector<double> jko_velocity(const Pseudoinverse& q, const Params& params);

struct JkoOptions {
    double dt0 = 1e-3;
    double dt_max = 0.25;
    double dt_min = 1e-12;
    double newton_tol = 1e-11;
    int max_newton = 60;
    int grow_after = 20;        // accepted steps before dt doubles
    double steady_tol = 1e-7;   // ||velocity||_inf threshold
    int steady_consecutive = 10;
    double max_steps = 200000;
    double energy_slack = 3e-13; // proximal-descent acceptance slack (times energy scale)
};

struct StepOutcome {
    bool accepted = false;
    int newton_iters = 0;
    bool monotonicity_failure = false;
};

// One implicit Euler step X -> Y solving Y = X + dt v(Y); the Newton solve
// uses the analytic Jacobian (tridiagonal diffusion + dense interaction)
// with a monotonicity-preserving line search.
StepOutcome step_implicit(Pseudoinverse& q, const Params& params, double dt,
                          const JkoOptions& opt = {});

struct JkoRunReport {
    std::vector<double> times;
    std::vector<EnergyBreakdown> energies;
    std::vector<double> com;
    std::vector<double> min_cell;
    std::vector<double> max_density;
    std::vector<int> newton_iters;
    bool converged_to_steady = false;
    bool blowup = false;
    int steps_accepted = 0;
    int steps_rejected = 0;
    Pseudoinverse final_state;
    RadialDensity steady_profile; // folded radial reconstruction
};

JkoRunReport run(Pseudoinverse initial, const Params& params, double t_end,
                 const JkoOptions& opt = {});

// Quantile representation of a radial density (N = 1): exact piecewise-
// linear CDF inversion of the even extension.
Pseudoinverse pseudoinverse_from_density(const RadialDensity& rho, int M);

// Radial fold of the reconstructed cell densities onto a graded grid.
RadialDensity density_from_pseudoinverse(const Pseudoinverse& q, int grid_points = 0,
                                         double r_max = 0.0);

// Original-variable self-similar solution at time tau from a rescaled
// stationary profile: invert beta, dilate by alpha.
RadialDensity self_similar_reconstruct(const RadialDensity& steady, const Params& params,
                                       double tau);

} // namespace faircomp
