// Free-energy functionals for the fair-competition regime, first variations,
// Euler-Lagrange residuals, and the HLS-variant constant / critical
// interaction strength estimation.
#pragma once

#include <string>
#include <vector>

#include "faircomp/domain.hpp"
#include "faircomp/kernel.hpp"

namespace faircomp {

struct EnergyBreakdown {
    double entropy = 0.0;              // U_m[rho]
    double interaction = 0.0;          // W_k[rho] (without chi)
    double confinement = 0.0;          // V[rho]/2, rescaled frame only
    double total = 0.0;                // entropy + chi*interaction (+ confinement)
    double kth_moment = 0.0;           // I_k[rho]
    double entropy_tail_bound = 0.0;   // truncation estimate for m < 1 fat tails
};

EnergyBreakdown free_energy(const RadialDensity& rho, const Params& params,
                            const InteractionKernel* kernel = nullptr);

// T_k[rho](r) = m/(N(m-1)) rho^{m-1} + 2 chi (W_k*rho)(r) (+ r^2/2 rescaled);
// the entropy part degenerates to (log rho + 1)/N when m = 1.
double first_variation(const RadialDensity& rho, double r, const Params& params,
                       const InteractionKernel* kernel = nullptr);

struct ElResidual {
    double sup_residual = 0.0;
    double support_radius = 0.0;
    double d_fitted = 0.0;       // least-squares constant over the support
    double d_closed_form = 0.0;  // 2F + (m-2)/(N(m-1))||rho||_m^m variant
};

ElResidual el_residual(const RadialDensity& rho, const Params& params,
                       const InteractionKernel* kernel = nullptr);

// |∬ f|x-y|^k f| / (||f||_1^{(N+k)/N} ||f||_m^m), k < 0.
double hls_ratio(const RadialDensity& rho, const Params& params,
                 const InteractionKernel* kernel = nullptr);

struct HlsEstimate {
    double c_star_lower = 0.0;
    double chi_c = 0.0;
    bool improved_at_budget = false; // still improving when the budget ran out
    std::vector<std::pair<std::string, double>> trace;
};

struct ChiCOptions {
    int grid_points = 160;
    double r_max = 4.0;
    int seed_scan = 24;        // exponent-family seeds
    double ascent_step = 0.5;  // initial projected-gradient step
};

HlsEstimate estimate_chi_c(const Params& params, int budget, const ChiCOptions& opt = {});

} // namespace faircomp
