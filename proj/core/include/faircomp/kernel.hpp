// Riesz interaction kernel machinery: the sphere-averaged radial derivative
// kernel psi_k (quadrature, hypergeometric and near-singularity backends),
// angular averages of W_k, and the radial convolutions (W_k * rho)(r) and
// d/dr (W_k * rho)(r) including the Cauchy principal-value pairing for
// kernels with -N < k <= 1-N.
#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "faircomp/domain.hpp"

namespace faircomp {

enum class PsiBackend { Auto, Quadrature, Hypergeometric, NearOne, FarField, NewtonianExact };
enum class Side { Below, Above };

class SingularityError : public std::domain_error {
public:
    explicit SingularityError(const std::string& what) : std::domain_error(what) {}
};

class NonIntegrableError : public std::domain_error {
public:
    explicit NonIntegrableError(const std::string& what) : std::domain_error(what) {}
};

// Constants of the near-s=1 expansions (sub-Newtonian regime -N < k < 2-N):
//   psi(1-e) ~  K1 e^{N+k-2} + c_inf + K2[alpha] e^{N+k-1}
//   psi(1+e) ~ -K1 e^{N+k-2} + c_inf + K3[alpha] e^{N+k-1}
// B1 carries the closed form gamma (N-1)/(N+k-1); it has a pole at k = 1-N
// where the expansion picks up logarithms and the evaluator switches to the
// logarithmic connection series.
struct AsymptoticConstants {
    int N;
    double k;
    double tau;       // (3 - N - k)/2
    double gamma_c;   // Gamma((N-1)/2) Gamma(tau) / Gamma(1 - k/2)
    double K1;        // (sigma_{N-1}/sigma_N) gamma_c / 2
    double B1;
    double c_inf;

    double K2(double alpha) const;
    double K3(double alpha) const;
};

AsymptoticConstants asymptotic_constants(int N, double k);

// Partial sum of B0 = sum_n A_n / n! (proved zero); used as a self-check.
double b0_partial_sum(int N, double k, int n_terms);

struct PsiOptions {
    double series_tol = 1e-14;
    double quad_tol = 1e-12;
    double eps1 = 0.05;    // blend radius for the near-one backend
    double s_far = 100.0;  // far-field switch
};

// Evaluator for psi_k(s), N >= 2, k in (-N, 2) \ {2-N handled exactly}.
// Immutable after construction; evaluation is pure.
class PsiEvaluator {
public:
    PsiEvaluator(int N, double k, PsiOptions opt = {});

    double operator()(double s) const { return eval(s, PsiBackend::Auto); }
    double eval(double s, PsiBackend backend) const;

    bool newtonian() const { return newtonian_; }
    const std::optional<AsymptoticConstants>& constants() const { return constants_; }
    int dimension() const { return N_; }
    double homogeneity() const { return k_; }
    const PsiOptions& options() const { return opt_; }

private:
    int N_;
    double k_;
    PsiOptions opt_;
    bool newtonian_;
    std::optional<AsymptoticConstants> constants_;
};

double psi_quadrature(int N, double k, double s, double tol = 1e-12);
double psi_hypergeometric(int N, double k, double s, double series_tol = 1e-14);
double psi_far_field(int N, double k, double s);
double psi_near_one(double eps, Side side, double alpha, const AsymptoticConstants& c);

// Angular average of the interaction kernel over spheres, cached by the
// node-pair ratio min(r,eta)/max(r,eta).  at(r,eta) returns the average of
// W_k over the sphere |y| = eta seen from |x| = r.
class InteractionKernel {
public:
    InteractionKernel(int N, double k, double quad_tol = 1e-11);

    double at(double r, double eta) const;
    // Average of |e1 - s z|^k over the unit sphere (log for k = 0), s <= 1.
    double phi(double s) const;

    int dimension() const { return N_; }
    double homogeneity() const { return k_; }

private:
    int N_;
    double k_;
    double quad_tol_;
    mutable std::unordered_map<long long, double> cache_;
    mutable std::mutex mutex_;
};

// (W_k * rho)(r) by radial quadrature of the angular-averaged kernel.
// For N = 1 the piecewise-linear density is integrated in closed form.
double radial_potential(const RadialDensity& rho, double r, const Params& params,
                        const InteractionKernel* kernel = nullptr);

// d/dr (W_k * rho)(r); PV pairing is applied for -N < k <= 1-N.
double radial_force(const RadialDensity& rho, double r, const Params& params,
                    const PsiEvaluator* psi = nullptr, double pv_cutoff = 0.0);

} // namespace faircomp
