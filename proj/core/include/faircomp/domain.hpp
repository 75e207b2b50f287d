// Problem parametrization for the fair-competition regime N(m-1)+k = 0:
// parameter validation, regime classification, radial grids/densities,
// mass-preserving dilations and the self-similar time maps.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace faircomp {

enum class Frame { Original, Rescaled };

enum class Regime { PorousMedium, Logarithmic, FastDiffusion };

// Surface area of the unit sphere in R^N.
double sphere_area(int N);

struct Params {
    int N = 1;
    double k = 0.0;
    double chi = 1.0;
    Frame frame = Frame::Rescaled;

    Params() = default;
    Params(int N_, double k_, double chi_, Frame frame_ = Frame::Rescaled);

    // m is always derived: the fair-competition constraint holds exactly.
    double m() const { return 1.0 - k / N; }
    bool logarithmic() const { return k == 0.0; }

    void validate() const;
};

struct RegimeReport {
    Regime regime;
    double k_c;        // = 2, rescaled-integrability threshold
    double k_star;     // = -N/2 + sqrt(N^2/4 + 2N), kth-moment threshold
    double k_energy;   // = 2N/(2+N), finite rescaled-energy threshold
    bool stationary_integrable;
    bool kth_moment_finite;
    bool finite_rescaled_energy;
};

RegimeReport classify(const Params& params);

double k_star_threshold(int N);
double k_energy_threshold(int N);

// Radial density on a graded grid: values rho_i at nodes r_i with
// trapezoidal weights for integrals against sigma_N r^{N-1} dr.
struct RadialDensity {
    int N = 1;
    std::vector<double> nodes;
    std::vector<double> values;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    double sigma() const { return sphere_area(N); }

    double mass() const;
    double kth_moment(double k) const;       // I_k = ∫ |x|^k/k rho dx
    double second_moment() const;            // V = ∫ |x|^2 rho dx
    double max_value() const;
    bool is_nonincreasing(double slack = 0.0) const;
    void renormalize(double target_mass = 1.0);

    // Largest node with rho above threshold*max (support detection).
    double support_radius(double threshold = 1e-8) const;
};

// Geometric grid with r_0 = 0; node ratio ~ratio near the origin.  When
// min_node > 0 the stretch is chosen so the first positive node lands there
// (sharp density caps need grids spanning many decades).
std::vector<double> graded_nodes(double r_max, int M, double ratio = 1.05,
                                 double min_node = 0.0);

// Trapezoidal weights for nodes against sigma_N r^{N-1} dr.
std::vector<double> radial_weights(int N, const std::vector<double>& nodes);

RadialDensity make_density(int N, double r_max, int M,
                           const std::vector<double>& values_on_nodes);

// Builders for the standard test profiles (normalized to unit mass).
RadialDensity characteristic_density(int N, double radius, double r_max, int M,
                                     double min_node = 0.0);
RadialDensity gaussian_density(int N, double sigma, double r_max, int M,
                               double min_node = 0.0);

// Mass-preserving dilation rho_lambda(x) = lambda^N rho(lambda x).
RadialDensity dilate(const RadialDensity& rho, double lambda);

// Self-similar change of variables: alpha(t) = e^t and
// beta(t) = (e^{(2-k)t} - 1)/(2-k) for k != 2, beta(t) = t for k = 2.
struct RescalingMaps {
    double alpha;
    double beta;
};
RescalingMaps rescaling_maps(const Params& params, double t);
double beta_inverse(const Params& params, double tau);

// Iterated bootstrap exponent g^{(n)}(p) = -N + (p+N)/(m-1)^n; porous
// medium regime only.
double bootstrap_exponent(double p, int n, const Params& params);

} // namespace faircomp
