#include "faircomp/domain.hpp"

#include <algorithm>
#include <cmath>

namespace faircomp {

double sphere_area(int N) {
    return 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
}

Params::Params(int N_, double k_, double chi_, Frame frame_)
    : N(N_), k(k_), chi(chi_), frame(frame_) {
    validate();
}

void Params::validate() const {
    if (N < 1)
        throw std::invalid_argument("Params: N must be a positive integer");
    if (!(k > -static_cast<double>(N) && k < static_cast<double>(N)))
        throw std::invalid_argument("Params: k must lie in (-N, N)");
    // chi = 0 switches the interaction off (pure diffusion reference runs)
    if (!(chi >= 0.0))
        throw std::invalid_argument("Params: chi must be nonnegative");
}

double k_star_threshold(int N) {
    const double n = N;
    return -0.5 * n + std::sqrt(0.25 * n * n + 2.0 * n);
}

double k_energy_threshold(int N) {
    return 2.0 * N / (2.0 + N);
}

RegimeReport classify(const Params& params) {
    params.validate();
    RegimeReport rep;
    if (params.k < 0.0)
        rep.regime = Regime::PorousMedium;
    else if (params.k == 0.0)
        rep.regime = Regime::Logarithmic;
    else
        rep.regime = Regime::FastDiffusion;
    rep.k_c = 2.0;
    rep.k_star = k_star_threshold(params.N);
    rep.k_energy = k_energy_threshold(params.N);
    rep.stationary_integrable = params.k < rep.k_c;
    rep.kth_moment_finite = params.k < rep.k_star;
    rep.finite_rescaled_energy = params.k < rep.k_energy;
    return rep;
}

double RadialDensity::mass() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        s += weights[i] * values[i];
    return s;
}

double RadialDensity::kth_moment(double k) const {
    if (k == 0.0) {
        // log-kernel moment: ∫ log|x| rho dx
        double s = 0.0;
        for (std::size_t i = 0; i < size(); ++i)
            s += nodes[i] > 0.0 ? weights[i] * values[i] * std::log(nodes[i]) : 0.0;
        return s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        s += weights[i] * values[i] * std::pow(nodes[i], k) / k;
    return s;
}

double RadialDensity::second_moment() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        s += weights[i] * values[i] * nodes[i] * nodes[i];
    return s;
}

double RadialDensity::max_value() const {
    double m = 0.0;
    for (double v : values)
        m = std::max(m, v);
    return m;
}

bool RadialDensity::is_nonincreasing(double slack) const {
    for (std::size_t i = 0; i + 1 < size(); ++i)
        if (values[i + 1] > values[i] + slack)
            return false;
    return true;
}

void RadialDensity::renormalize(double target_mass) {
    const double m = mass();
    if (m <= 0.0)
        throw std::invalid_argument("RadialDensity: nonpositive mass");
    const double f = target_mass / m;
    for (double& v : values)
        v *= f;
}

double RadialDensity::support_radius(double threshold) const {
    const double cut = threshold * max_value();
    double r = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        if (values[i] > cut)
            r = nodes[i];
    return r;
}

std::vector<double> graded_nodes(double r_max, int M, double ratio, double min_node) {
    if (M < 3 || r_max <= 0.0)
        throw std::invalid_argument("graded_nodes: need M >= 3 and r_max > 0");
    // Pure geometric above the origin node, so node-pair ratios repeat and
    // the interaction-kernel cache collapses to O(M) entries.  The total
    // stretch is capped so very fine grids keep a sane first node, unless a
    // deeper first node is requested explicitly.
    double q = std::min(ratio, std::exp(std::log(1e8) / (M - 2)));
    if (min_node > 0.0 && min_node < 0.1 * r_max)
        q = std::exp(std::log(r_max / min_node) / (M - 2));
    std::vector<double> r(M);
    r[0] = 0.0;
    for (int i = 1; i < M; ++i)
        r[i] = r_max * std::pow(q, static_cast<double>(i - (M - 1)));
    r[M - 1] = r_max;
    return r;
}

std::vector<double> radial_weights(int N, const std::vector<double>& nodes) {
    const std::size_t M = nodes.size();
    std::vector<double> w(M, 0.0);
    const double sig = sphere_area(N);
    auto g = [&](std::size_t i) { return sig * std::pow(nodes[i], N - 1); };
    for (std::size_t i = 0; i + 1 < M; ++i) {
        const double h = nodes[i + 1] - nodes[i];
        w[i] += 0.5 * h * g(i);
        w[i + 1] += 0.5 * h * g(i + 1);
    }
    return w;
}

RadialDensity make_density(int N, double r_max, int M, const std::vector<double>& values) {
    RadialDensity rho;
    rho.N = N;
    rho.nodes = graded_nodes(r_max, M);
    rho.weights = radial_weights(N, rho.nodes);
    if (values.size() != rho.nodes.size())
        throw std::invalid_argument("make_density: values/nodes size mismatch");
    rho.values = values;
    return rho;
}

RadialDensity characteristic_density(int N, double radius, double r_max, int M,
                                     double min_node) {
    RadialDensity rho;
    rho.N = N;
    rho.nodes = graded_nodes(r_max, M, 1.05, min_node);
    // snap the nearest node onto the jump so the plateau is represented
    // exactly and only one cell carries the ramp
    if (radius > 0.0 && radius < r_max) {
        auto it = std::lower_bound(rho.nodes.begin() + 1, rho.nodes.end() - 1, radius);
        if (it != rho.nodes.end() - 1)
            *it = radius;
    }
    rho.weights = radial_weights(N, rho.nodes);
    rho.values.resize(rho.nodes.size());
    for (std::size_t i = 0; i < rho.nodes.size(); ++i)
        rho.values[i] = rho.nodes[i] <= radius ? 1.0 : 0.0;
    rho.renormalize();
    return rho;
}

RadialDensity gaussian_density(int N, double sigma, double r_max, int M,
                               double min_node) {
    RadialDensity rho;
    rho.N = N;
    rho.nodes = graded_nodes(r_max, M, 1.05, min_node);
    rho.weights = radial_weights(N, rho.nodes);
    rho.values.resize(rho.nodes.size());
    for (std::size_t i = 0; i < rho.nodes.size(); ++i) {
        const double r = rho.nodes[i];
        rho.values[i] = std::exp(-0.5 * r * r / (sigma * sigma));
    }
    rho.renormalize();
    return rho;
}

RadialDensity dilate(const RadialDensity& rho, double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("dilate: lambda must be positive");
    RadialDensity out = rho;
    const double nscale = std::pow(lambda, rho.N);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        out.nodes[i] = rho.nodes[i] / lambda;
        out.values[i] = rho.values[i] * nscale;
        out.weights[i] = rho.weights[i] / nscale;
    }
    return out;
}

RescalingMaps rescaling_maps(const Params& params, double t) {
    if (t < 0.0)
        throw std::invalid_argument("rescaling_maps: t must be nonnegative");
    RescalingMaps maps;
    maps.alpha = std::exp(t);
    if (params.k == 2.0)
        maps.beta = t;
    else
        maps.beta = std::expm1((2.0 - params.k) * t) / (2.0 - params.k);
    return maps;
}

double beta_inverse(const Params& params, double tau) {
    if (tau < 0.0)
        throw std::invalid_argument("beta_inverse: tau must be nonnegative");
    if (params.k == 2.0)
        return tau;
    return std::log1p((2.0 - params.k) * tau) / (2.0 - params.k);
}

double bootstrap_exponent(double p, int n, const Params& params) {
    if (!(params.k < 0.0))
        throw std::invalid_argument("bootstrap_exponent: porous-medium regime (k<0) required");
    if (!(p > -static_cast<double>(params.N)))
        throw std::invalid_argument("bootstrap_exponent: need p > -N");
    if (n < 0)
        throw std::invalid_argument("bootstrap_exponent: n must be nonnegative");
    const double mm1 = params.m() - 1.0; // = -k/N > 0
    return -params.N + (p + params.N) / std::pow(mm1, n);
}

} // namespace faircomp
