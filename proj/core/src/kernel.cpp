#include "faircomp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "faircomp/hyp2f1.hpp"
#include "faircomp/quadrature.hpp"

namespace faircomp {

namespace {

double sigma_ratio(int N) {
    return sphere_area(N - 1) / sphere_area(N);
}

bool is_newtonian(int N, double k) {
    return std::abs(k - (2.0 - N)) < 1e-13;
}

struct HypParams {
    double a, b1, c1, b2, c2;
};

HypParams hyp_params(int N, double k) {
    // h2 parameters from the t = cos^2(theta/2) substitution applied to the
    // cos(theta) factor: b2 = (N+1)/2, c2 = N.
    return {1.0 - 0.5 * k, 0.5 * (N - 1), static_cast<double>(N - 1),
            0.5 * (N + 1), static_cast<double>(N)};
}

// Piecewise-linear radial density sampler with nodes including r = 0.
struct PLDensity {
    const RadialDensity& rho;

    double operator()(double eta) const {
        const auto& r = rho.nodes;
        if (eta <= r.front())
            return rho.values.front();
        if (eta >= r.back())
            return 0.0;
        const auto it = std::upper_bound(r.begin(), r.end(), eta);
        const std::size_t j = static_cast<std::size_t>(it - r.begin());
        const double t = (eta - r[j - 1]) / (r[j] - r[j - 1]);
        return rho.values[j - 1] + t * (rho.values[j] - rho.values[j - 1]);
    }
};

} // namespace

// ---------------------------------------------------------------------------
// Asymptotic constants and the near-one connection evaluation
// ---------------------------------------------------------------------------

AsymptoticConstants asymptotic_constants(int N, double k) {
    if (N < 2)
        throw std::invalid_argument("asymptotic_constants: N >= 2 required");
    if (!(k > -static_cast<double>(N) && k < 2.0 - N))
        throw std::invalid_argument("asymptotic_constants: sub-Newtonian regime -N < k < 2-N required");
    const HypParams p = hyp_params(N, k);
    AsymptoticConstants c;
    c.N = N;
    c.k = k;
    c.tau = 0.5 * (3.0 - N - k);
    const double sr = sigma_ratio(N);
    c.gamma_c = std::tgamma(0.5 * (N - 1)) * std::tgamma(c.tau) / std::tgamma(p.a);
    c.K1 = 0.5 * sr * c.gamma_c;
    const double pole = N + k - 1.0;
    c.B1 = pole != 0.0 ? c.gamma_c * (N - 1) / pole
                       : std::numeric_limits<double>::infinity();
    if (std::abs(c.tau - std::round(c.tau)) > 1e-12) {
        const double cp = std::tgamma(p.b1) / std::tgamma(p.c1 - p.a);
        const double cq = std::tgamma(p.b2) / std::tgamma(p.c2 - p.a);
        c.c_inf = sr * std::pow(2.0, N + k - 3.0) * std::tgamma(-c.tau) * (cp - cq);
    } else {
        c.c_inf = std::numeric_limits<double>::quiet_NaN();
    }
    return c;
}

double AsymptoticConstants::K2(double alpha) const {
    return -sigma_ratio(N) * (B1 + gamma_c * (1.0 - N + 2.0 * alpha)) / 4.0;
}

double AsymptoticConstants::K3(double alpha) const {
    return -sigma_ratio(N) * (B1 + gamma_c * (2.0 * k + N - 5.0 + 2.0 * alpha)) / 4.0;
}

double b0_partial_sum(int N, double k, int n_terms) {
    const HypParams p = hyp_params(N, k);
    const double P1 = std::tgamma(p.b1) * std::tgamma(p.c1 - p.b1) / std::tgamma(p.c1);
    const double P2 = std::tgamma(p.b2) * std::tgamma(p.c2 - p.b2) / std::tgamma(p.c2);
    double t1 = 1.0, t2 = 1.0, sum = P1 - P2;
    for (int n = 1; n <= n_terms; ++n) {
        t1 *= (p.c1 - p.a + n - 1) * (p.c1 - p.b1 + n - 1) / ((p.c1 + n - 1) * n);
        t2 *= (p.c2 - p.a + n - 1) * (p.c2 - p.b2 + n - 1) / ((p.c2 + n - 1) * n);
        sum += P1 * t1 - P2 * t2;
    }
    return sum;
}

double psi_near_one(double eps, Side side, double alpha, const AsymptoticConstants& c) {
    if (!(eps > 0.0) || eps >= 1.0)
        throw std::invalid_argument("psi_near_one: need 0 < eps < 1");
    const HypParams p = hyp_params(c.N, c.k);
    const double P1 = std::tgamma(p.b1) * std::tgamma(p.c1 - p.b1) / std::tgamma(p.c1);
    const double P2 = std::tgamma(p.b2) * std::tgamma(p.c2 - p.b2) / std::tgamma(p.c2);
    const double two = side == Side::Below ? 2.0 - eps : 2.0 + eps;
    const double delta = eps / two;
    const double z = 1.0 - delta * delta;
    // H_i / (1-z)^{c_i-a-b_i} = P_i F(c_i-a, c_i-b_i; c_i; z)  (Euler)
    const double H1r = P1 * gauss_hypergeometric(p.c1 - p.a, p.c1 - p.b1, p.c1, z);
    const double H2r = P2 * gauss_hypergeometric(p.c2 - p.a, p.c2 - p.b2, p.c2, z);
    const double pref = sigma_ratio(c.N) * std::pow(2.0, c.N - 2.0)
                      * std::pow(delta, c.N + c.k - 3.0);
    const double sgn = side == Side::Below ? 1.0 : -1.0;
    const double psi = pref * (std::pow(two, c.k - 1.0) * (H1r - H2r)
                             + sgn * eps * std::pow(two, c.k - 2.0) * H2r);
    const double s = side == Side::Below ? 1.0 - eps : 1.0 + eps;
    return psi * std::pow(s, alpha);
}

// ---------------------------------------------------------------------------
// psi backends
// ---------------------------------------------------------------------------

double psi_quadrature(int N, double k, double s, double tol) {
    if (N < 2)
        throw std::invalid_argument("psi_quadrature: N >= 2 required");
    if (s < 0.0)
        throw std::invalid_argument("psi_quadrature: s must be nonnegative");
    auto f = [&](double th) -> double {
        const double ct = std::cos(th);
        const double a2 = 1.0 + s * s - 2.0 * s * ct;
        if (a2 <= 0.0)
            return 0.0;
        return (1.0 - s * ct) * std::pow(std::sin(th), N - 2) * std::pow(a2, 0.5 * (k - 2.0));
    };
    QuadOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = 1e-300;
    double integral;
    if (std::abs(s - 1.0) < 0.1) {
        // boundary layer at theta = 0 of width |1-s|
        integral = integrate_tanh_sinh(f, 0.0, 0.3, tol)
                 + integrate_gk(f, 0.3, M_PI, opt);
    } else {
        integral = integrate_gk(f, 0.0, M_PI, opt);
    }
    return sigma_ratio(N) * integral;
}

double psi_hypergeometric(int N, double k, double s, double series_tol) {
    if (N < 2)
        throw std::invalid_argument("psi_hypergeometric: N >= 2 required");
    if (s < 0.0)
        throw std::invalid_argument("psi_hypergeometric: s must be nonnegative");
    if (s == 0.0)
        return 1.0;
    const HypParams p = hyp_params(N, k);
    const double z = 4.0 * s / ((1.0 + s) * (1.0 + s));
    Hyp2f1Options opt;
    opt.series_tol = series_tol;
    const double P1 = std::tgamma(p.b1) * std::tgamma(p.c1 - p.b1) / std::tgamma(p.c1);
    const double P2 = std::tgamma(p.b2) * std::tgamma(p.c2 - p.b2) / std::tgamma(p.c2);
    const double pre = sigma_ratio(N) * std::pow(1.0 + s, k - 2.0) * std::pow(2.0, N - 2.0);
    const double h1 = pre * P1 * gauss_hypergeometric(p.a, p.b1, p.c1, z, opt);
    const double h2 = pre * P2 * gauss_hypergeometric(p.a, p.b2, p.c2, z, opt);
    return (1.0 + s) * h1 - 2.0 * s * h2;
}

double psi_far_field(int N, double k, double s) {
    if (!(k < 2.0))
        throw std::invalid_argument("psi_far_field: k < 2 required");
    return (N + k - 2.0) / N * std::pow(s, k - 2.0);
}

PsiEvaluator::PsiEvaluator(int N, double k, PsiOptions opt)
    : N_(N), k_(k), opt_(opt), newtonian_(is_newtonian(N, k)) {
    if (N < 2)
        throw std::invalid_argument("PsiEvaluator: N >= 2 required (use closed forms for N=1)");
    if (!(k > -static_cast<double>(N) && k < 2.0))
        throw std::invalid_argument("PsiEvaluator: k must lie in (-N, 2)");
    if (!newtonian_ && k < 2.0 - N)
        constants_ = asymptotic_constants(N, k);
}

double PsiEvaluator::eval(double s, PsiBackend backend) const {
    if (s < 0.0)
        throw std::invalid_argument("psi: s must be nonnegative");
    switch (backend) {
    case PsiBackend::NewtonianExact:
        if (!newtonian_)
            throw std::invalid_argument("psi: Newtonian backend requires k = 2-N");
        if (s == 1.0)
            throw SingularityError("psi: jump singularity at s=1 (Newtonian)");
        return s < 1.0 ? 1.0 : 0.0;
    case PsiBackend::Quadrature:
        if (s == 1.0 && k_ <= 2.0 - N_)
            throw SingularityError("psi: singular at s=1 for k <= 2-N");
        return psi_quadrature(N_, k_, s, opt_.quad_tol);
    case PsiBackend::Hypergeometric:
        if (s == 1.0 && k_ <= 2.0 - N_)
            throw SingularityError("psi: singular at s=1 for k <= 2-N");
        return psi_hypergeometric(N_, k_, s, opt_.series_tol);
    case PsiBackend::NearOne: {
        if (!constants_)
            throw std::invalid_argument("psi: near-one backend requires -N < k < 2-N");
        if (s == 1.0)
            throw SingularityError("psi: singular at s=1 for k < 2-N");
        const Side side = s < 1.0 ? Side::Below : Side::Above;
        return psi_near_one(std::abs(s - 1.0), side, 0.0, *constants_);
    }
    case PsiBackend::FarField:
        return psi_far_field(N_, k_, s);
    case PsiBackend::Auto:
        break;
    }
    if (newtonian_) {
        if (s == 1.0)
            throw SingularityError("psi: jump singularity at s=1 (Newtonian)");
        return s < 1.0 ? 1.0 : 0.0;
    }
    if (s == 0.0)
        return 1.0;
    if (s == 1.0) {
        if (k_ <= 2.0 - N_)
            throw SingularityError("psi: singular at s=1 for k <= 2-N");
        return psi_quadrature(N_, k_, s, opt_.quad_tol);
    }
    if (constants_ && std::abs(s - 1.0) < opt_.eps1) {
        const Side side = s < 1.0 ? Side::Below : Side::Above;
        return psi_near_one(std::abs(s - 1.0), side, 0.0, *constants_);
    }
    if (k_ < 0.0 && s >= opt_.s_far)
        return psi_far_field(N_, k_, s);
    return psi_hypergeometric(N_, k_, s, opt_.series_tol);
}

// ---------------------------------------------------------------------------
// Angular-averaged interaction kernel with a ratio-keyed cache
// ---------------------------------------------------------------------------

InteractionKernel::InteractionKernel(int N, double k, double quad_tol)
    : N_(N), k_(k), quad_tol_(quad_tol) {
    if (N < 1)
        throw std::invalid_argument("InteractionKernel: N >= 1 required");
}

double InteractionKernel::phi(double s) const {
    if (s < 0.0 || s > 1.0 + 1e-12)
        throw std::invalid_argument("InteractionKernel::phi: s in [0,1] expected");
    s = std::min(s, 1.0);
    if (N_ == 1) {
        if (k_ == 0.0)
            return 0.5 * (std::log(std::abs(1.0 - s)) + std::log(1.0 + s));
        return 0.5 * (std::pow(std::abs(1.0 - s), k_) + std::pow(1.0 + s, k_));
    }
    if (k_ == 0.0 && N_ == 2)
        return 0.0; // log|x| harmonic in 2D: sphere mean is log max(1,s)
    const long long key = std::llround(s * 1e12);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end())
            return it->second;
    }
    auto f = [&](double th) -> double {
        const double a2 = 1.0 + s * s - 2.0 * s * std::cos(th);
        const double base = std::pow(std::sin(th), N_ - 2);
        if (k_ == 0.0)
            return a2 > 0.0 ? 0.5 * std::log(a2) * base : 0.0;
        return a2 > 0.0 ? std::pow(a2, 0.5 * k_) * base : 0.0;
    };
    double integral;
    if (s > 0.98) {
        integral = integrate_tanh_sinh(f, 0.0, 0.3, quad_tol_)
                 + integrate_tanh_sinh(f, 0.3, M_PI, quad_tol_);
    } else {
        QuadOptions opt;
        opt.rel_tol = quad_tol_;
        integral = integrate_gk(f, 0.0, M_PI, opt);
    }
    const double value = sigma_ratio(N_) * integral;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        cache_.emplace(key, value);
    }
    return value;
}

double InteractionKernel::at(double r, double eta) const {
    const double base = std::max(r, eta);
    if (base == 0.0)
        return k_ > 0.0 ? 0.0 : -std::numeric_limits<double>::infinity();
    const double s = std::min(r, eta) / base;
    if (k_ == 0.0)
        return std::log(base) + phi(s);
    return std::pow(base, k_) * phi(s) / k_;
}

// ---------------------------------------------------------------------------
// Radial potential (W_k * rho)(r)
// ---------------------------------------------------------------------------

namespace {

// closed-form cell integrals for N = 1, density alpha + beta*eta on the cell
struct Lin {
    double alpha, beta;
};

// int (alpha + beta eta) (r + eta)^k deta over [ea, eb]
double cell_plus_Wk(const Lin& l, double r, double k, double ea, double eb) {
    auto G = [&](double u) {
        if (k == 0.0)
            return (l.alpha - l.beta * r) * (u > 0.0 ? u * std::log(u) - u : 0.0)
                 + l.beta * (u > 0.0 ? 0.5 * u * u * std::log(u) - 0.25 * u * u : 0.0);
        return (l.alpha - l.beta * r) * std::pow(u, k + 1.0) / (k + 1.0)
             + l.beta * std::pow(u, k + 2.0) / (k + 2.0);
    };
    return G(r + eb) - G(r + ea);
}

// int (alpha + beta eta) |r - eta|^k deta over [ea, eb] (split at eta = r)
double cell_minus_Wk(const Lin& l, double r, double k, double ea, double eb) {
    auto below = [&](double u_lo, double u_hi) { // u = r - eta
        auto G = [&](double u) {
            if (k == 0.0)
                return (l.alpha + l.beta * r) * (u > 0.0 ? u * std::log(u) - u : 0.0)
                     - l.beta * (u > 0.0 ? 0.5 * u * u * std::log(u) - 0.25 * u * u : 0.0);
            return (l.alpha + l.beta * r) * std::pow(u, k + 1.0) / (k + 1.0)
                 - l.beta * std::pow(u, k + 2.0) / (k + 2.0);
        };
        return G(u_hi) - G(u_lo);
    };
    auto above = [&](double u_lo, double u_hi) { // u = eta - r
        auto G = [&](double u) {
            if (k == 0.0)
                return (l.alpha + l.beta * r) * (u > 0.0 ? u * std::log(u) - u : 0.0)
                     + l.beta * (u > 0.0 ? 0.5 * u * u * std::log(u) - 0.25 * u * u : 0.0);
            return (l.alpha + l.beta * r) * std::pow(u, k + 1.0) / (k + 1.0)
                 + l.beta * std::pow(u, k + 2.0) / (k + 2.0);
        };
        return G(u_hi) - G(u_lo);
    };
    if (eb <= r)
        return below(r - eb, r - ea);
    if (ea >= r)
        return above(ea - r, eb - r);
    return below(0.0, r - ea) + above(0.0, eb - r);
}

} // namespace

double radial_potential(const RadialDensity& rho, double r, const Params& params,
                        const InteractionKernel* kernel) {
    if (r < 0.0)
        throw std::invalid_argument("radial_potential: r must be nonnegative");
    const double k = params.k;
    if (rho.N == 1) {
        double acc = 0.0;
        const auto& x = rho.nodes;
        for (std::size_t j = 0; j + 1 < x.size(); ++j) {
            const double ea = x[j], eb = x[j + 1];
            if (eb <= ea)
                continue;
            Lin l;
            l.beta = (rho.values[j + 1] - rho.values[j]) / (eb - ea);
            l.alpha = rho.values[j] - l.beta * ea;
            acc += cell_minus_Wk(l, r, k, ea, eb) + cell_plus_Wk(l, r, k, ea, eb);
        }
        return k == 0.0 ? acc : acc / k;
    }
    std::unique_ptr<InteractionKernel> own;
    if (!kernel) {
        own = std::make_unique<InteractionKernel>(rho.N, k);
        kernel = own.get();
    }
    const bool strongly_singular = (k <= 1.0 - rho.N);
    double acc = 0.0;
    for (std::size_t j = 0; j < rho.size(); ++j) {
        const double eta = rho.nodes[j];
        if (rho.values[j] == 0.0)
            continue;
        if (strongly_singular && std::abs(eta - r) < 1e-14 * std::max(1.0, r)) {
            // kernel average over the diagonal cell instead of the (infinite)
            // nodal value
            const double lo = j > 0 ? 0.5 * (rho.nodes[j - 1] + eta) : 0.0;
            const double hi = j + 1 < rho.size() ? 0.5 * (eta + rho.nodes[j + 1]) : eta;
            if (hi > lo) {
                auto f = [&](double e) { return kernel->at(r, e); };
                const double avg = (integrate_tanh_sinh(f, lo, r, 1e-10)
                                  + integrate_tanh_sinh(f, r, hi, 1e-10)) / (hi - lo);
                acc += rho.weights[j] * rho.values[j] * avg;
            }
            continue;
        }
        acc += rho.weights[j] * rho.values[j] * kernel->at(r, eta);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Radial force d/dr (W_k * rho)(r)
// ---------------------------------------------------------------------------

namespace {

// N = 1 closed forms for the derivative kernel sgn(r-eta)|r-eta|^{k-1} and
// (r+eta)^{k-1} against a piecewise-linear density.
double cell_plus_dWk(const Lin& l, double r, double k, double ea, double eb) {
    auto G = [&](double u) {
        if (k == 0.0)
            return (l.alpha - l.beta * r) * std::log(u) + l.beta * u;
        return (l.alpha - l.beta * r) * std::pow(u, k) / k
             + l.beta * std::pow(u, k + 1.0) / (k + 1.0);
    };
    return G(r + eb) - G(r + ea);
}

double cell_below_dWk(const Lin& l, double r, double k, double u_lo, double u_hi) {
    // + int [(alpha+beta r) - beta u] u^{k-1} du, u = r - eta
    auto G = [&](double u) {
        if (k == 0.0)
            return (l.alpha + l.beta * r) * std::log(u) - l.beta * u;
        return (l.alpha + l.beta * r) * std::pow(u, k) / k
             - l.beta * std::pow(u, k + 1.0) / (k + 1.0);
    };
    return G(u_hi) - G(u_lo);
}

double cell_above_dWk(const Lin& l, double r, double k, double u_lo, double u_hi) {
    // - int [(alpha+beta r) + beta u] u^{k-1} du, u = eta - r
    auto G = [&](double u) {
        if (k == 0.0)
            return (l.alpha + l.beta * r) * std::log(u) + l.beta * u;
        return (l.alpha + l.beta * r) * std::pow(u, k) / k
             + l.beta * std::pow(u, k + 1.0) / (k + 1.0);
    };
    return -(G(u_hi) - G(u_lo));
}

Lin cell_coeffs(const RadialDensity& rho, std::size_t j) {
    Lin l;
    const double ea = rho.nodes[j], eb = rho.nodes[j + 1];
    l.beta = (rho.values[j + 1] - rho.values[j]) / (eb - ea);
    l.alpha = rho.values[j] - l.beta * ea;
    return l;
}

double force_1d(const RadialDensity& rho, double r, double k, double pv_cutoff) {
    const auto& x = rho.nodes;
    const std::size_t M = x.size();
    PLDensity pl{rho};

    // locate the cell spacing near r for the default pairing window
    double local_h = x.back() / (M - 1);
    for (std::size_t j = 0; j + 1 < M; ++j)
        if (x[j] <= r && r <= x[j + 1]) {
            local_h = x[j + 1] - x[j];
            break;
        }
    double d = pv_cutoff > 0.0 ? pv_cutoff : 2.0 * local_h;
    d = std::min(d, r);
    const bool needs_pv = (k <= 0.0);

    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < M; ++j) {
        const double ea = x[j], eb = x[j + 1];
        if (eb <= ea)
            continue;
        const Lin l = cell_coeffs(rho, j);
        acc += cell_plus_dWk(l, r, k, ea, eb);
        if (!needs_pv) {
            // integrable kernel: direct integration, split at eta = r
            if (eb <= r)
                acc += cell_below_dWk(l, r, k, r - eb, r - ea);
            else if (ea >= r)
                acc += cell_above_dWk(l, r, k, ea - r, eb - r);
            else
                acc += cell_below_dWk(l, r, k, 0.0, r - ea)
                     + cell_above_dWk(l, r, k, 0.0, eb - r);
        } else {
            // outside the PV window only
            if (eb <= r - d)
                acc += cell_below_dWk(l, r, k, r - eb, r - ea);
            else if (ea >= r + d)
                acc += cell_above_dWk(l, r, k, ea - r, eb - r);
            else {
                if (ea < r - d)
                    acc += cell_below_dWk(l, r, k, d, r - ea);
                if (eb > r + d)
                    acc += cell_above_dWk(l, r, k, d, eb - r);
            }
        }
    }
    if (!needs_pv)
        return acc;

    // symmetric PV pairing over u in (0, d]: subintervals between node
    // distances keep both sides linear; the leading u^{k-1} terms cancel
    // through the continuity of the density at r.
    std::vector<double> brk;
    brk.push_back(0.0);
    for (std::size_t j = 0; j < M; ++j) {
        const double u = std::abs(x[j] - r);
        if (u > 0.0 && u < d)
            brk.push_back(u);
    }
    brk.push_back(d);
    std::sort(brk.begin(), brk.end());
    const double rho_r = pl(r);
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        const double u0 = brk[i], u1 = brk[i + 1];
        if (u1 <= u0)
            continue;
        // linear coefficients of rho(r -/+ u) = aL - bL u / aR + bR u on the piece
        const double vL0 = pl(r - u0), vL1 = pl(r - u1);
        const double vR0 = pl(r + u0), vR1 = pl(r + u1);
        double bL = (vL0 - vL1) / (u1 - u0);
        double bR = (vR1 - vR0) / (u1 - u0);
        double aL = vL0 + bL * u0;
        double aR = vR0 - bR * u0;
        if (i == 0) {
            // pin both sides to the common value at u = 0 so the u^k/k term
            // vanishes identically
            aL = rho_r;
            aR = rho_r;
            bL = (rho_r - vL1) / u1;
            bR = (vR1 - rho_r) / u1;
        }
        const double da = aL - aR;
        const double sb = bL + bR;
        if (k == 0.0) {
            if (i > 0)
                acc += da * (std::log(u1) - std::log(u0));
            acc += -sb * (u1 - u0);
        } else {
            if (i > 0)
                acc += da * (std::pow(u1, k) - std::pow(u0, k)) / k;
            acc += -sb * (std::pow(u1, k + 1.0) - std::pow(u0, k + 1.0)) / (k + 1.0);
        }
    }
    return acc;
}

double newtonian_force(const RadialDensity& rho, double r) {
    // Newton's shell theorem: M(r) r^{1-N}
    double mass_in = 0.0;
    const auto& x = rho.nodes;
    const double sig = rho.sigma();
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
        const double ea = x[j], eb = std::min(x[j + 1], r);
        if (eb <= ea)
            break;
        const Lin l = cell_coeffs(rho, j);
        // two-point Gauss on the cell for rho_hat(eta) sigma eta^{N-1}
        const double c = 0.5 * (ea + eb), h = 0.5 * (eb - ea);
        const double g = h / std::sqrt(3.0);
        for (double e : {c - g, c + g})
            mass_in += h * sig * (l.alpha + l.beta * e) * std::pow(e, rho.N - 1);
    }
    return mass_in * std::pow(r, 1.0 - rho.N);
}

} // namespace

double radial_force(const RadialDensity& rho, double r, const Params& params,
                    const PsiEvaluator* psi, double pv_cutoff) {
    if (r < 0.0)
        throw std::invalid_argument("radial_force: r must be nonnegative");
    if (r == 0.0)
        return 0.0; // odd symmetry
    const double k = params.k;
    if (rho.N == 1)
        return force_1d(rho, r, k, pv_cutoff);
    if (is_newtonian(rho.N, k))
        return newtonian_force(rho, r);

    std::unique_ptr<PsiEvaluator> own;
    if (!psi) {
        own = std::make_unique<PsiEvaluator>(rho.N, k);
        psi = own.get();
    }
    const auto& x = rho.nodes;
    const std::size_t M = x.size();
    const double sig = rho.sigma();
    PLDensity pl{rho};
    auto gfun = [&](double eta) { return sig * pl(eta) * std::pow(eta, rho.N - 1); };

    const bool singular = (k < 2.0 - rho.N);
    double integral = 0.0;
    if (!singular) {
        for (std::size_t j = 0; j < M; ++j) {
            if (rho.values[j] == 0.0)
                continue;
            const double s = x[j] / r;
            double val;
            if (s == 1.0)
                val = psi_quadrature(rho.N, k, 1.0, psi->options().quad_tol);
            else
                val = (*psi)(s);
            integral += rho.weights[j] * rho.values[j] * val;
        }
        return std::pow(r, k - 1.0) * integral;
    }

    // psi blows up like |1-s|^{N+k-2} toward s = 1: the inner zone
    // |eta - r| < 0.35 r is integrated against the piecewise-linear density
    // (pairing + one-sided quadrature); the nodal trapezoid handles only the
    // smooth outer region.  The boundary is node-aligned and independent of
    // the pairing cutoff.
    std::size_t j_lo = 0;
    for (std::size_t j = 0; j < M && x[j] <= 0.65 * r; ++j)
        j_lo = j;
    std::size_t j_hi = M - 1;
    for (std::size_t j = M; j-- > 0;) {
        if (x[j] >= std::min(1.35 * r, x.back()))
            j_hi = j;
        else
            break;
    }
    if (j_hi <= j_lo)
        j_hi = std::min(j_lo + 1, M - 1);
    const double L = x[j_lo];
    const double H = x[j_hi];

    // nodal sum outside [L, H]; boundary nodes keep only their outer half-cell
    for (std::size_t j = 0; j < M; ++j) {
        if (rho.values[j] == 0.0)
            continue;
        double w;
        if (j == j_lo)
            w = j > 0 ? 0.5 * (x[j] - x[j - 1]) * sig * std::pow(x[j], rho.N - 1) : 0.0;
        else if (j == j_hi)
            w = j + 1 < M ? 0.5 * (x[j + 1] - x[j]) * sig * std::pow(x[j], rho.N - 1) : 0.0;
        else if (j > j_lo && j < j_hi)
            continue;
        else
            w = rho.weights[j];
        if (w != 0.0)
            integral += w * rho.values[j] * (*psi)(x[j] / r);
    }

    auto onesided = [&](double a, double b) {
        if (b > a)
            integral += integrate_tanh_sinh(
                [&](double eta) { return (*psi)(eta / r) * gfun(eta); }, a, b, 1e-11);
    };
    if (r >= H || r <= L) {
        // r outside [L, H] (beyond the grid): no interior singularity
        onesided(L, H);
        return std::pow(r, k - 1.0) * integral;
    }
    // symmetric pairing over u in (0, d] cancels the +-K1 u^{N+k-2} parts;
    // the rest of the inner zone is one-sided quadrature
    double d = pv_cutoff > 0.0 ? pv_cutoff : 0.25 * r;
    d = std::min(d, 0.95 * std::min(r - L, H - r));
    const auto& cst = psi->constants();
    auto psi_at_offset = [&](double eps, Side side) -> double {
        // evaluate from the offset, not from s, so eps never rounds to 0
        if (cst && eps < psi->options().eps1)
            return psi_near_one(std::max(eps, 1e-13), side, 0.0, *cst);
        return (*psi)(side == Side::Below ? 1.0 - eps : 1.0 + eps);
    };
    auto paired = [&](double u) -> double {
        const double eps = u / r;
        const double above = psi_at_offset(eps, Side::Above) * gfun(r + u);
        const double below = r - u > 0.0 ? psi_at_offset(eps, Side::Below) * gfun(r - u) : 0.0;
        return above + below;
    };
    if (d > 0.0)
        integral += integrate_tanh_sinh(paired, 0.0, d, 1e-11);
    onesided(L, r - d);
    onesided(r + d, H);
    return std::pow(r, k - 1.0) * integral;
}

} // namespace faircomp
