#include "faircomp/energy.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "faircomp/quadrature.hpp"

namespace faircomp {

namespace {

double entropy_term(const RadialDensity& rho, const Params& params) {
    const double m = params.m();
    double s = 0.0;
    if (params.logarithmic()) {
        for (std::size_t i = 0; i < rho.size(); ++i)
            if (rho.values[i] > 0.0)
                s += rho.weights[i] * rho.values[i] * std::log(rho.values[i]);
        return s / params.N;
    }
    for (std::size_t i = 0; i < rho.size(); ++i)
        s += rho.weights[i] * std::pow(rho.values[i], m);
    return s / (params.N * (m - 1.0));
}

double interp_value(const RadialDensity& rho, double r) {
    const auto& x = rho.nodes;
    if (r <= x.front())
        return rho.values.front();
    if (r >= x.back())
        return 0.0;
    const auto it = std::upper_bound(x.begin(), x.end(), r);
    const std::size_t j = static_cast<std::size_t>(it - x.begin());
    const double t = (r - x[j - 1]) / (x[j] - x[j - 1]);
    return rho.values[j - 1] + t * (rho.values[j] - rho.values[j - 1]);
}

std::unique_ptr<InteractionKernel> ensure_kernel(const RadialDensity& rho, const Params& params,
                                                 const InteractionKernel*& kernel) {
    std::unique_ptr<InteractionKernel> own;
    if (!kernel) {
        own = std::make_unique<InteractionKernel>(rho.N, params.k);
        kernel = own.get();
    }
    return own;
}

} // namespace

EnergyBreakdown free_energy(const RadialDensity& rho, const Params& params,
                            const InteractionKernel* kernel) {
    auto own = ensure_kernel(rho, params, kernel);
    EnergyBreakdown e;
    e.entropy = entropy_term(rho, params);
    double w = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho.values[i] == 0.0)
            continue;
        w += rho.weights[i] * rho.values[i] * radial_potential(rho, rho.nodes[i], params, kernel);
    }
    e.interaction = w;
    e.kth_moment = rho.kth_moment(params.k);
    if (params.frame == Frame::Rescaled)
        e.confinement = 0.5 * rho.second_moment();
    e.total = e.entropy + params.chi * e.interaction + e.confinement;
    const double m = params.m();
    if (m < 1.0 && !rho.values.empty() && rho.values.back() > 0.0) {
        // fat-tail truncation estimate assuming the stationary decay r^{-2N/k}
        const double rmax = rho.nodes.back();
        const double vm = std::pow(rho.values.back(), m);
        const double p = -2.0 * params.N / params.k * m + params.N - 1.0;
        if (p < -1.0)
            e.entropy_tail_bound = rho.sigma() * vm * rmax / (-p - 1.0)
                                 / std::abs(params.N * (m - 1.0));
    }
    return e;
}

double first_variation(const RadialDensity& rho, double r, const Params& params,
                       const InteractionKernel* kernel) {
    auto own = ensure_kernel(rho, params, kernel);
    const double m = params.m();
    const double v = interp_value(rho, r);
    double ent;
    if (params.logarithmic()) {
        if (v <= 0.0)
            throw std::domain_error("first_variation: log rho undefined at rho = 0");
        ent = (std::log(v) + 1.0) / params.N;
    } else if (m > 1.0) {
        ent = m / (params.N * (m - 1.0)) * std::pow(v, m - 1.0);
    } else {
        if (v <= 0.0)
            throw std::domain_error("first_variation: rho^{m-1} diverges at rho = 0 for m < 1");
        ent = m / (params.N * (m - 1.0)) * std::pow(v, m - 1.0);
    }
    double t = ent + 2.0 * params.chi * radial_potential(rho, r, params, kernel);
    if (params.frame == Frame::Rescaled)
        t += 0.5 * r * r;
    return t;
}

ElResidual el_residual(const RadialDensity& rho, const Params& params,
                       const InteractionKernel* kernel) {
    auto own = ensure_kernel(rho, params, kernel);
    ElResidual out;
    out.support_radius = rho.support_radius();
    const double m = params.m();
    const double cut = 1e-8 * rho.max_value();
    const std::size_t M = rho.size();

    std::vector<double> pot(M);
    for (std::size_t i = 0; i < M; ++i)
        pot[i] = radial_potential(rho, rho.nodes[i], params, kernel);

    EnergyBreakdown e = free_energy(rho, params, kernel);
    double norm_m = 0.0;
    for (std::size_t i = 0; i < M; ++i)
        norm_m += rho.weights[i] * std::pow(rho.values[i], m);

    if (params.k < 0.0) {
        const double c = params.N * (m - 1.0) / m;
        double d_sum = 0.0;
        int d_count = 0;
        std::vector<double> g(M);
        for (std::size_t i = 0; i < M; ++i) {
            g[i] = -2.0 * params.chi * pot[i];
            if (params.frame == Frame::Rescaled)
                g[i] -= 0.5 * rho.nodes[i] * rho.nodes[i];
            if (rho.values[i] > cut) {
                d_sum += std::pow(rho.values[i], m - 1.0) / c - g[i];
                ++d_count;
            }
        }
        out.d_fitted = d_count > 0 ? d_sum / d_count : 0.0;
        const double fk = e.entropy + params.chi * e.interaction;
        if (params.frame == Frame::Original)
            out.d_closed_form = 2.0 * fk + (m - 2.0) / (params.N * (m - 1.0)) * norm_m;
        else
            out.d_closed_form = 2.0 * e.total - 0.5 * rho.second_moment()
                              + (m - 2.0) / (params.N * (m - 1.0)) * norm_m;
        double sup = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            if (rho.values[i] <= cut)
                continue;
            const double rhs = c * std::max(g[i] + out.d_fitted, 0.0);
            sup = std::max(sup, std::abs(std::pow(rho.values[i], m - 1.0) - rhs));
        }
        out.sup_residual = sup;
        return out;
    }
    if (params.k > 0.0) {
        // rho should equal (A W*rho + B r^2 + C)^{-N/k} with C fixed by mass
        const double A = 2.0 * params.chi * params.N * params.k / (params.N - params.k);
        const double B = params.frame == Frame::Rescaled
                             ? params.N * params.k / (2.0 * (params.N - params.k))
                             : 0.0;
        auto t_mass = [&](double C) {
            double mass = 0.0;
            for (std::size_t i = 0; i < M; ++i) {
                const double base = A * pot[i] + B * rho.nodes[i] * rho.nodes[i] + C;
                if (base <= 0.0)
                    return 1e300;
                mass += rho.weights[i] * std::pow(base, -params.N / params.k);
            }
            return mass;
        };
        const double ik = rho.kth_moment(params.k);
        double lo = -A * ik + 1e-14, hi = -A * ik + 10.0;
        const double C = bisect_expanding([&](double c2) { return t_mass(c2) - 1.0; },
                                          lo + 1e-12, hi, 1e-13);
        double sup = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            const double base = A * pot[i] + B * rho.nodes[i] * rho.nodes[i] + C;
            const double t = base > 0.0 ? std::pow(base, -params.N / params.k) : 1e300;
            sup = std::max(sup, std::abs(rho.values[i] - t));
        }
        out.sup_residual = sup;
        out.d_fitted = C;
        out.d_closed_form = C;
        return out;
    }
    // logarithmic case: constancy of the first variation on the support
    double tmin = 1e300, tmax = -1e300;
    for (std::size_t i = 0; i < M; ++i) {
        if (rho.values[i] <= cut)
            continue;
        double t = (std::log(rho.values[i]) + 1.0) / params.N
                 + 2.0 * params.chi * pot[i];
        if (params.frame == Frame::Rescaled)
            t += 0.5 * rho.nodes[i] * rho.nodes[i];
        tmin = std::min(tmin, t);
        tmax = std::max(tmax, t);
    }
    out.sup_residual = tmax > tmin ? 0.5 * (tmax - tmin) : 0.0;
    out.d_fitted = 0.5 * (tmax + tmin);
    out.d_closed_form = out.d_fitted;
    return out;
}

double hls_ratio(const RadialDensity& rho, const Params& params,
                 const InteractionKernel* kernel) {
    if (!(params.k < 0.0))
        throw std::invalid_argument("hls_ratio: k < 0 required");
    auto own = ensure_kernel(rho, params, kernel);
    const double m = params.m();
    const double mass = rho.mass();
    double norm_m = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i)
        norm_m += rho.weights[i] * std::pow(rho.values[i], m);
    if (!(mass > 0.0) || !(norm_m > 0.0))
        throw std::invalid_argument("hls_ratio: zero norms");
    double w = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho.values[i] == 0.0)
            continue;
        w += rho.weights[i] * rho.values[i] * radial_potential(rho, rho.nodes[i], params, kernel);
    }
    const double numer = std::abs(params.k * w);
    const double theta = (params.N + params.k) / params.N;
    return numer / (std::pow(mass, theta) * norm_m);
}

namespace {

struct RatioWorkspace {
    // dense symmetric |x-y|^k angular-average matrix on the grid
    std::vector<double> Kmat;
    RadialDensity grid;
    double theta;
    double m;

    double ratio(const std::vector<double>& f) const {
        const std::size_t M = grid.size();
        double mass = 0.0, nm = 0.0, inter = 0.0;
        for (std::size_t i = 0; i < M; ++i) {
            mass += grid.weights[i] * f[i];
            nm += grid.weights[i] * std::pow(f[i], m);
        }
        for (std::size_t i = 0; i < M; ++i) {
            if (f[i] == 0.0)
                continue;
            double row = 0.0;
            for (std::size_t j = 0; j < M; ++j)
                row += grid.weights[j] * f[j] * Kmat[i * M + j];
            inter += grid.weights[i] * f[i] * row;
        }
        if (!(mass > 0.0) || !(nm > 0.0))
            return 0.0;
        return std::abs(inter) / (std::pow(mass, theta) * nm);
    }
};

} // namespace

HlsEstimate estimate_chi_c(const Params& params, int budget, const ChiCOptions& opt) {
    if (!(params.k < 0.0))
        throw std::invalid_argument("estimate_chi_c: k < 0 required");
    const double m = params.m();
    const int M = opt.grid_points;

    RatioWorkspace ws;
    ws.grid.N = params.N;
    ws.grid.nodes = graded_nodes(opt.r_max, M);
    ws.grid.weights = radial_weights(params.N, ws.grid.nodes);
    ws.grid.values.assign(M, 0.0);
    ws.theta = (params.N + params.k) / params.N;
    ws.m = m;

    // |x-y|^k angular average matrix; the diagonal uses the in-cell average
    // so the singular column stays integrable.
    InteractionKernel kern(params.N, params.k);
    ws.Kmat.assign(static_cast<std::size_t>(M) * M, 0.0);
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j <= i; ++j) {
            double v;
            if (i == j) {
                const double r = ws.grid.nodes[i];
                const double lo = i > 0 ? 0.5 * (ws.grid.nodes[i - 1] + r) : 0.0;
                const double hi = i + 1 < M ? 0.5 * (r + ws.grid.nodes[i + 1]) : r;
                if (hi > lo && r > 0.0) {
                    auto f = [&](double e) { return params.k * kern.at(r, e); };
                    v = (integrate_tanh_sinh(f, lo, r, 1e-9)
                       + integrate_tanh_sinh(f, r, hi, 1e-9)) / (hi - lo);
                } else {
                    v = 0.0;
                }
            } else {
                v = params.k * kern.at(ws.grid.nodes[i], ws.grid.nodes[j]);
            }
            ws.Kmat[static_cast<std::size_t>(i) * M + j] = v;
            ws.Kmat[static_cast<std::size_t>(j) * M + i] = v;
        }
    }

    HlsEstimate est;
    std::vector<double> best(M, 0.0);

    auto consider = [&](const std::vector<double>& f, const std::string& label) {
        const double r = ws.ratio(f);
        if (r > est.c_star_lower) {
            est.c_star_lower = r;
            best = f;
        }
        est.trace.emplace_back(label, est.c_star_lower);
    };

    // Barenblatt-like exponent family (1 - (r/R)^2)_+^q; scale drops out of
    // the ratio, so only the shape exponent is scanned.
    const double R = 0.5 * opt.r_max;
    for (int s = 0; s < opt.seed_scan; ++s) {
        const double q = 0.25 + s * (6.0 / opt.seed_scan);
        std::vector<double> f(M, 0.0);
        for (int i = 0; i < M; ++i) {
            const double u = 1.0 - std::pow(ws.grid.nodes[i] / R, 2.0);
            f[i] = u > 0.0 ? std::pow(u, q) : 0.0;
        }
        consider(f, "exponent q=" + std::to_string(q));
    }
    {
        std::vector<double> f(M, 0.0);
        for (int i = 0; i < M; ++i)
            f[i] = std::exp(-0.5 * std::pow(ws.grid.nodes[i] / (0.25 * opt.r_max), 2.0));
        consider(f, "gaussian");
    }

    // projected gradient ascent on the nodal values
    double step = opt.ascent_step;
    std::vector<double> grad(M), trial(M);
    int it = 0;
    for (; it < budget; ++it) {
        double mass = 0.0, nm = 0.0, inter = 0.0;
        for (int i = 0; i < M; ++i) {
            mass += ws.grid.weights[i] * best[i];
            nm += ws.grid.weights[i] * std::pow(best[i], m);
        }
        std::vector<double> row(M, 0.0);
        for (int i = 0; i < M; ++i) {
            double s = 0.0;
            for (int j = 0; j < M; ++j)
                s += ws.grid.weights[j] * best[j] * ws.Kmat[static_cast<std::size_t>(i) * M + j];
            row[i] = s;
            inter += ws.grid.weights[i] * best[i] * s;
        }
        const double sgn_i = inter >= 0.0 ? 1.0 : -1.0;
        double gnorm = 0.0;
        for (int i = 0; i < M; ++i) {
            const double dI = 2.0 * row[i] * sgn_i;
            const double dlog = dI / std::max(std::abs(inter), 1e-300)
                              - ws.theta / mass
                              - m * std::pow(best[i], m - 1.0) / nm;
            grad[i] = dlog;
            gnorm = std::max(gnorm, std::abs(dlog));
        }
        if (gnorm == 0.0)
            break;
        bool improved = false;
        for (int bt = 0; bt < 8 && !improved; ++bt) {
            for (int i = 0; i < M; ++i)
                trial[i] = std::max(best[i] * (1.0 + step * grad[i] / gnorm), 0.0);
            const double r = ws.ratio(trial);
            if (r > est.c_star_lower * (1.0 + 1e-13)) {
                est.c_star_lower = r;
                best = trial;
                improved = true;
            } else {
                step *= 0.5;
            }
        }
        if (!improved) {
            est.trace.emplace_back("ascent converged", est.c_star_lower);
            break;
        }
        if ((it + 1) % 16 == 0)
            est.trace.emplace_back("ascent it=" + std::to_string(it + 1), est.c_star_lower);
    }
    est.improved_at_budget = (it == budget);
    est.chi_c = est.c_star_lower > 0.0 ? 1.0 / est.c_star_lower : 0.0;
    return est;
}

} // namespace faircomp
