#include "faircomp/jko1d.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "faircomp/quadrature.hpp"

namespace faircomp {

bool Pseudoinverse::monotone() const {
    for (std::size_t i = 0; i + 1 < X.size(); ++i)
        if (!(X[i + 1] > X[i]))
            return false;
    return true;
}

double Pseudoinverse::min_cell() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < X.size(); ++i)
        m = std::min(m, X[i + 1] - X[i]);
    return m;
}

double Pseudoinverse::com() const {
    double s = 0.0;
    for (double x : X)
        s += x;
    return s * dw();
}

double Pseudoinverse::max_density() const {
    return dw() / min_cell();
}

namespace {

double wkern(double d, double k) {
    return k == 0.0 ? std::log(d) : std::pow(d, k) / k;
}

} // namespace

EnergyBreakdown quantile_energy(const Pseudoinverse& q, const Params& params) {
    const int M = q.size();
    const double dw = q.dw();
    const double m = params.m();
    EnergyBreakdown e;
    double U = 0.0;
    for (int i = 0; i + 1 < M; ++i) {
        const double slope = (q.X[i + 1] - q.X[i]) / dw;
        U += params.logarithmic() ? -std::log(slope) : std::pow(slope, 1.0 - m);
    }
    e.entropy = params.logarithmic() ? dw * U / params.N
                                     : dw * U / (params.N * (m - 1.0));
    double W = 0.0;
    for (int i = 0; i < M; ++i)
        for (int j = i + 1; j < M; ++j)
            W += wkern(q.X[j] - q.X[i], params.k);
    e.interaction = 2.0 * W * dw * dw;
    if (params.frame == Frame::Rescaled) {
        double V = 0.0;
        for (int i = 0; i < M; ++i)
            V += q.X[i] * q.X[i];
        e.confinement = 0.5 * V * dw;
    }
    double ik = 0.0;
    for (int i = 0; i < M; ++i)
        ik += wkern(std::abs(q.X[i]) > 0.0 ? std::abs(q.X[i]) : 1e-300, params.k);
    e.kth_moment = ik * dw;
    e.total = e.entropy + params.chi * e.interaction + e.confinement;
    return e;
}

std::vector<double> jko_velocity(const Pseudoinverse& q, const Params& params) {
    if (!q.monotone())
        throw std::invalid_argument("jko_velocity: non-monotone pseudoinverse");
    const int M = q.size();
    const double dw = q.dw();
    const double m = params.m();
    const double km1 = params.k - 1.0;
    std::vector<double> v(M, 0.0);

    // diffusion: -d/dw (dX/dw)^{-m}, zero-flux (vacuum) at the boundaries
    std::vector<double> u(M + 1, 0.0);
    for (int i = 0; i + 1 < M; ++i)
        u[i + 1] = std::pow((q.X[i + 1] - q.X[i]) / dw, -m);
    for (int i = 0; i < M; ++i)
        v[i] = -(u[i + 1] - u[i]) / dw;

    // interaction: discrete principal value (diagonal excluded); X is
    // increasing so sgn(X_i - X_j) = sgn(i - j)
    for (int i = 0; i < M; ++i) {
        double s = 0.0;
        for (int j = 0; j < i; ++j)
            s += std::pow(q.X[i] - q.X[j], km1);
        for (int j = i + 1; j < M; ++j)
            s -= std::pow(q.X[j] - q.X[i], km1);
        v[i] -= 2.0 * params.chi * dw * s;
    }

    if (params.frame == Frame::Rescaled)
        for (int i = 0; i < M; ++i)
            v[i] -= q.X[i];
    return v;
}

namespace {

void assemble_jacobian(const std::vector<double>& X, const Params& params, double dt,
                       Eigen::MatrixXd& J) {
    const int M = static_cast<int>(X.size());
    const double dw = 1.0 / M;
    const double m = params.m();
    const double km2 = params.k - 2.0;
    J.setZero(M, M);
    // dv/dX = diffusion tridiagonal + dense interaction (+ -I rescaled)
    for (int i = 0; i + 1 < M; ++i) {
        const double c = m / (dw * dw) * std::pow((X[i + 1] - X[i]) / dw, -m - 1.0);
        // interface i+1/2 appears in v_i and v_{i+1} with opposite signs
        J(i, i) -= c;
        J(i, i + 1) += c;
        J(i + 1, i + 1) -= c;
        J(i + 1, i) += c;
    }
    const double cint = 2.0 * params.chi * dw * (params.k - 1.0);
    for (int i = 0; i < M; ++i) {
        double diag = 0.0;
        for (int j = 0; j < M; ++j) {
            if (j == i)
                continue;
            const double g = cint * std::pow(std::abs(X[i] - X[j]), km2);
            J(i, j) += g;
            diag -= g;
        }
        J(i, i) += diag;
    }
    if (params.frame == Frame::Rescaled)
        J.diagonal().array() -= 1.0;
    // G(Y) = Y - X - dt v(Y)  =>  J_G = I - dt dv/dY
    J *= -dt;
    J.diagonal().array() += 1.0;
}

} // namespace

StepOutcome step_implicit(Pseudoinverse& q, const Params& params, double dt,
                          const JkoOptions& opt) {
    const int M = q.size();
    const double dw = q.dw();
    StepOutcome out;
    if (!q.monotone())
        throw std::invalid_argument("step_implicit: non-monotone pseudoinverse");

    const EnergyBreakdown e0 = quantile_energy(q, params);
    std::vector<double> Y = q.X;
    Eigen::VectorXd G(M), p(M);
    Eigen::MatrixXd J;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;

    const double scale = std::max(1.0, std::abs(q.X.front()) + std::abs(q.X.back()));
    const double gtol = opt.newton_tol * scale;

    auto residual = [&](const std::vector<double>& Z, Eigen::VectorXd& R) -> double {
        Pseudoinverse tmp;
        tmp.X = Z;
        const std::vector<double> v = jko_velocity(tmp, params);
        double n = 0.0;
        for (int i = 0; i < M; ++i) {
            R(i) = Z[i] - q.X[i] - dt * v[i];
            n = std::max(n, std::abs(R(i)));
        }
        return n;
    };

    double gnorm = residual(Y, G);
    bool factored = false;
    int since_factor = 0;
    for (int it = 0; it < opt.max_newton; ++it) {
        if (gnorm <= gtol) {
            out.newton_iters = it;
            // proximal (JKO) descent check; the slack tracks the summation
            // noise of the energy (its terms cancel, so |total| is not the
            // right scale near a steady state)
            Pseudoinverse trial;
            trial.X = Y;
            const EnergyBreakdown e1 = quantile_energy(trial, params);
            double dist2 = 0.0;
            for (int i = 0; i < M; ++i)
                dist2 += (Y[i] - q.X[i]) * (Y[i] - q.X[i]);
            const double prox = e1.total + dw * dist2 / (2.0 * dt);
            const double noise = std::abs(e0.entropy)
                               + std::abs(params.chi * e0.interaction) + e0.confinement;
            if (prox > e0.total + opt.energy_slack * std::max(1.0, noise))
                return out; // not a descent step: reject, caller shrinks dt
            q.X = Y;
            q.t += dt;
            q.dt = dt;
            out.accepted = true;
            return out;
        }
        if (!factored || since_factor >= 6) {
            assemble_jacobian(Y, params, dt, J);
            lu.compute(J);
            factored = true;
            since_factor = 0;
        }
        p = lu.solve(-G);
        ++since_factor;

        // monotonicity-preserving damping
        double lam = 1.0;
        for (int i = 0; i + 1 < M; ++i) {
            const double dY = Y[i + 1] - Y[i];
            const double dp = p(i + 1) - p(i);
            if (dp < 0.0 && dY + lam * dp <= 0.0)
                lam = std::min(lam, -0.9 * dY / dp);
        }
        if (lam < 1e-12) {
            out.monotonicity_failure = true;
            return out;
        }
        std::vector<double> Ynew(M);
        double gnew = 0.0;
        Eigen::VectorXd Gnew(M);
        bool ok = false;
        for (int bt = 0; bt < 12; ++bt) {
            for (int i = 0; i < M; ++i)
                Ynew[i] = Y[i] + lam * p(i);
            bool mono = true;
            for (int i = 0; i + 1 < M; ++i)
                if (!(Ynew[i + 1] > Ynew[i])) {
                    mono = false;
                    break;
                }
            if (mono) {
                gnew = residual(Ynew, Gnew);
                if (gnew < gnorm * (1.0 - 1e-4 * lam) || gnew <= gtol) {
                    ok = true;
                    break;
                }
                // stagnating with a stale Jacobian: force a rebuild
                if (since_factor > 1)
                    break;
            }
            lam *= 0.5;
        }
        if (!ok) {
            if (since_factor > 1) {
                factored = false; // refresh Jacobian and retry
                continue;
            }
            out.newton_iters = it + 1;
            out.monotonicity_failure = !Pseudoinverse{Ynew, 0.0}.monotone();
            return out;
        }
        Y = Ynew;
        G = Gnew;
        gnorm = gnew;
        out.newton_iters = it + 1;
    }
    return out; // max_newton exceeded: rejected
}

JkoRunReport run(Pseudoinverse initial, const Params& params, double t_end,
                 const JkoOptions& opt) {
    JkoRunReport rep;
    Pseudoinverse q = std::move(initial);
    const double init_min_cell = q.min_cell();
    double dt = opt.dt0;
    int consecutive_ok = 0;
    int consecutive_fail = 0;
    int steady_count = 0;

    auto record = [&](int newton_iters) {
        rep.times.push_back(q.t);
        rep.energies.push_back(quantile_energy(q, params));
        rep.com.push_back(q.com());
        rep.min_cell.push_back(q.min_cell());
        rep.max_density.push_back(q.max_density());
        rep.newton_iters.push_back(newton_iters);
    };
    record(0);

    int steps = 0;
    int floor_rejections = 0;
    while (q.t < t_end && steps++ < opt.max_steps) {
        const double dt_eff = std::min(dt, t_end - q.t);
        StepOutcome s = step_implicit(q, params, dt_eff, opt);
        if (!s.accepted) {
            ++rep.steps_rejected;
            ++consecutive_fail;
            consecutive_ok = 0;
            const double mc = q.min_cell();
            if (consecutive_fail >= 5 && mc < 1e-12 * init_min_cell) {
                rep.blowup = true; // aggregation collapse: a diagnosis, not an error
                break;
            }
            if (dt <= opt.dt_min) {
                // stalled at the step-size floor: a collapsing minimum cell
                // is the blow-up signature, anything else is a plain stall
                if (++floor_rejections >= 30) {
                    rep.blowup = mc < 1e-2 * init_min_cell;
                    break;
                }
            }
            dt = std::max(0.5 * dt, opt.dt_min);
            continue;
        }
        ++rep.steps_accepted;
        consecutive_fail = 0;
        floor_rejections = 0;
        record(s.newton_iters);
        if (++consecutive_ok >= opt.grow_after) {
            dt = std::min(2.0 * dt, opt.dt_max);
            consecutive_ok = 0;
        }
        double vmax = 0.0;
        for (double v : jko_velocity(q, params))
            vmax = std::max(vmax, std::abs(v));
        if (vmax <= opt.steady_tol) {
            if (++steady_count >= opt.steady_consecutive) {
                rep.converged_to_steady = true;
                break;
            }
        } else {
            steady_count = 0;
        }
    }
    rep.final_state = q;
    rep.steady_profile = density_from_pseudoinverse(q);
    return rep;
}

Pseudoinverse pseudoinverse_from_density(const RadialDensity& rho, int M) {
    if (rho.N != 1)
        throw std::invalid_argument("pseudoinverse_from_density: N = 1 only");
    RadialDensity r = rho;
    r.renormalize();
    // half-line mass H(x) = int_0^x rho(eta) d eta, piecewise quadratic
    const std::size_t n = r.size();
    std::vector<double> H(n, 0.0);
    for (std::size_t j = 0; j + 1 < n; ++j)
        H[j + 1] = H[j] + 0.5 * (r.values[j] + r.values[j + 1]) * (r.nodes[j + 1] - r.nodes[j]);
    const double half = H[n - 1];

    Pseudoinverse q;
    q.X.resize(M);
    auto invert_half = [&](double target) -> double {
        // find x >= 0 with H(x) = target
        const auto it = std::lower_bound(H.begin(), H.end(), target);
        std::size_t j = static_cast<std::size_t>(it - H.begin());
        if (j == 0)
            return r.nodes[0];
        if (j >= n)
            return r.nodes[n - 1];
        --j;
        const double a = r.nodes[j], b = r.nodes[j + 1];
        const double va = r.values[j], vb = r.values[j + 1];
        const double need = target - H[j];
        const double slope = (vb - va) / (b - a);
        // solve va*s + slope*s^2/2 = need for s in [0, b-a]
        if (std::abs(slope) < 1e-300)
            return a + (va > 0.0 ? need / va : 0.0);
        const double disc = va * va + 2.0 * slope * need;
        const double s = disc > 0.0 ? (-va + std::sqrt(disc)) / slope : 0.0;
        return a + std::clamp(s, 0.0, b - a);
    };
    for (int i = 0; i < M; ++i) {
        const double w = (i + 0.5) / M;
        const double u = w - 0.5;
        const double x = invert_half(std::min(std::abs(u), half * (1.0 - 1e-14)));
        q.X[i] = u >= 0.0 ? x : -x;
    }
    // enforce strict monotonicity against flat stretches of the CDF
    for (int i = 1; i < M; ++i)
        if (q.X[i] <= q.X[i - 1])
            q.X[i] = q.X[i - 1] + 1e-14 * std::max(1.0, std::abs(q.X[i - 1]));
    return q;
}

RadialDensity density_from_pseudoinverse(const Pseudoinverse& q, int grid_points,
                                         double r_max) {
    const int M = q.size();
    const double dw = q.dw();
    // cell midpoint samples (|x|, rho), folded to the radial axis
    std::vector<std::pair<double, double>> samples;
    samples.reserve(M - 1);
    for (int i = 0; i + 1 < M; ++i) {
        const double mid = 0.5 * (q.X[i] + q.X[i + 1]);
        const double rho = dw / (q.X[i + 1] - q.X[i]);
        samples.emplace_back(std::abs(mid), rho);
    }
    std::sort(samples.begin(), samples.end());
    if (r_max <= 0.0)
        r_max = std::max(std::abs(q.X.front()), std::abs(q.X.back())) * 1.05 + 1e-12;
    if (grid_points <= 0)
        grid_points = std::max(64, M / 2);

    RadialDensity out;
    out.N = 1;
    out.nodes = graded_nodes(r_max, grid_points);
    out.weights = radial_weights(1, out.nodes);
    out.values.resize(out.nodes.size());
    auto interp = [&](double x) -> double {
        if (samples.empty())
            return 0.0;
        if (x <= samples.front().first)
            return samples.front().second;
        if (x >= samples.back().first)
            return 0.0;
        auto it = std::lower_bound(samples.begin(), samples.end(),
                                   std::make_pair(x, -1.0));
        const auto hi = it;
        const auto lo = it - 1;
        const double t = (x - lo->first) / (hi->first - lo->first);
        return lo->second + t * (hi->second - lo->second);
    };
    for (std::size_t i = 0; i < out.nodes.size(); ++i)
        out.values[i] = interp(out.nodes[i]);
    return out;
}

RadialDensity self_similar_reconstruct(const RadialDensity& steady, const Params& params,
                                       double tau) {
    const double t = beta_inverse(params, tau);
    const double alpha = std::exp(t);
    // u(t,x) = alpha^N rho(beta(t), alpha x) with u == steady for all t
    // =>  rho(tau, y) = alpha^{-N} steady(y/alpha): a dilation by 1/alpha
    return dilate(steady, 1.0 / alpha);
}

} // namespace faircomp
