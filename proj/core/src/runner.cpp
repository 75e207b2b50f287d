#include "faircomp/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "faircomp/energy.hpp"
#include "faircomp/fastdiff.hpp"
#include "faircomp/jko1d.hpp"
#include "faircomp/kernel.hpp"
#include "faircomp/quadrature.hpp"
#include "faircomp/report.hpp"
#include "faircomp/svg.hpp"

namespace faircomp {

namespace fs = std::filesystem;

namespace {

RadialDensity density_from_csv(const std::string& path, int N) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open initial-data file '" + path + "'");
    std::vector<double> r, v;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a, b;
        if (ss >> a >> b) {
            r.push_back(a);
            v.push_back(b);
        }
    }
    if (r.size() < 4)
        throw ConfigError("initial-data file '" + path + "' has fewer than 4 samples");
    RadialDensity rho;
    rho.N = N;
    rho.nodes = r;
    rho.values = v;
    rho.weights = radial_weights(N, r);
    rho.renormalize();
    return rho;
}

double barenblatt_scale(const Params& params, double r_max, int M) {
    // unit-mass constant for ((m-1)/m (D - r^2/2))_+^{1/(m-1)} on the grid
    const double m = params.m();
    RadialDensity rho;
    rho.N = params.N;
    rho.nodes = graded_nodes(r_max, M);
    rho.weights = radial_weights(params.N, rho.nodes);
    rho.values.assign(rho.nodes.size(), 0.0);
    auto mass_of = [&](double D) {
        double mass = 0.0;
        for (std::size_t i = 0; i < rho.nodes.size(); ++i) {
            const double u = (m - 1.0) / m * (D - 0.5 * rho.nodes[i] * rho.nodes[i]);
            mass += rho.weights[i] * (u > 0.0 ? std::pow(u, 1.0 / (m - 1.0)) : 0.0);
        }
        return mass - 1.0;
    };
    return bisect_expanding(mass_of, 0.1, 10.0, 1e-12);
}

} // namespace

RadialDensity make_initial_density(const RunConfig& cfg, double r_max, int M,
                                   double min_node) {
    switch (cfg.initial) {
    case InitialKind::Characteristic:
        return characteristic_density(cfg.params.N, cfg.radius, r_max, M, min_node);
    case InitialKind::Gaussian:
        return gaussian_density(cfg.params.N, cfg.sigma, r_max, M, min_node);
    case InitialKind::Barenblatt: {
        if (!(cfg.params.m() > 1.0))
            throw ConfigError("barenblatt initial data needs the porous-medium regime (k < 0)");
        const double m = cfg.params.m();
        const double D = barenblatt_scale(cfg.params, r_max, M);
        RadialDensity rho;
        rho.N = cfg.params.N;
        rho.nodes = graded_nodes(r_max, M);
        rho.weights = radial_weights(cfg.params.N, rho.nodes);
        rho.values.resize(rho.nodes.size());
        for (std::size_t i = 0; i < rho.nodes.size(); ++i) {
            const double u = (m - 1.0) / m * (D - 0.5 * rho.nodes[i] * rho.nodes[i]);
            rho.values[i] = u > 0.0 ? std::pow(u, 1.0 / (m - 1.0)) : 0.0;
        }
        rho.renormalize();
        return rho;
    }
    case InitialKind::FromFile:
        return density_from_csv(cfg.initial_path, cfg.params.N);
    }
    throw ConfigError("unhandled initial-data kind");
}

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::ios_base::failure("cannot create output directory '" + dir + "'");
}

std::string backend_name(int N, double k, double s, const PsiOptions& opt) {
    if (std::abs(k - (2.0 - N)) < 1e-13)
        return "newtonian";
    if (k < 2.0 - N && std::abs(s - 1.0) < opt.eps1)
        return "near_one";
    if (k < 0.0 && s >= opt.s_far)
        return "far_field";
    return "hypergeometric";
}

int run_fixed_point(const RunConfig& cfg) {
    TOperatorConfig tc;
    tc.params = cfg.params;
    tc.grid_points = cfg.M;
    tc.fp_tol = cfg.fp_tol;
    tc.max_iter = cfg.max_iter;
    tc.relaxation = cfg.relaxation;
    tc.mass_tol = cfg.mass_tol;
    const DeltaBounds db = delta_bounds(cfg.params);
    double r_max = cfg.r_max;
    if (r_max <= 0.0)
        r_max = envelope_truncation_radius(tc, db);
    tc.r_max = r_max;

    const RadialDensity initial =
        make_initial_density(cfg, r_max, cfg.M, peak_resolution_radius(tc, db));
    const FixedPointReport rep = solve_stationary(initial, tc);
    const Params& p = cfg.params;

    ensure_dir(cfg.out_dir);
    if (cfg.csv) {
        std::vector<std::vector<double>> prof, env;
        for (std::size_t i = 0; i < rep.density.size(); ++i) {
            const double r = rep.density.nodes[i];
            prof.push_back({r, rep.density.values[i]});
            env.push_back({r, rep.density.values[i], envelope_lower(r, tc, db),
                           envelope_upper(r, tc, db)});
        }
        write_csv(cfg.out_dir + "/profile.csv", {"r", "rho"}, prof);
        write_csv(cfg.out_dir + "/envelope.csv", {"r", "rho", "m_envelope", "M_envelope"}, env);
    }
    if (cfg.json) {
        Json j = fixed_point_json(rep, p);
        InteractionKernel kern(p.N, p.k);
        j["energy"] = energy_json(free_energy(rep.density, p, &kern), p);
        write_json_file(cfg.out_dir + "/report.json", j);
    }
    if (cfg.svg) {
        PlotSeries rho_s{"stationary state", rep.density.nodes, rep.density.values, "#c22",
                         false, false};
        PlotSeries init_s{"initial data", initial.nodes, initial.values, "#222", false, false};
        std::vector<double> menv, Menv;
        for (double r : rep.density.nodes) {
            menv.push_back(envelope_lower(r, tc, db));
            Menv.push_back(envelope_upper(r, tc, db));
        }
        PlotSeries lo_s{"m(x)", rep.density.nodes, menv, "#24c", false, true};
        PlotSeries hi_s{"M(x)", rep.density.nodes, Menv, "#24c", true, false};
        PlotSpec lin;
        lin.title = "stationary state (chi=" + format_g17(p.chi) + ", k=" + format_g17(p.k) + ")";
        lin.xlabel = "r";
        lin.ylabel = "rho";
        write_svg_plot(cfg.out_dir + "/density.svg", lin, {init_s, rho_s});
        PlotSpec logp = lin;
        logp.title = "log density with envelope bounds";
        logp.log_y = true;
        logp.y_floor = 1e-12 * rep.density.max_value();
        write_svg_plot(cfg.out_dir + "/logdensity.svg", logp, {rho_s, lo_s, hi_s});
    }
    return rep.converged ? 0 : 3;
}

int run_jko(const RunConfig& cfg) {
    if (cfg.params.N != 1)
        throw ConfigError("jko mode integrates the 1D dynamics only (N = 1)");
    double r_max = cfg.r_max > 0.0 ? cfg.r_max : 6.0;
    const RadialDensity initial = make_initial_density(cfg, r_max, std::max(cfg.M, 64));
    Pseudoinverse q = pseudoinverse_from_density(initial, cfg.M);

    JkoOptions jopt;
    jopt.dt0 = cfg.dt;
    jopt.dt_max = cfg.dt_max;
    jopt.newton_tol = cfg.newton_tol;
    jopt.steady_tol = cfg.steady_tol;
    const JkoRunReport rep = run(std::move(q), cfg.params, cfg.t_end, jopt);

    ensure_dir(cfg.out_dir);
    if (cfg.csv) {
        std::vector<std::vector<double>> traj;
        for (std::size_t i = 0; i < rep.times.size(); ++i) {
            const EnergyBreakdown& e = rep.energies[i];
            traj.push_back({rep.times[i], e.total, e.entropy, e.interaction,
                            2.0 * e.confinement, rep.com[i], rep.min_cell[i],
                            rep.max_density[i]});
        }
        write_csv(cfg.out_dir + "/trajectory.csv",
                  {"t", "F_total", "U", "W", "V", "com", "min_cell", "max_density"}, traj);
        std::vector<std::vector<double>> prof;
        for (std::size_t i = 0; i < rep.steady_profile.size(); ++i)
            prof.push_back({rep.steady_profile.nodes[i], rep.steady_profile.values[i]});
        write_csv(cfg.out_dir + "/profile.csv", {"x", "rho"}, prof);
    }
    if (cfg.json)
        write_json_file(cfg.out_dir + "/report.json", jko_json(rep, cfg.params));
    if (cfg.svg) {
        PlotSeries prof{"final profile", rep.steady_profile.nodes, rep.steady_profile.values,
                        "#c22", false, false};
        PlotSeries init_s{"initial data", initial.nodes, initial.values, "#222", false, false};
        PlotSpec ps;
        ps.title = "gradient-flow limit (chi=" + format_g17(cfg.params.chi)
                 + ", k=" + format_g17(cfg.params.k) + ")";
        ps.xlabel = "x";
        ps.ylabel = "rho";
        write_svg_plot(cfg.out_dir + "/density.svg", ps, {init_s, prof});
        PlotSeries en{"F", rep.times, {}, "#24c", false, false};
        for (const auto& e : rep.energies)
            en.y.push_back(e.total);
        PlotSpec es;
        es.title = "free energy decay";
        es.xlabel = "t";
        es.ylabel = "F";
        write_svg_plot(cfg.out_dir + "/energy.svg", es, {en});
    }
    return rep.blowup ? 3 : 0;
}

int run_envelope(const RunConfig& cfg) {
    TOperatorConfig tc;
    tc.params = cfg.params;
    const DeltaBounds db = delta_bounds(cfg.params);
    double r_max = cfg.r_max > 0.0 ? cfg.r_max : envelope_truncation_radius(tc, db);
    ensure_dir(cfg.out_dir);
    const auto nodes = graded_nodes(r_max, cfg.M);
    if (cfg.csv) {
        std::vector<std::vector<double>> rows;
        for (double r : nodes)
            rows.push_back({r, 0.0, envelope_lower(r, tc, db), envelope_upper(r, tc, db)});
        write_csv(cfg.out_dir + "/envelope.csv", {"r", "rho", "m_envelope", "M_envelope"}, rows);
    }
    if (cfg.json) {
        Json j;
        j["delta_lower"] = db.lower;
        j["delta_upper"] = db.upper;
        j["A"] = tc.coef_A();
        j["B"] = tc.coef_B();
        j["r_max"] = r_max;
        j["chi"] = cfg.params.chi;
        j["k"] = cfg.params.k;
        j["N"] = cfg.params.N;
        write_json_file(cfg.out_dir + "/report.json", j);
    }
    return 0;
}

int run_psi_table(const RunConfig& cfg) {
    ensure_dir(cfg.out_dir);
    std::string csv = "k,s,psi,backend\n";
    std::vector<PlotSeries> series;
    const int nk = static_cast<int>(std::round((cfg.psi_k_max - cfg.psi_k_min) / cfg.psi_k_step)) + 1;
    for (int ik = 0; ik < nk; ++ik) {
        const double k = cfg.psi_k_min + ik * cfg.psi_k_step;
        if (std::abs(k) < 1e-12 || k <= -cfg.psi_N || k >= 2.0)
            continue;
        PsiEvaluator psi(cfg.psi_N, k);
        PlotSeries s;
        s.label = "";
        const int hue = (ik * 47) % 360;
        char col[32];
        std::snprintf(col, sizeof(col), "hsl(%d,60%%,40%%)", hue);
        s.color = col;
        for (int i = 0; i < cfg.psi_s_count; ++i) {
            const double sv = cfg.psi_s_min
                            + (cfg.psi_s_max - cfg.psi_s_min) * i / (cfg.psi_s_count - 1);
            if (std::abs(sv - 1.0) < 1e-9)
                continue;
            double value;
            try {
                value = psi(sv);
            } catch (const SingularityError&) {
                continue;
            }
            csv += format_g17(k) + "," + format_g17(sv) + "," + format_g17(value) + ","
                 + backend_name(cfg.psi_N, k, sv, psi.options()) + "\n";
            if (std::abs(value) < 50.0) {
                s.x.push_back(sv);
                s.y.push_back(value);
            }
        }
        series.push_back(std::move(s));
    }
    if (cfg.csv)
        write_text_file(cfg.out_dir + "/psi_table.csv", csv);
    if (cfg.svg) {
        PlotSpec ps;
        ps.title = "psi_k families, N=" + std::to_string(cfg.psi_N);
        ps.xlabel = "s";
        ps.ylabel = "psi_k(s)";
        write_svg_plot(cfg.out_dir + "/psi.svg", ps, series);
    }
    return 0;
}

int run_chic_sweep(const RunConfig& cfg) {
    const ChiSweepResult res = sweep_chi(cfg);
    ensure_dir(cfg.out_dir);
    if (cfg.csv) {
        std::vector<std::vector<double>> rows;
        for (const auto& e : res.entries)
            rows.push_back({e.chi, e.fk, e.converged ? 1.0 : 0.0});
        write_csv(cfg.out_dir + "/sweep.csv", {"chi", "F_k", "converged"}, rows);
    }
    if (cfg.json) {
        Json j;
        j["k"] = cfg.params.k;
        j["N"] = cfg.params.N;
        Json entries = Json::array();
        for (const auto& e : res.entries) {
            Json je;
            je["chi"] = e.chi;
            je["F_k"] = e.fk;
            je["converged"] = e.converged;
            entries.push_back(je);
        }
        j["entries"] = entries;
        j["crossing_found"] = res.crossing_found;
        j["crossing_chi"] = res.crossing_chi;
        j["hls_chi_c"] = res.hls_chi_c;
        j["relative_gap"] = res.relative_gap;
        j["chi_c_note"] = "crossing and HLS values are implementation-derived estimates";
        write_json_file(cfg.out_dir + "/sweep.json", j);
    }
    if (cfg.svg) {
        PlotSeries s{"steady-state F_k", {}, {}, "#c22", false, false};
        for (const auto& e : res.entries) {
            s.x.push_back(e.chi);
            s.y.push_back(e.fk);
        }
        PlotSpec ps;
        ps.title = "zero-energy crossing, k=" + format_g17(cfg.params.k);
        ps.xlabel = "chi";
        ps.ylabel = "F_k of the steady limit";
        write_svg_plot(cfg.out_dir + "/sweep.svg", ps, {s});
    }
    // supercritical members collapsing is an expected finding (they are
    // flagged in the report); the sweep only fails when nothing converged
    bool any_ok = false;
    for (const auto& e : res.entries)
        any_ok |= e.converged;
    return any_ok ? 0 : 3;
}

} // namespace

ChiSweepResult sweep_chi(const RunConfig& cfg) {
    if (cfg.params.k > 0.0)
        throw ConfigError("chi sweep requires the porous-medium or logarithmic regime (k <= 0)");
    if (cfg.params.frame != Frame::Rescaled)
        throw ConfigError("chi sweep runs in the rescaled frame");
    const std::vector<double> chis = cfg.sweep_chis();
    if (chis.size() < 2)
        throw ConfigError("chi sweep needs at least two chi values ([sweep] chi_list or chi_min/chi_max/count)");

    ChiSweepResult res;
    res.entries.resize(chis.size());
    std::atomic<std::size_t> next{0};
    const int jobs = std::max(1, cfg.jobs);

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= chis.size())
                return;
            Params p(cfg.params.N, cfg.params.k, chis[i], Frame::Rescaled);
            RunConfig sub = cfg;
            sub.params = p;
            const double r_max = cfg.r_max > 0.0 ? cfg.r_max : 6.0;
            const RadialDensity init = make_initial_density(sub, r_max, std::max(cfg.M, 64));
            Pseudoinverse q = pseudoinverse_from_density(init, cfg.M);
            JkoOptions jopt;
            jopt.dt0 = cfg.dt;
            jopt.dt_max = cfg.dt_max;
            jopt.newton_tol = cfg.newton_tol;
            jopt.steady_tol = cfg.steady_tol;
            const JkoRunReport rep = run(std::move(q), p, cfg.t_end, jopt);
            ChiSweepEntry e;
            e.chi = chis[i];
            e.converged = rep.converged_to_steady;
            if (!rep.energies.empty()) {
                const EnergyBreakdown& en = rep.energies.back();
                e.fk = en.entropy + p.chi * en.interaction; // confinement-free part
            }
            res.entries[i] = e;
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();

    // linear interpolation through the first sign change; collapsing members
    // carry strongly negative recorded energies and are flagged, so the
    // crossing lands just above the last steady chi
    for (std::size_t i = 0; i + 1 < res.entries.size(); ++i) {
        const auto& a = res.entries[i];
        const auto& b = res.entries[i + 1];
        if (a.fk > 0.0 && b.fk <= 0.0) {
            res.crossing_found = true;
            res.crossing_chi = a.chi + (b.chi - a.chi) * a.fk / (a.fk - b.fk);
            break;
        }
    }
    if (cfg.params.k < 0.0) {
        const HlsEstimate est = estimate_chi_c(cfg.params, cfg.hls_budget);
        res.hls_chi_c = est.chi_c;
        if (res.crossing_found && est.chi_c > 0.0)
            res.relative_gap = std::abs(res.crossing_chi - est.chi_c) / est.chi_c;
    }
    return res;
}

int run_config(const RunConfig& cfg) {
    try {
        switch (cfg.mode) {
        case RunMode::FixedPoint:
            return run_fixed_point(cfg);
        case RunMode::Jko:
            return run_jko(cfg);
        case RunMode::ChiCSweep:
            return run_chic_sweep(cfg);
        case RunMode::PsiTable:
            return run_psi_table(cfg);
        case RunMode::Envelope:
            return run_envelope(cfg);
        }
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const NonIntegrableError& e) {
        std::cerr << "solver diagnosis: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "solver diagnosis: " << e.what() << "\n";
        return 3;
    } catch (const std::runtime_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    }
}

} // namespace faircomp
