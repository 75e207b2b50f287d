#include <doctest.h>

#include <cmath>

#include "faircomp/hyp2f1.hpp"
#include "faircomp/kernel.hpp"
#include "support/oracles.hpp"

using namespace faircomp;

TEST_SUITE_BEGIN("kernel");

TEST_CASE("psi(0) = 1 and frozen quadrature-oracle values") {
    for (int N : {2, 3, 6}) {
        for (double k : {-0.4, -1.2, 2.0 - N + 0.3, 1.0 - N - 0.2}) {
            if (!(k > -N && k < 0.0) || std::abs(k - (2.0 - N)) < 1e-12)
                continue;
            PsiEvaluator psi(N, k);
            CHECK(psi(0.0) == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
    // high-precision references
    CHECK(psi_quadrature(6, -1.5, 0.5) == doctest::Approx(0.82182630750833748).epsilon(1e-10));
    CHECK(psi_hypergeometric(6, -1.5, 0.5)
          == doctest::Approx(0.82182630750833748).epsilon(1e-12));
    CHECK(psi_hypergeometric(3, -0.5, 0.5)
          == doctest::Approx(0.94280904158206337).epsilon(1e-12));
    CHECK(psi_hypergeometric(2, -0.3, 2.0)
          == doctest::Approx(-0.036720586053258116).epsilon(1e-11));
    CHECK(psi_hypergeometric(6, -4.5, 0.5)
          == doctest::Approx(1.0817634775610754).epsilon(1e-12));
    CHECK(psi_hypergeometric(6, -4.5, 2.0)
          == doctest::Approx(-0.0012277400317520672).epsilon(1e-9));
    CHECK(psi_hypergeometric(3, -1.2, 0.7)
          == doctest::Approx(1.0755284942853522).epsilon(1e-12));
}

TEST_CASE("hypergeometric and quadrature backends agree off the blend region") {
    for (int N : {2, 3, 6}) {
        for (double k : {-0.3, -1.5, 2.0 - N - 0.3, 1.0 - N - 0.2}) {
            if (!(k > -N && k < 0.0))
                continue;
            PsiEvaluator psi(N, k);
            for (double s : {0.1, 0.4, 0.8, 1.2, 2.0, 4.0}) {
                const double hyp = psi.eval(s, PsiBackend::Hypergeometric);
                const double quad = psi.eval(s, PsiBackend::Quadrature);
                CHECK(std::abs(hyp - quad)
                      <= 1e-8 * std::max(std::abs(quad), 1e-12));
            }
        }
    }
}

TEST_CASE("Newtonian indicator and far field") {
    PsiEvaluator psi(3, -1.0);
    CHECK(psi.newtonian());
    CHECK(psi(0.5) == 1.0);
    CHECK(psi(2.0) == 0.0);
    CHECK_THROWS_AS(psi(1.0), SingularityError);
    CHECK_THROWS_AS(psi(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(PsiEvaluator(6, -4.5)(1.0), SingularityError);
    CHECK(psi_far_field(3, -1.0, 5.0) == doctest::Approx(0.0));

    // |s^{2-k} psi(s) - (N+k-2)/N| small at s = 1e3
    const double s = 1e3;
    const double limit = (3.0 - 0.5 - 2.0) / 3.0;
    const double val = psi_hypergeometric(3, -0.5, s) * std::pow(s, 2.5);
    CHECK(std::abs(val - limit) <= 1e-3);
    CHECK(psi_far_field(3, -0.5, s) * std::pow(s, 2.5) == doctest::Approx(limit));
}

TEST_CASE("sign and monotonicity (overall-behaviour lemma)") {
    // super-Newtonian: positive strictly decreasing
    {
        PsiEvaluator psi(3, -0.5);
        double prev = 1e300;
        for (double s : {0.0, 0.3, 0.8, 1.5, 3.0, 8.0}) {
            const double v = psi(s);
            CHECK(v > 0.0);
            CHECK(v < prev);
            prev = v;
        }
    }
    // sub-Newtonian: positive increasing below 1, negative increasing above
    {
        PsiEvaluator psi(6, -4.5);
        double prev = 0.0;
        for (double s : {0.1, 0.4, 0.7, 0.9, 0.99}) {
            const double v = psi(s);
            CHECK(v > 0.0);
            CHECK(v > prev);
            prev = v;
        }
        prev = -1e300;
        for (double s : {1.01, 1.2, 1.8, 4.0, 9.0}) {
            const double v = psi(s);
            CHECK(v < 0.0);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("near-one backend matches the independent theta-integral oracle") {
    // N = 6, k in {-4.5, -5}: the acceptance regime, plus a convergent-B1 case
    for (double k : {-4.5, -5.0, -5.4}) {
        PsiEvaluator psi(6, k);
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            for (double side : {-1.0, 1.0}) {
                const double s = 1.0 + side * eps;
                const double ref = oracle::psi_theta_integral(6, k, s, 1e-12);
                const double val = psi.eval(s, PsiBackend::NearOne);
                CHECK(std::abs(val - ref) <= 1e-6 * std::abs(ref));
            }
        }
    }
}

TEST_CASE("near-one expansion structure: K1 cancellation in symmetric pairs") {
    const auto c = asymptotic_constants(6, -4.5);
    CHECK(c.K1 > 0.0);
    CHECK(c.gamma_c > 0.0);
    CHECK(c.B1 == doctest::Approx(c.gamma_c * 5.0 / 0.5).epsilon(1e-13));
    double below = 0.0, above = 0.0;
    double prev_below = 0.0, prev_sum = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
        below = psi_near_one(eps, Side::Below, 0.0, c);
        above = psi_near_one(eps, Side::Above, 0.0, c);
        CHECK(below > 0.0);
        CHECK(above < 0.0);
        if (prev_below != 0.0) {
            // sides diverge like eps^{N+k-2} = eps^{-1/2}...
            CHECK(std::abs(below) > 2.0 * std::abs(prev_below));
            // ...while the paired sum stays bounded
            CHECK(std::abs(below + above) < std::abs(prev_sum) + 0.5);
        }
        prev_below = below;
        prev_sum = below + above;
    }
    // at the smallest eps the leading terms cancel to a few percent
    CHECK(std::abs(below + above) < 0.05 * std::abs(below));
    CHECK_THROWS_AS(asymptotic_constants(3, -0.5), std::invalid_argument);
}

TEST_CASE("B0 partial sums are consistent with zero") {
    // convergent regime: terms ~ n^{(N+k-5)/2}
    CHECK(std::abs(b0_partial_sum(6, -5.5, 20000)) < 1e-4);
    CHECK(std::abs(b0_partial_sum(3, -2.2, 20000)) < 1e-4);
    // partial sums shrink as the truncation grows
    CHECK(std::abs(b0_partial_sum(6, -5.5, 20000)) < std::abs(b0_partial_sum(6, -5.5, 200)));
}

namespace {

// fine uniform grid for sharp-jump anchor tests
RadialDensity uniform_grid_density(int N, double r_max, int M,
                                   const std::function<double(double)>& f) {
    RadialDensity rho;
    rho.N = N;
    rho.nodes.resize(M);
    for (int i = 0; i < M; ++i)
        rho.nodes[i] = r_max * i / (M - 1);
    rho.weights = radial_weights(N, rho.nodes);
    rho.values.resize(M);
    for (int i = 0; i < M; ++i)
        rho.values[i] = f(rho.nodes[i]);
    return rho;
}

} // namespace

TEST_CASE("radial potential: closed-form anchors") {
    // characteristic on [-1/2,1/2] in 1D, k = 0.5 at r = 0:
    // (1/k) int |y|^k dy = 2 (1/2)^{k+1} / (k(k+1))
    auto rho = uniform_grid_density(1, 2.0, 20001,
                                    [](double r) { return r <= 0.5 ? 1.0 : 0.0; });
    Params p(1, 0.5, 1.0);
    const double expected = 2.0 * std::pow(0.5, 1.5) / (0.5 * 1.5);
    CHECK(radial_potential(rho, 0.0, p) == doctest::Approx(expected).epsilon(1e-4));
    CHECK(expected == doctest::Approx(0.94280904158).epsilon(1e-9));
    // and the graded product grid converges to the same value
    auto rho2 = characteristic_density(1, 0.5, 3.0, 800);
    CHECK(radial_potential(rho2, 0.0, p) == doctest::Approx(expected).epsilon(5e-3));
}

TEST_CASE("radial force: Newton shell theorem") {
    // uniform unit-mass ball in 3D: force = M(r) r^{1-N}, M(0.5) = 1/8
    auto rho = uniform_grid_density(3, 2.0, 4001,
                                    [](double r) { return r <= 1.0 ? 1.0 : 0.0; });
    rho.renormalize();
    Params p(3, -1.0, 1.0);
    CHECK(radial_force(rho, 0.5, p) == doctest::Approx(0.5).epsilon(5e-3));
    CHECK(radial_force(rho, 0.0, p) == 0.0);
    // outside the ball the force decays like r^{2-N} times total mass
    CHECK(radial_force(rho, 2.0, p) == doctest::Approx(0.25).epsilon(5e-3));
    // internal consistency: the shell value integrates the same pl density
    const double plateau = rho.values[100];
    const double expect_pl = plateau * rho.sigma() * std::pow(0.5, 3) / 3.0 * std::pow(0.5, -2);
    CHECK(radial_force(rho, 0.5, p) == doctest::Approx(expect_pl).epsilon(1e-9));
}

TEST_CASE("radial force positivity for k > 0 and nonincreasing densities") {
    for (int N : {2, 3}) {
        auto rho = gaussian_density(N, 0.8, 8.0, 160);
        Params p(N, 0.5, 1.0);
        for (double r : {0.2, 0.7, 1.5, 3.0})
            CHECK(radial_force(rho, r, p) > 0.0);
    }
}

TEST_CASE("moment sandwich for the discrete potential") {
    auto rho = gaussian_density(2, 0.9, 9.0, 140);
    Params p(2, 0.5, 1.0);
    const double ik = rho.kth_moment(p.k);
    const double eta = std::max(1.0, std::pow(2.0, p.k - 1.0));
    InteractionKernel kern(2, p.k);
    for (std::size_t i = 0; i < rho.size(); i += 7) {
        const double r = rho.nodes[i];
        const double pot = radial_potential(rho, r, p, &kern);
        CHECK(pot >= ik * (1.0 - 1e-9));
        CHECK(pot <= eta * (std::pow(r, p.k) / p.k + ik) * (1.0 + 1e-9) + 1e-12);
    }
}

TEST_CASE("PV pairing is stable under halving the cutoff") {
    // 1D, k <= 1-N = 0 needs the principal value
    {
        auto rho = gaussian_density(1, 0.8, 6.0, 300);
        Params p(1, -0.5, 1.0);
        const double f1 = radial_force(rho, 0.7, p, nullptr, 0.08);
        const double f2 = radial_force(rho, 0.7, p, nullptr, 0.04);
        CHECK(std::abs(f1 - f2) <= 1e-6 * std::max(1.0, std::abs(f1)));
    }
    // N = 3, k = -2.2 < 1-N
    {
        auto rho = gaussian_density(3, 0.9, 6.0, 260);
        Params p(3, -2.2, 1.0);
        const double f1 = radial_force(rho, 0.8, p, nullptr, 0.12);
        const double f2 = radial_force(rho, 0.8, p, nullptr, 0.06);
        CHECK(std::abs(f1 - f2) <= 1e-5 * std::max(1.0, std::abs(f1)));
    }
}

TEST_CASE("radial potential N >= 2 against an independent double integral") {
    // oracle: (W_k * rho)(r) = int_0^inf Phi(r, eta) rho(eta) sigma_N eta^{N-1} d eta
    // with Phi the theta-averaged kernel, both by plain Simpson on the
    // piecewise-linear density
    const int N = 3;
    for (double k : {-0.5, 0.7}) {
        Params p(N, k, 1.0);
        InteractionKernel kern(N, k);
        auto value_at = [&](int M, double r, double& ref) {
            auto rho = gaussian_density(N, 0.9, 8.0, M);
            auto plr = [&](double eta) {
                const auto& x = rho.nodes;
                if (eta <= x.front()) return rho.values.front();
                if (eta >= x.back()) return 0.0;
                auto it = std::upper_bound(x.begin(), x.end(), eta);
                std::size_t j = it - x.begin();
                double t = (eta - x[j-1])/(x[j]-x[j-1]);
                return rho.values[j-1] + t*(rho.values[j]-rho.values[j-1]);
            };
            auto phi_avg = [&](double eta) {
                auto f = [&](double th) {
                    const double a2 = r*r + eta*eta - 2.0*r*eta*std::cos(th);
                    return std::pow(a2, 0.5*k)/k * std::pow(std::sin(th), N-2);
                };
                return oracle::sphere_area(N-1)/oracle::sphere_area(N)
                     * oracle::simpson(f, 0.0, M_PI, 1e-11);
            };
            auto outer = [&](double eta) {
                return phi_avg(eta) * plr(eta) * oracle::sphere_area(N)
                     * std::pow(eta, N-1);
            };
            // split at the kernel kink eta = r
            ref = oracle::simpson(outer, 1e-6, r*(1.0-1e-6), 1e-10)
                + oracle::simpson(outer, r*(1.0+1e-6), 8.0, 1e-10);
            return radial_potential(rho, r, p, &kern);
        };
        for (double r : {0.4, 1.1}) {
            double ref160 = 0.0, ref320 = 0.0;
            const double got160 = value_at(160, r, ref160);
            const double got320 = value_at(320, r, ref320);
            const double err160 = std::abs(got160 - ref160) / std::abs(ref160);
            const double err320 = std::abs(got320 - ref320) / std::abs(ref320);
            // nodal-quadrature accuracy level, tightening under refinement
            CHECK(err160 <= 5e-3);
            CHECK(err320 <= 0.55 * err160);
        }
    }
}

TEST_CASE("hypergeometric near-integer gap falls back to the raw series") {
    // c - a - b within 1e-9 of an integer but not exactly integral
    const double a = 0.8, b = 1.3;
    const double c = a + b + 1.0 + 5e-10;
    const double z = 0.93;
    const double direct = hyp2f1_series(a, b, c, z, 1e-16);
    CHECK(gauss_hypergeometric(a, b, c, z) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("interaction kernel cache returns consistent values") {
    InteractionKernel kern(3, -0.5);
    const double a = kern.at(1.0, 0.5);
    const double b = kern.at(2.0, 1.0); // same ratio, homogeneous scaling
    CHECK(b == doctest::Approx(a * std::pow(2.0, -0.5)).epsilon(1e-12));
}

TEST_SUITE_END();
