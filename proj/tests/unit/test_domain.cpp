#include <doctest.h>

#include <cmath>

#include "faircomp/domain.hpp"

using namespace faircomp;

TEST_SUITE_BEGIN("domain");

TEST_CASE("classification follows the sign of k and the derived m") {
    auto rep = classify(Params(1, -0.5, 1.0));
    CHECK(rep.regime == Regime::PorousMedium);
    CHECK(Params(1, -0.5, 1.0).m() == doctest::Approx(1.5).epsilon(1e-15));

    rep = classify(Params(2, 0.5, 1.0));
    CHECK(rep.regime == Regime::FastDiffusion);
    CHECK(rep.k_star == doctest::Approx(std::sqrt(5.0) - 1.0).epsilon(1e-14));

    rep = classify(Params(1, 0.95, 1.0));
    CHECK(rep.regime == Regime::FastDiffusion);
    CHECK(rep.k_energy == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_FALSE(rep.finite_rescaled_energy);

    CHECK(classify(Params(1, 0.0, 0.7)).regime == Regime::Logarithmic);
}

TEST_CASE("fair-competition constraint holds exactly") {
    for (int N : {1, 2, 3, 6}) {
        for (double k : {-0.9 * N, -0.3, 0.4, 0.9 * N - 1e-9}) {
            if (!(k > -static_cast<double>(N) && k < static_cast<double>(N)))
                continue;
            Params p(N, k, 1.0);
            CHECK(std::abs(N * (p.m() - 1.0) + p.k) <= 1e-15 * std::max(1.0, std::abs(k)));
        }
    }
}

TEST_CASE("threshold ordering 2N/(2+N) < k* < 2 for N = 2..10") {
    for (int N = 2; N <= 10; ++N) {
        const double ks = k_star_threshold(N);
        CHECK(k_energy_threshold(N) < ks);
        CHECK(ks < 2.0);
        CHECK(ks >= 1.0);
    }
}

TEST_CASE("params validation") {
    CHECK_THROWS_AS(Params(0, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Params(2, 2.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Params(2, -2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Params(2, 0.5, -1.0), std::invalid_argument);
    CHECK_NOTHROW(Params(2, 0.5, 0.0)); // chi = 0: interaction off
}

TEST_CASE("dilation preserves mass and composes") {
    auto rho = gaussian_density(3, 0.7, 8.0, 120);
    const double mass0 = rho.mass();
    auto d2 = dilate(rho, 2.0);
    CHECK(d2.mass() == doctest::Approx(mass0).epsilon(1e-14));

    auto d6a = dilate(dilate(rho, 2.0), 3.0);
    auto d6b = dilate(rho, 6.0);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        CHECK(d6a.nodes[i] == doctest::Approx(d6b.nodes[i]).epsilon(1e-14));
        CHECK(d6a.values[i] == doctest::Approx(d6b.values[i]).epsilon(1e-14));
    }
    CHECK(dilate(rho, 1.0).values == rho.values);
    CHECK_THROWS_AS(dilate(rho, 0.0), std::invalid_argument);
}

TEST_CASE("rescaling maps and their inverse") {
    Params p(1, 0.5, 1.0);
    auto m0 = rescaling_maps(p, 0.0);
    CHECK(m0.alpha == 1.0);
    CHECK(m0.beta == 0.0);

    Params p2(3, 2.0, 1.0);
    CHECK(rescaling_maps(p2, 3.0).beta == doctest::Approx(3.0));

    const auto m1 = rescaling_maps(p, 1.0);
    CHECK(beta_inverse(p, m1.beta) == doctest::Approx(1.0).epsilon(1e-12));

    // beta strictly increasing in t
    double prev = -1.0;
    for (double t : {0.0, 0.3, 0.9, 2.2}) {
        const double b = rescaling_maps(p, t).beta;
        CHECK(b > prev);
        prev = b;
    }
    CHECK_THROWS_AS(rescaling_maps(p, -1.0), std::invalid_argument);
}

TEST_CASE("bootstrap exponent iterates") {
    Params p(1, -0.5, 1.0); // m = 1.5
    const double p0 = -2.0 / 3.0;
    CHECK(bootstrap_exponent(p0, 0, p) == doctest::Approx(p0));
    CHECK(bootstrap_exponent(p0, 1, p) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
    CHECK(bootstrap_exponent(p0, 4, p) == doctest::Approx(13.0 / 3.0).epsilon(1e-13));

    // recursion g^{(n+1)}(p) = g(g^{(n)}(p))
    for (int n = 0; n < 6; ++n) {
        const double gn = bootstrap_exponent(p0, n, p);
        const double gn1 = bootstrap_exponent(p0, n + 1, p);
        CHECK(gn1 == doctest::Approx(bootstrap_exponent(gn, 1, p)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(bootstrap_exponent(0.5, 1, Params(1, 0.3, 1.0)), std::invalid_argument);
}

TEST_CASE("graded grid and trapezoidal weights integrate smooth densities") {
    // mass of the unit gaussian profile in 3D against sigma_3 r^2 dr
    auto rho = gaussian_density(3, 1.0, 10.0, 400);
    CHECK(rho.mass() == doctest::Approx(1.0).epsilon(1e-10));
    // geometric spacing near zero
    const auto& r = rho.nodes;
    CHECK(r[0] == 0.0);
    CHECK(r[2] / r[1] == doctest::Approx(1.05).epsilon(0.02));
    // second moment of the normalized gaussian: N sigma^2 = 3
    CHECK(rho.second_moment() == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("support radius and monotonicity flags") {
    auto rho = characteristic_density(1, 0.5, 4.0, 200);
    CHECK(rho.is_nonincreasing());
    CHECK(rho.support_radius() <= 0.5 + 1e-9);
    CHECK(rho.support_radius() >= 0.45);
}

TEST_SUITE_END();
