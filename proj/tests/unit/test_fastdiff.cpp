#include <doctest.h>

#include <cmath>

#include "faircomp/energy.hpp"
#include "faircomp/fastdiff.hpp"

using namespace faircomp;

TEST_SUITE_BEGIN("fastdiff");

TEST_CASE("A and B coefficients") {
    TOperatorConfig cfg;
    cfg.params = Params(1, 0.2, 1.2);
    CHECK(cfg.coef_A() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(cfg.coef_B() == doctest::Approx(0.125).epsilon(1e-15));
    cfg.params = Params(1, 0.95, 0.8);
    CHECK(cfg.coef_A() == doctest::Approx(30.4).epsilon(1e-13));
    CHECK(cfg.coef_B() == doctest::Approx(9.5).epsilon(1e-13));
}

TEST_CASE("normalization integrals: monotone in alpha") {
    Params p(1, 0.2, 1.2);
    for (double a : {0.1, 1.0, 10.0}) {
        CHECK(normalization_mass(p, 2.0 * a, true) < normalization_mass(p, a, true));
        CHECK(normalization_mass(p, 2.0 * a, false) < normalization_mass(p, a, false));
        // w <= W pointwise
        CHECK(normalization_mass(p, a, true) <= normalization_mass(p, a, false));
    }
}

TEST_CASE("delta bounds against the high-resolution quadrature oracle") {
    {
        const DeltaBounds db = delta_bounds(Params(1, 0.2, 1.2));
        CHECK(db.lower == doctest::Approx(1.1798066735332e-11).epsilon(1e-5));
        CHECK(db.upper == doctest::Approx(1.2180873452254).epsilon(1e-9));
        CHECK(db.lower <= db.upper);
    }
    {
        const DeltaBounds db = delta_bounds(Params(1, 0.95, 0.8));
        CHECK(db.lower == doctest::Approx(9.7982499626954e-7).epsilon(1e-7));
        CHECK(db.upper == doctest::Approx(0.91408140470934).epsilon(1e-9));
    }
    {
        const DeltaBounds db = delta_bounds(Params(3, 0.5, 0.7));
        CHECK(db.lower == doctest::Approx(0.08367752327395).epsilon(1e-9));
        CHECK(db.upper == doctest::Approx(1.3025040920039).epsilon(1e-9));
    }
}

TEST_CASE("integrability guard at k >= 2") {
    CHECK_THROWS_AS(delta_bounds(Params(3, 2.0, 1.0)), NonIntegrableError);
    CHECK_THROWS_AS(delta_bounds(Params(5, 2.7, 0.4)), NonIntegrableError);
}

TEST_CASE("apply_T: unit mass, monotone output, envelope and sandwich") {
    TOperatorConfig cfg;
    cfg.params = Params(1, 0.2, 1.2);
    cfg.grid_points = 160;
    const DeltaBounds db = delta_bounds(cfg.params);
    cfg.r_max = envelope_truncation_radius(cfg, db);
    CHECK(cfg.r_max > 1.0);

    RadialDensity rho = gaussian_density(1, 0.6, cfg.r_max, cfg.grid_points);
    InteractionKernel kern(1, cfg.params.k);
    for (int it = 0; it < 4; ++it) {
        const ApplyResult t = apply_T(rho, cfg, db, &kern);
        CHECK(t.density.mass() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(t.density.is_nonincreasing(1e-12));
        // delta sandwich at every iterate
        const double mid = cfg.coef_A() * rho.kth_moment(cfg.params.k) + t.C_const;
        CHECK(mid >= db.lower * (1.0 - 1e-6));
        CHECK(mid <= db.upper * (1.0 + 1e-6));
        // envelope at every iterate's output
        for (std::size_t i = 0; i < t.density.size(); i += 5) {
            const double r = t.density.nodes[i];
            CHECK(t.density.values[i] >= envelope_lower(r, cfg, db) * (1.0 - 1e-6));
            CHECK(t.density.values[i] <= envelope_upper(r, cfg, db) * (1.0 + 1e-6));
        }
        rho = t.density;
    }
}

TEST_CASE("fixed point at chi = 1.2, k = 0.2 from characteristic data") {
    TOperatorConfig cfg;
    cfg.params = Params(1, 0.2, 1.2);
    cfg.grid_points = 200;
    cfg.fp_tol = 1e-9;
    cfg.max_iter = 300;
    const DeltaBounds db = delta_bounds(cfg.params);
    cfg.r_max = envelope_truncation_radius(cfg, db);
    const RadialDensity init = characteristic_density(1, 0.5, cfg.r_max, cfg.grid_points);
    const FixedPointReport rep = solve_stationary(init, cfg);
    CHECK(rep.converged);
    CHECK(rep.envelope_ok);
    CHECK(rep.sandwich_ok);
    CHECK(rep.density.mass() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.density.is_nonincreasing(1e-10));
    // residual history is non-increasing over the last ten iterations
    const auto& h = rep.residual_history;
    REQUIRE(h.size() >= 12);
    for (std::size_t i = h.size() - 10; i < h.size(); ++i)
        CHECK(h[i] <= h[i - 1] * (1.0 + 1e-9));
    // the fixed point solves the rescaled stationary relation
    const ElResidual el = el_residual(rep.density, cfg.params);
    CHECK(el.sup_residual <= 50.0 * cfg.fp_tol * rep.density.max_value());
    // full support: strictly positive everywhere, reaching deep into the
    // fat-tail region (the 1e-8-relative detection threshold clips the
    // r^{-2N/k} tail before the truncation radius)
    for (double v : rep.density.values)
        CHECK(v > 0.0);
    CHECK(el.support_radius >= 0.6 * rep.density.nodes.back());
}

TEST_CASE("nonexistence diagnosis branches") {
    CHECK(check_nonexistence(Params(1, 0.5, 1.0, Frame::Original))
          == NonexistenceDiag::OriginalVariablesNone);
    CHECK(check_nonexistence(Params(3, 2.0, 1.0, Frame::Rescaled))
          == NonexistenceDiag::RescaledNone);
    CHECK(check_nonexistence(Params(2, 1.5, 1.0, Frame::Rescaled))
          == NonexistenceDiag::RescaledUnboundedKMoment);
    CHECK(check_nonexistence(Params(3, 1.1, 1.0, Frame::Rescaled))
          == NonexistenceDiag::RescaledOpen);
    CHECK(check_nonexistence(Params(1, 0.5, 1.0, Frame::Rescaled))
          == NonexistenceDiag::RescaledExists);
    CHECK(check_nonexistence(Params(2, 0.9, 1.0, Frame::Rescaled))
          == NonexistenceDiag::RescaledExists);
}

TEST_SUITE_END();
