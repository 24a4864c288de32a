#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ahq/surface_geometry.hpp"

#include <cmath>
#include <random>

using namespace ahq;

namespace {
const double kPi = std::acos(-1.0);

GridPtr test_grid() {
    static GridPtr g = make_grid(32);
    return g;
}

AHExpansionData make_test_data(std::uint64_t seed, double amp = 1e-2, int lmax = 6, bool zero_p = false) {
    RandomDataParams p;
    p.seed = seed;
    p.lmax = lmax;
    p.amplitude = amp;
    p.zero_momentum = zero_p;
    return generate_random_bandlimited(test_grid(), p);
}
} // namespace

TEST_CASE("coordinate sphere expansion") {
    GridPtr g = test_grid();

    SUBCASE("zero data has a vanishing expansion") {
        SphereExpansion e = coordinate_sphere_expansion(AHExpansionData::zero(g));
        CHECK(e.h_m2.max_abs() == 0.0);
        CHECK(e.h_m3.max_abs() == 0.0);
        CHECK(e.alpha_m1.max_abs() < 1e-15);
        CHECK(e.alpha_m2_curl.max_abs() < 1e-15);
    }

    SUBCASE("schwarzschild aspect: h_m2 = -2 m0, alpha_m1 = 0") {
        SphereExpansion e = coordinate_sphere_expansion(generate_schwarzschild_aspect(g, 1.5));
        CHECK((e.h_m2 + ScalarField(g, 3.0)).max_abs() < 1e-13);
        CHECK(e.alpha_m1.max_abs() < 1e-12);
        // h_m3 = -m^2/4 = -9/4 for this data
        CHECK((e.h_m3 + ScalarField(g, 9.0 / 4.0)).max_abs() < 1e-12);
    }

    SUBCASE("alpha_m1 is curl-free for any data") {
        AHExpansionData d = make_test_data(21, 0.05);
        SphereExpansion e = coordinate_sphere_expansion(d);
        CHECK(curl(e.alpha_m1).max_abs() < 1e-10);
    }

    SUBCASE("sigma coefficients are passed through") {
        AHExpansionData d = make_test_data(22);
        SphereExpansion e = coordinate_sphere_expansion(d);
        CHECK((e.sigma_0.comp_tp() - d.g_ab_0.comp_tp()).max_abs() == 0.0);
        CHECK((e.sigma_m1.comp_tt() - d.g_ab_m1.comp_tt()).max_abs() == 0.0);
    }

    SUBCASE("invalid data is refused") {
        AHExpansionData d = AHExpansionData::zero(g);
        for (int j = 0; j < g->nlat(); ++j)
            for (int k = 0; k < g->nlon(); ++k)
                d.g_ab_0.comp_tt()(j, k) = 1.0;
        CHECK_THROWS_AS(coordinate_sphere_expansion(d), std::invalid_argument);
    }
}

TEST_CASE("boosted expansion") {
    GridPtr g = test_grid();

    SUBCASE("identity boost reduces to the coordinate-sphere expansion") {
        AHExpansionData d = make_test_data(30);
        SphereExpansion e = coordinate_sphere_expansion(d);
        auto [lead, sub] = boosted_expansion(d, BoostVector::identity());
        CHECK((lead - ScalarField(g, 2.0)).max_abs() == 0.0);
        CHECK((sub - e.h_m2).max_abs() < 1e-13);
    }

    SUBCASE("zero data boosts to zero subleading") {
        auto [lead, sub] = boosted_expansion(AHExpansionData::zero(g), BoostVector::from_rapidity(0.8, 1));
        CHECK(sub.max_abs() == 0.0);
    }

    SUBCASE("constant aspect against the pointwise cube") {
        AHExpansionData d = generate_schwarzschild_aspect(g, 1.0); // m = 2
        const double beta = 0.7;
        auto [lead, sub] = boosted_expansion(d, BoostVector::from_rapidity(beta, 3));
        double worst = 0.0;
        for (int j = 0; j < g->nlat(); ++j)
            for (int k = 0; k < g->nlon(); ++k) {
                const double invF = std::cosh(beta) + std::sinh(beta) * g->cos_theta(j);
                worst = std::max(worst, std::abs(sub(j, k) + 2.0 * invF * invF * invF));
            }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("constant curvature identity of the boosted factor") {
    GridPtr g = test_grid();
    CHECK(gauss_curvature_check(g, BoostVector::identity()).max_abs() < 1e-13);
    CHECK(gauss_curvature_check(g, BoostVector::from_rapidity(0.5, 3)).max_abs() < 1e-8);
    // sharper factors need a finer band
    GridPtr g48 = make_grid(48);
    CHECK(gauss_curvature_check(g48, BoostVector::from_rapidity(1.0, 3)).max_abs() < 1e-8);
    // off-axis boost
    CHECK(gauss_curvature_check(g, BoostVector::from_spatial({0.2, 0.3, -0.1})).max_abs() < 1e-9);
}

TEST_CASE("linearized embedding solve") {
    GridPtr g = test_grid();

    SUBCASE("zero input gives zero output") {
        EmbeddingLinearization lin = solve_linearized_embedding(ScalarField(g), SymTensorField(g));
        CHECK(lin.F_pot.max_abs() < 1e-14);
        CHECK(lin.P_a.max_abs() < 1e-14);
        CHECK(lin.h0_m3.max_abs() < 1e-14);
        CHECK(lin.compatibility_residual < 1e-14);
    }

    SUBCASE("pure Y20 deformation satisfies the moment identity") {
        YlmSpectrum s(g->band_limit());
        s(2, 0) = 1.0;
        ScalarField X0 = synthesize(s, g);
        EmbeddingLinearization lin = solve_linearized_embedding(X0, SymTensorField(g));
        CHECK(lin.compatibility_residual < 1e-10);
        // h_m2 = -(lap+2) X0 = 4 Y20 up to an irrelevant constant
        ScalarField h_m2 = -1.0 * (laplacian(X0) + 2.0 * X0);
        ScalarField integrand = lin.h0_m3 + 0.25 * pointwise_product(h_m2, h_m2);
        for (int i = 1; i <= 3; ++i)
            CHECK(std::abs(integrate(pointwise_product(coordinate_function(g, i), integrand))) < 1e-10);
    }

    SUBCASE("random deformation and metric perturbation") {
        std::mt19937_64 rng(44);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        YlmSpectrum xs(g->band_limit());
        TensorPotentials tp{YlmSpectrum(g->band_limit()), YlmSpectrum(g->band_limit()),
                            YlmSpectrum(g->band_limit())};
        for (int ell = 2; ell <= 8; ++ell)
            for (int m = -ell; m <= ell; ++m) {
                xs(ell, m) = 0.2 * u(rng);
                tp.e_pot(ell, m) = 0.2 * u(rng);
                tp.b_pot(ell, m) = 0.2 * u(rng);
            }
        ScalarField X0 = synthesize(xs, g);
        SymTensorField g0 = synthesize_tensor(tp, g);
        EmbeddingLinearization lin = solve_linearized_embedding(X0, g0);
        CHECK(lin.compatibility_residual < 1e-8);

        // divergence identity, both sides by quadrature
        ScalarField divP = divergence(lin.P_a);
        ScalarField trT = trace(lin.T_ab);
        for (int i = 1; i <= 3; ++i) {
            const double lhs = integrate(pointwise_product(coordinate_function(g, i), divP));
            const double rhs = -0.5 * integrate(pointwise_product(coordinate_function(g, i), trT));
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
        }

        // the full moment identity, with the solve-consistent h_m2
        ScalarField h_m2 = -1.0 * (laplacian(X0) + 2.0 * X0);
        ScalarField integrand = lin.h0_m3 + 0.25 * pointwise_product(h_m2, h_m2);
        for (int i = 1; i <= 3; ++i)
            CHECK(std::abs(integrate(pointwise_product(coordinate_function(g, i), integrand))) < 1e-8);
    }

    SUBCASE("non-traceless metric perturbations are refused") {
        SymTensorField bad(g);
        for (int j = 0; j < g->nlat(); ++j)
            for (int k = 0; k < g->nlon(); ++k)
                bad.comp_tt()(j, k) = 1.0;
        CHECK_THROWS_AS(solve_linearized_embedding(ScalarField(g), bad), std::invalid_argument);
    }
}

TEST_CASE("finite-radius mean curvature oracle") {
    GridPtr g = test_grid();

    SUBCASE("zero data matches the closed form") {
        AHExpansionData d = AHExpansionData::zero(g);
        for (double r : {100.0, 400.0}) {
            ScalarField H = finite_r_mean_curvature(d, r);
            const double expect = hyperboloid_mean_curvature(r);
            double worst = 0.0;
            for (double v : H.values())
                worst = std::max(worst, std::abs(v - expect));
            CHECK(worst < 1e-12);
        }
    }

    SUBCASE("schwarzschild aspect: r^2 (|H| - 2/r) -> -2 by Richardson extrapolation") {
        AHExpansionData d = generate_schwarzschild_aspect(g, 1.0);
        auto f = [&](double r) {
            ScalarField H = finite_r_mean_curvature(d, r);
            return r * r * (H(3, 5) - 2.0 / r);
        };
        const double f1 = f(100.0), f2 = f(200.0), f3 = f(400.0);
        const double lim = (4.0 * (2.0 * f3 - f2) - (2.0 * f2 - f1)) / 3.0;
        CHECK(std::abs(lim + 2.0) < 1e-6);
    }

    SUBCASE("fit across radii reproduces h_m2") {
        AHExpansionData d = make_test_data(55, 1e-3);
        std::vector<std::pair<double, ScalarField>> samples;
        for (double r : {100.0, 200.0, 400.0, 800.0}) {
            ScalarField H = finite_r_mean_curvature(d, r);
            const double base = hyperboloid_mean_curvature(r);
            for (double& v : H.values())
                v -= base;
            samples.emplace_back(r, std::move(H));
        }
        ExpansionFit fit = extract_expansion(samples, {2, 3});
        SphereExpansion e = coordinate_sphere_expansion(d);
        CHECK((fit.coeffs[0] - e.h_m2).max_abs() < 1e-6);
        // remainder against the stored h_m3 stays bounded
        double worst = 0.0;
        for (const auto& [r, H] : samples)
            for (int j = 0; j < g->nlat(); ++j)
                for (int k = 0; k < g->nlon(); ++k)
                    worst = std::max(worst,
                                     std::abs(r * r * r * (H(j, k) - e.h_m2(j, k) / (r * r)) - e.h_m3(j, k)));
        CHECK(worst < 1.0);
    }

    SUBCASE("raw three-order fit recovers the leading 2/r as well") {
        AHExpansionData d = make_test_data(321, 1e-3);
        const std::vector<double> radii{50.0, 100.0, 200.0, 400.0};
        std::vector<ScalarField> H = finite_r_mean_curvature(d, radii);
        std::vector<std::pair<double, ScalarField>> samples;
        for (size_t i = 0; i < radii.size(); ++i)
            samples.emplace_back(radii[i], H[i]);
        ExpansionFit fit = extract_expansion(samples, {1, 2, 3});
        SphereExpansion e = coordinate_sphere_expansion(d);
        CHECK((fit.coeffs[0] - ScalarField(g, 2.0)).max_abs() < 1e-6);
        CHECK((fit.coeffs[1] - e.h_m2).max_abs() < 1e-4);
        CHECK(fit.max_residual * std::pow(radii.front(), 4) < 1e-2);
    }

    SUBCASE("batched evaluation matches the per-radius oracle") {
        AHExpansionData d = make_test_data(56, 1e-2);
        const std::vector<double> radii{50.0, 120.0};
        std::vector<ScalarField> batch = finite_r_mean_curvature(d, radii);
        REQUIRE(batch.size() == 2);
        for (size_t i = 0; i < radii.size(); ++i)
            CHECK((batch[i] - finite_r_mean_curvature(d, radii[i])).max_abs() == 0.0);
    }

    SUBCASE("small radii are rejected") {
        CHECK_THROWS_AS(finite_r_mean_curvature(AHExpansionData::zero(g), 5.0), std::invalid_argument);
    }

    SUBCASE("oversized data yields NonSpacelikeH") {
        AHExpansionData d = generate_schwarzschild_aspect(g, -2e4);
        CHECK_THROWS_AS(finite_r_mean_curvature(d, 10.0), NonSpacelikeH);
    }
}

TEST_CASE("expansion fit") {
    GridPtr g = test_grid();

    SUBCASE("zero samples give zero coefficients") {
        std::vector<std::pair<double, ScalarField>> samples;
        for (double r : {50.0, 100.0, 200.0, 400.0})
            samples.emplace_back(r, ScalarField(g));
        ExpansionFit fit = extract_expansion(samples, {1, 2, 3});
        for (const ScalarField& c : fit.coeffs)
            CHECK(c.max_abs() < 1e-10);
        CHECK(fit.max_residual < 1e-12);
    }

    SUBCASE("recovers planted power-law coefficients") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        ScalarField c1(g), c2(g), c3(g);
        for (int j = 0; j < g->nlat(); ++j)
            for (int k = 0; k < g->nlon(); ++k) {
                c1(j, k) = u(rng);
                c2(j, k) = u(rng);
                c3(j, k) = u(rng);
            }
        std::vector<std::pair<double, ScalarField>> samples;
        for (double r : {50.0, 80.0, 130.0, 210.0, 340.0}) {
            ScalarField y(g);
            for (int j = 0; j < g->nlat(); ++j)
                for (int k = 0; k < g->nlon(); ++k)
                    y(j, k) = c1(j, k) / r + c2(j, k) / (r * r) + c3(j, k) / (r * r * r);
            samples.emplace_back(r, std::move(y));
        }
        ExpansionFit fit = extract_expansion(samples, {1, 2, 3});
        CHECK((fit.coeffs[0] - c1).max_abs() < 1e-9);
        CHECK((fit.coeffs[1] - c2).max_abs() < 1e-6);
        CHECK((fit.coeffs[2] - c3).max_abs() < 1e-4);
        CHECK(fit.max_residual < 1e-12);
    }

    SUBCASE("underdetermined systems are refused") {
        std::vector<std::pair<double, ScalarField>> samples;
        samples.emplace_back(50.0, ScalarField(g));
        samples.emplace_back(100.0, ScalarField(g));
        CHECK_THROWS_AS(extract_expansion(samples, {1, 2, 3}), IllConditionedFit);
    }

    SUBCASE("radii below 10 are refused") {
        std::vector<std::pair<double, ScalarField>> samples;
        for (double r : {5.0, 20.0, 30.0, 50.0})
            samples.emplace_back(r, ScalarField(g));
        CHECK_THROWS_AS(extract_expansion(samples, {1, 2}), std::invalid_argument);
    }

    SUBCASE("near-coincident radii are ill-conditioned") {
        std::vector<std::pair<double, ScalarField>> samples;
        for (double r : {100.0, 100.0 + 1e-9, 100.0 + 2e-9, 100.0 + 3e-9})
            samples.emplace_back(r, ScalarField(g));
        CHECK_THROWS_AS(extract_expansion(samples, {1, 2, 3}), IllConditionedFit);
    }
}
