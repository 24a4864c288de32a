#include "ahq/verify.hpp"

#include "ahq/conserved.hpp"
#include "ahq/optimal_embedding.hpp"
#include "ahq/surface_geometry.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace ahq {

namespace {

const double kPi = std::acos(-1.0);

struct Ctx {
    VerifyOptions opt;
    GridPtr grid;
    std::mt19937_64 rng;
    VerifyReport* rep;

    double tol(const std::string& group, double fallback) const {
        for (const auto& [k, v] : opt.tol_overrides)
            if (k == group)
                return v;
        return fallback;
    }

    void push(const std::string& group, const std::string& name, double observed, double tolerance,
              const std::string& note = "") {
        rep->results.push_back({group, name, observed <= tolerance, observed, tolerance, note});
    }
    void push_flag(const std::string& group, const std::string& name, bool ok, const std::string& note = "") {
        rep->results.push_back({group, name, ok, ok ? 0.0 : 1.0, 0.5, note});
    }

    AHExpansionData random_data(int lmax, double amp, bool zero_p) {
        RandomDataParams p;
        p.seed = rng();
        p.lmax = lmax;
        p.amplitude = amp;
        p.zero_momentum = zero_p;
        return generate_random_bandlimited(grid, p);
    }

    BoostVector random_boost(double max_speed_param = 1.5) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::array<double, 3> v{};
        for (double& x : v)
            x = max_speed_param * u(rng);
        return BoostVector::from_spatial(v);
    }
};

// ---------------------------------------------------------------------------

void check_spectral_core(Ctx& c) {
    const std::string G = "spectral-core";
    const SphereGrid& g = *c.grid;
    const double tol_ortho = c.tol(G, 1e-12);

    // full Gram matrix of the real basis under the grid quadrature
    {
        const int nm = g.n_modes();
        std::vector<double> B(static_cast<size_t>(nm) * g.size());
        for (int ell = 0; ell <= g.band_limit(); ++ell)
            for (int m = -ell; m <= ell; ++m) {
                const int row = SphereGrid::mode_index(ell, m);
                const int ma = std::abs(m);
                for (int j = 0; j < g.nlat(); ++j) {
                    const double sw = std::sqrt(g.node_weight(j));
                    const double p = g.plm(ell, ma, j) * (m == 0 ? 1.0 : std::sqrt(2.0)) * sw;
                    for (int k = 0; k < g.nlon(); ++k) {
                        double trig = 1.0;
                        if (m > 0)
                            trig = std::cos(m * g.phi(k));
                        else if (m < 0)
                            trig = std::sin(ma * g.phi(k));
                        B[static_cast<size_t>(row) * g.size() + j * g.nlon() + k] = p * trig;
                    }
                }
            }
        double worst = 0.0;
        for (int a = 0; a < nm; ++a)
            for (int b = a; b < nm; ++b) {
                double dot = 0.0;
                const double* ra = B.data() + static_cast<size_t>(a) * g.size();
                const double* rb = B.data() + static_cast<size_t>(b) * g.size();
                for (int i = 0; i < g.size(); ++i)
                    dot += ra[i] * rb[i];
                worst = std::max(worst, std::abs(dot - (a == b ? 1.0 : 0.0)));
            }
        c.push(G, "harmonic orthonormality (full Gram)", worst, tol_ortho);
    }

    // coordinate functions are -2 eigenfunctions
    {
        double worst = 0.0;
        for (int i = 1; i <= 3; ++i) {
            ScalarField xi = coordinate_function(c.grid, i);
            ScalarField r = laplacian(xi) + 2.0 * xi;
            worst = std::max(worst, r.max_abs());
        }
        c.push(G, "lap x^i = -2 x^i", worst, tol_ortho);
    }

    // curl of gradients, divergence of rotated gradients
    {
        std::mt19937_64 r2(c.rng());
        YlmSpectrum s(g.band_limit());
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int ell = 0; ell <= g.band_limit() - 1; ++ell)
            for (int m = -ell; m <= ell; ++m)
                s(ell, m) = u(r2);
        ScalarField f = synthesize(s, c.grid);
        const double w1 = curl(gradient(f)).max_abs();
        const double w2 = divergence(rotated_gradient(f)).max_abs();
        c.push(G, "curl(grad f) = 0", w1, c.tol(G, 1e-10));
        c.push(G, "div(rotated_grad f) = 0", w2, c.tol(G, 1e-10));
    }
}

void check_transforms(Ctx& c) {
    const std::string G = "transforms";
    const SphereGrid& g = *c.grid;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    YlmSpectrum s(g.band_limit());
    for (int ell = 0; ell <= g.band_limit(); ++ell)
        for (int m = -ell; m <= ell; ++m)
            s(ell, m) = u(c.rng);
    ScalarField f = synthesize(s, c.grid);
    YlmSpectrum s2 = analyze(f);
    double worst = 0.0;
    for (size_t i = 0; i < s.coeffs().size(); ++i)
        worst = std::max(worst, std::abs(s.coeffs()[i] - s2.coeffs()[i]));
    c.push(G, "analyze(synthesize) round trip", worst, c.tol(G, 1e-12));

    double sum_sq = 0.0;
    for (double x : s.coeffs())
        sum_sq += x * x;
    const double parseval = std::abs(integrate(pointwise_product(f, f)) - sum_sq);
    c.push(G, "Parseval", parseval, c.tol(G, 1e-10) * std::max(1.0, sum_sq));
}

void check_operators(Ctx& c) {
    const std::string G = "operators";
    const SphereGrid& g = *c.grid;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto random_bandlimited = [&](int lmax) {
        YlmSpectrum s(g.band_limit());
        for (int ell = 0; ell <= lmax; ++ell)
            for (int m = -ell; m <= ell; ++m)
                s(ell, m) = u(c.rng);
        return synthesize(s, c.grid);
    };

    ScalarField f = random_bandlimited(g.band_limit());
    ScalarField h = random_bandlimited(g.band_limit());
    const double selfadj = std::abs(integrate(pointwise_product(f, laplacian(h))) -
                                    integrate(pointwise_product(h, laplacian(f))));
    c.push(G, "laplacian self-adjoint", selfadj, c.tol(G, 1e-10) * std::max(1.0, f.max_abs() * h.max_abs()));

    // integration by parts: int |grad f|^2 = -int f lap f
    {
        OneFormField w = gradient(f);
        ScalarField gg = pointwise_product(w.comp_theta(), w.comp_theta()) +
                         pointwise_product(w.comp_phi(), w.comp_phi());
        const double lhs = integrate(gg);
        const double rhs = -integrate(pointwise_product(f, laplacian(f)));
        c.push(G, "int |grad f|^2 = -int f lap f", std::abs(lhs - rhs),
               c.tol(G, 1e-10) * std::max(1.0, std::abs(lhs)));
    }

    // Helmholtz recovery
    {
        ScalarField pf = random_bandlimited(g.band_limit() - 1);
        ScalarField pg = random_bandlimited(g.band_limit() - 1);
        OneFormField w = gradient(pf) + rotated_gradient(pg);
        ScalarField d_err = divergence(w) - laplacian(pf);
        ScalarField lap_pg = laplacian(pg);
        ScalarField c_err = curl(w) + lap_pg;
        c.push(G, "div recovers lap f", d_err.max_abs(), c.tol(G, 1e-10) * std::max(1.0, lap_pg.max_abs()));
        c.push(G, "curl recovers -lap g", c_err.max_abs(), c.tol(G, 1e-10) * std::max(1.0, lap_pg.max_abs()));
    }

    // shifted bilaplacian right-inverse on the ell >= 2 subspace
    {
        YlmSpectrum s(g.band_limit());
        for (int ell = 2; ell <= g.band_limit(); ++ell)
            for (int m = -ell; m <= ell; ++m)
                s(ell, m) = u(c.rng);
        ScalarField rhs = synthesize(s, c.grid);
        ScalarField sol = invert_shifted_bilaplacian(rhs);
        ScalarField resid = laplacian(laplacian(sol) + 2.0 * sol) - rhs;
        c.push(G, "lap(lap+2) right-inverse", resid.max_abs(), c.tol(G, 1e-10) * std::max(1.0, rhs.max_abs()));

        bool threw = false;
        YlmSpectrum bad(g.band_limit());
        bad(1, 0) = 1.0;
        try {
            invert_shifted_bilaplacian(synthesize(bad, c.grid));
        } catch (const KernelObstruction&) {
            threw = true;
        }
        c.push_flag(G, "kernel obstruction rejected", threw);
    }

    // pointwise tensor algebra decomposition
    {
        std::mt19937_64 r2(c.rng());
        std::uniform_real_distribution<double> uu(-1.0, 1.0);
        SymTensorField T(c.grid);
        for (int j = 0; j < g.nlat(); ++j)
            for (int k = 0; k < g.nlon(); ++k) {
                T.comp_tt()(j, k) = uu(r2);
                T.comp_tp()(j, k) = uu(r2);
                T.comp_pp()(j, k) = uu(r2);
            }
        ScalarField lhs = norm_sq(T);
        ScalarField tr = trace(T);
        ScalarField rhs = norm_sq(traceless_part(T)) + 0.5 * pointwise_product(tr, tr);
        c.push(G, "norm_sq orthogonal decomposition", (lhs - rhs).max_abs(), c.tol(G, 1e-12));
    }

    // tensor potential round trip
    {
        std::mt19937_64 r2(c.rng());
        std::uniform_real_distribution<double> uu(-1.0, 1.0);
        TensorPotentials p{YlmSpectrum(g.band_limit()), YlmSpectrum(g.band_limit()), YlmSpectrum(g.band_limit())};
        for (int ell = 0; ell <= g.band_limit() - 2; ++ell)
            for (int m = -ell; m <= ell; ++m) {
                p.trace_half(ell, m) = uu(r2);
                if (ell >= 2) {
                    p.e_pot(ell, m) = uu(r2);
                    p.b_pot(ell, m) = uu(r2);
                }
            }
        SymTensorField T = synthesize_tensor(p, c.grid);
        TensorPotentials q = decompose_tensor(T);
        double worst = 0.0;
        for (size_t i = 0; i < p.trace_half.coeffs().size(); ++i) {
            worst = std::max(worst, std::abs(p.trace_half.coeffs()[i] - q.trace_half.coeffs()[i]));
            worst = std::max(worst, std::abs(p.e_pot.coeffs()[i] - q.e_pot.coeffs()[i]));
            worst = std::max(worst, std::abs(p.b_pot.coeffs()[i] - q.b_pot.coeffs()[i]));
        }
        c.push(G, "tensor potential round trip", worst, c.tol(G, 1e-9));
    }
}

void check_energy_momentum(Ctx& c) {
    const std::string G = "energy-momentum";
    const double tol = c.tol(G, 1e-10);
    {
        AHExpansionData d = generate_schwarzschild_aspect(c.grid, 1.25);
        EnergyMomentum ep = energy_momentum(d);
        c.push(G, "schwarzschild aspect: E = m0", std::abs(ep.E - 1.25), tol);
        c.push(G, "schwarzschild aspect: P = 0", ep.momentum_norm(), tol);
    }
    {
        // mass aspect 2 m0 + beta x^3
        const double m0 = 0.75, beta = 0.4;
        AHExpansionData d = generate_schwarzschild_aspect(c.grid, m0);
        d.g_rr_m5 += beta * coordinate_function(c.grid, 3);
        EnergyMomentum ep = energy_momentum(d);
        c.push(G, "dipole aspect: E = m0", std::abs(ep.E - m0), tol);
        c.push(G, "dipole aspect: P3 = beta/6", std::abs(ep.P[2] - beta / 6.0), tol);
        c.push(G, "dipole aspect: P1 = P2 = 0", std::max(std::abs(ep.P[0]), std::abs(ep.P[1])), tol);
    }
    {
        AHExpansionData d = c.random_data(6, 1e-2, false);
        auto [o1, o2] = finiteness_obstruction(d);
        EnergyMomentum ep = energy_momentum(d);
        double worst = 0.0;
        for (int i = 0; i < 3; ++i)
            worst = std::max(worst, std::abs(o1[i] - 8.0 * kPi * ep.P[i]));
        c.push(G, "obstruction O1 = 8 pi P", worst, tol);
        c.push(G, "obstruction O2 = 0 (alpha_m1 is a gradient)",
               std::max({std::abs(o2[0]), std::abs(o2[1]), std::abs(o2[2])}), c.tol(G, 1e-10));
    }
}

void check_boost_identity(Ctx& c) {
    const std::string G = "boost-identity";
    const double tol = c.tol(G, 1e-10);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        AHExpansionData d = c.random_data(4, 5e-2, false);
        BoostVector a = c.random_boost();
        EnergyMomentum ep = energy_momentum(d);
        const double lhs = boost_energy(d, a);
        const double rhs = a.a0 * ep.E + a.a[0] * ep.P[0] + a.a[1] * ep.P[1] + a.a[2] * ep.P[2];
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    c.push(G, "boost energy = a0 E + a.P (100 draws)", worst, tol);

    // floor at the rest frame
    {
        AHExpansionData d = generate_schwarzschild_aspect(c.grid, 1.0);
        d.g_rr_m5 += 0.6 * coordinate_function(c.grid, 1);
        d.g_rr_m5 += -0.3 * coordinate_function(c.grid, 2);
        auto [M, astar] = rest_frame(d);
        double lowest = std::numeric_limits<double>::max();
        for (int trial = 0; trial < 1000; ++trial)
            lowest = std::min(lowest, boost_energy(d, c.random_boost(2.0)));
        c.push(G, "min over 1000 boosts >= M_rest - 1e-8", std::max(0.0, M - lowest), c.tol(G, 1e-8));
        c.push(G, "boost energy at a* = M_rest", std::abs(boost_energy(d, astar) - M), tol);
    }

    // constant-curvature identity of the boosted conformal factor
    {
        ScalarField res = gauss_curvature_check(c.grid, BoostVector::from_rapidity(0.5, 3));
        c.push(G, "boosted foliation curvature residual (beta=0.5)", res.max_abs(), c.tol(G, 1e-8));
        ScalarField res0 = gauss_curvature_check(c.grid, BoostVector::identity());
        c.push(G, "identity boost curvature residual", res0.max_abs(), c.tol(G, 1e-12));
    }

    // boosted |H| coefficients
    {
        AHExpansionData d = c.random_data(5, 1e-2, false);
        ScalarField m = mass_aspect(d);
        auto [lead, sub] = boosted_expansion(d, BoostVector::identity());
        c.push(G, "boosted expansion at identity = (2, -m)", (sub + m).max_abs(), c.tol(G, 1e-12));
        c.push(G, "boosted expansion leading = 2", (lead - ScalarField(c.grid, 2.0)).max_abs(), 1e-15);

        const double rap = 0.3;
        BoostVector a = BoostVector::from_rapidity(rap, 3);
        auto [lead2, sub2] = boosted_expansion(d, a);
        ScalarField x3 = coordinate_function(c.grid, 3);
        double w = 0.0;
        const SphereGrid& g = *c.grid;
        for (int j = 0; j < g.nlat(); ++j)
            for (int k = 0; k < g.nlon(); ++k) {
                const double invF = std::cosh(rap) + std::sinh(rap) * x3(j, k);
                w = std::max(w, std::abs(sub2(j, k) + m(j, k) * invF * invF * invF));
            }
        c.push(G, "boosted expansion pointwise form", w, c.tol(G, 1e-12));
    }
}

void check_loss_rate(Ctx& c) {
    const std::string G = "loss-rate";
    double worst_sign = -std::numeric_limits<double>::max();
    for (int trial = 0; trial < 100; ++trial) {
        AHExpansionData d = c.random_data(4, 5e-2, false);
        double rate = vacuum_loss_rate(d);
        if (c.opt.inject_fault == "loss-sign")
            rate = -rate;
        worst_sign = std::max(worst_sign, rate);
    }
    c.push(G, "vacuum loss rate <= 0 (100 draws)", worst_sign, 0.0);

    {
        AHExpansionData d = AHExpansionData::zero(c.grid);
        RandomDataParams p;
        p.seed = c.rng();
        p.lmax = 6;
        p.amplitude = 0.1;
        AHExpansionData src = generate_random_bandlimited(c.grid, p);
        d.g_ab_0 = src.g_ab_0;
        d.p_ab_0 = -1.0 * src.g_ab_0;
        c.push(G, "news cancellation p0 = -g0", std::abs(vacuum_loss_rate(d)), c.tol(G, 1e-14));
    }
    {
        AHExpansionData d = AHExpansionData::zero(c.grid);
        d.matter_F = ScalarField(c.grid, 1.0);
        c.push(G, "matter flux F=1 gives -1/2", std::abs(matter_loss_rate(d) + 0.5), c.tol(G, 1e-12));
        AHExpansionData d2 = c.random_data(4, 5e-2, false);
        d2.matter_F = ScalarField(c.grid, 1.0);
        const double add = matter_loss_rate(d2) - vacuum_loss_rate(d2);
        c.push(G, "matter rate = vacuum - (1/8pi) int F^2", std::abs(add + 0.5), c.tol(G, 1e-12));
    }
}

void check_embedding(Ctx& c) {
    const std::string G = "embedding-solvability";
    int misclassified = 0;
    double worst_resid = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        AHExpansionData d = c.random_data(5, 1e-2, true);
        SphereExpansion e = coordinate_sphere_expansion(d);
        OptimalSolution sol = solve_optimal_embedding(e.h_m2, BoostVector::identity());
        if (!sol.solvable)
            ++misclassified;
        const double scale = std::max(1e-30, assemble_optimal_rhs(e.h_m2, BoostVector::identity()).max_abs());
        worst_resid = std::max(worst_resid, sol.pde_residual / scale);
    }
    for (int trial = 0; trial < 25; ++trial) {
        AHExpansionData d = c.random_data(5, 1e-2, false);
        std::uniform_real_distribution<double> u(0.5, 1.5);
        d.g_rr_m5 += (1e-3 * u(c.rng)) * coordinate_function(c.grid, 1 + trial % 3);
        SphereExpansion e = coordinate_sphere_expansion(d);
        OptimalSolution sol = solve_optimal_embedding(e.h_m2, BoostVector::identity());
        if (sol.solvable)
            ++misclassified;
    }
    c.push_flag(G, "solvable iff P = 0 (50 datasets)", misclassified == 0,
                misclassified ? std::to_string(misclassified) + " misclassified" : "");
    c.push(G, "PDE residual when solvable (relative)", worst_resid, c.tol(G, 1e-10));

    // gauge stability against constants in h
    {
        AHExpansionData d = c.random_data(5, 1e-2, true);
        SphereExpansion e = coordinate_sphere_expansion(d);
        OptimalSolution s1 = solve_optimal_embedding(e.h_m2, BoostVector::identity());
        OptimalSolution s2 = solve_optimal_embedding(e.h_m2 + ScalarField(c.grid, 0.37), BoostVector::identity());
        YlmSpectrum a = analyze(s1.X0_0), b = analyze(s2.X0_0);
        double worst = 0.0;
        for (size_t i = 0; i < a.coeffs().size(); ++i)
            worst = std::max(worst, std::abs(a.coeffs()[i] - b.coeffs()[i]));
        c.push(G, "constant shift of h leaves X0 fixed", worst, c.tol(G, 1e-13));
        c.push_flag(G, "constant shift leaves solvability fixed", s1.solvable == s2.solvable);
    }
}

void check_nirenberg(Ctx& c) {
    const std::string G = "nirenberg-identity";
    double worst_identity = 0.0, worst_div = 0.0, worst_compat = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        // random band-limited X0 (ell >= 2 gauge) and traceless g0
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        YlmSpectrum xs(c.grid->band_limit());
        for (int ell = 2; ell <= 8; ++ell)
            for (int m = -ell; m <= ell; ++m)
                xs(ell, m) = 0.1 * u(c.rng);
        ScalarField X0 = synthesize(xs, c.grid);
        TensorPotentials tp{YlmSpectrum(c.grid->band_limit()), YlmSpectrum(c.grid->band_limit()),
                            YlmSpectrum(c.grid->band_limit())};
        for (int ell = 2; ell <= 8; ++ell)
            for (int m = -ell; m <= ell; ++m) {
                tp.e_pot(ell, m) = 0.1 * u(c.rng);
                tp.b_pot(ell, m) = 0.1 * u(c.rng);
            }
        SymTensorField g0 = synthesize_tensor(tp, c.grid);

        EmbeddingLinearization lin = solve_linearized_embedding(X0, g0);
        worst_compat = std::max(worst_compat, lin.compatibility_residual);

        // h_m2 with (lap+2) X0 = -h_m2 (constant gauge irrelevant)
        YlmSpectrum hs = xs;
        hs.scale_by_degree([](int ell) { return static_cast<double>(ell) * (ell + 1) - 2.0; });
        ScalarField h_m2 = synthesize(hs, c.grid);
        ScalarField integrand = lin.h0_m3 + 0.25 * pointwise_product(h_m2, h_m2);
        const double norm2 = 1.0 + X0.max_abs() * X0.max_abs() + g0.max_abs() * g0.max_abs();
        for (int i = 1; i <= 3; ++i) {
            const double v =
                std::abs(integrate(pointwise_product(coordinate_function(c.grid, i), integrand)));
            worst_identity = std::max(worst_identity, v / norm2);
        }

        // divergence identity: int x^i div P = -1/2 int x^i tr T
        ScalarField divP = divergence(lin.P_a);
        ScalarField trT = trace(lin.T_ab);
        for (int i = 1; i <= 3; ++i) {
            const double lhs = integrate(pointwise_product(coordinate_function(c.grid, i), divP));
            const double rhs = -0.5 * integrate(pointwise_product(coordinate_function(c.grid, i), trT));
            worst_div = std::max(worst_div, std::abs(lhs - rhs) / norm2);
        }
    }
    c.push(G, "int x^i (h0_m3 + h_m2^2/4) = 0", worst_identity, c.tol(G, 1e-8));
    c.push(G, "divergence identity for P", worst_div, c.tol(G, 1e-8));
    c.push(G, "compatibility residual", worst_compat, c.tol(G, 1e-8));
}

void check_com_cross(Ctx& c) {
    const std::string G = "com-cross-check";
    double worst_pair = 0.0, worst_thm = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
        AHExpansionData d = c.random_data(6, 1e-2, true);
        ComCrossCheck cc = com_via_embedding(d);
        worst_pair = std::max(worst_pair, cc.max_disagreement());
        std::array<double, 3> thm = center_of_mass(d);
        for (int i = 0; i < 3; ++i)
            worst_thm = std::max(worst_thm, std::abs(cc.direct[i] - thm[i]));
    }
    c.push(G, "direct vs shortcut route", worst_pair, c.tol(G, 1e-8));
    c.push(G, "embedding route vs coefficient formula", worst_thm, c.tol(G, 1e-8));

    // adjudicate the trace term of h_m3 against the finite-radius oracle
    {
        AHExpansionData d = c.random_data(6, 5e-4, false);
        // guarantee distinguishable ell=1 trace content in g_ab_m1 vs g_ab_m2
        ScalarField bump = 2e-3 * coordinate_function(c.grid, 3);
        SymTensorField tweak(c.grid);
        const SphereGrid& g = *c.grid;
        for (int j = 0; j < g.nlat(); ++j)
            for (int k = 0; k < g.nlon(); ++k) {
                tweak.comp_tt()(j, k) = bump(j, k);
                tweak.comp_pp()(j, k) = bump(j, k);
            }
        d.g_ab_m2 += tweak;
        tweak *= -1.0;
        d.g_ab_m1 += tweak;

        const std::vector<double> radii{100.0, 200.0, 400.0, 800.0};
        std::vector<ScalarField> curvatures = finite_r_mean_curvature(d, radii);
        std::vector<std::pair<double, ScalarField>> samples;
        for (size_t i = 0; i < radii.size(); ++i) {
            const double base = hyperboloid_mean_curvature(radii[i]);
            for (double& v : curvatures[i].values())
                v -= base;
            samples.emplace_back(radii[i], std::move(curvatures[i]));
        }
        ExpansionFit fit = extract_expansion(samples, {2, 3});
        SphereExpansion e = coordinate_sphere_expansion(d);
        ScalarField variant_m2 = e.h_m3; // uses 2 tr g_ab_m2
        ScalarField variant_m1 = e.h_m3 + 2.0 * trace(d.g_ab_m2) - 2.0 * trace(d.g_ab_m1);
        double dist_m2 = 0.0, dist_m1 = 0.0;
        for (int i = 1; i <= 3; ++i) {
            ScalarField xi = coordinate_function(c.grid, i);
            dist_m2 = std::max(dist_m2,
                               std::abs(integrate(pointwise_product(xi, fit.coeffs[1] - variant_m2))) / (8.0 * kPi));
            dist_m1 = std::max(dist_m1,
                               std::abs(integrate(pointwise_product(xi, fit.coeffs[1] - variant_m1))) / (8.0 * kPi));
        }
        c.rep->trace_variant_selected = (dist_m2 < dist_m1) ? "g_ab_m2" : "g_ab_m1";
        c.rep->trace_variant_used = "g_ab_m2";
        std::ostringstream note;
        note << "moment distance " << dist_m2 << " (g_ab_m2) vs " << dist_m1 << " (g_ab_m1)";
        c.push_flag(G, "oracle selects the trace variant used by center_of_mass",
                    c.rep->trace_variant_selected == c.rep->trace_variant_used, note.str());
        c.push(G, "selected variant moment distance", dist_m2, c.tol(G, 1e-4));
    }
}

void check_expansion_fidelity(Ctx& c) {
    const std::string G = "expansion-fidelity";
    {
        AHExpansionData d = generate_minkowski_hyperboloid(c.grid);
        ScalarField H = finite_r_mean_curvature(d, 100.0);
        const double expect = hyperboloid_mean_curvature(100.0);
        double worst = 0.0;
        for (double v : H.values())
            worst = std::max(worst, std::abs(v - expect));
        c.push(G, "zero data matches closed form at r=100", worst, c.tol(G, 1e-12));
    }
    {
        AHExpansionData d = generate_schwarzschild_aspect(c.grid, 1.0);
        // Richardson extrapolation of r^2 (|H| - 2/r) over r = 100, 200, 400
        std::array<double, 3> f{};
        std::array<double, 3> rs{100.0, 200.0, 400.0};
        for (int i = 0; i < 3; ++i) {
            ScalarField H = finite_r_mean_curvature(d, rs[i]);
            f[i] = rs[i] * rs[i] * (H(0, 0) - 2.0 / rs[i]);
        }
        // two-level elimination of the 1/r and 1/r^2 tails
        const double e1 = 2.0 * f[1] - f[0];
        const double e2 = 2.0 * f[2] - f[1];
        const double lim = (4.0 * e2 - e1) / 3.0;
        c.push(G, "schwarzschild r^2(|H|-2/r) -> -2", std::abs(lim + 2.0), c.tol(G, 1e-6));
    }
    {
        AHExpansionData d = c.random_data(6, 5e-4, false);
        const std::vector<double> radii{100.0, 200.0, 400.0, 800.0};
        std::vector<ScalarField> curvatures = finite_r_mean_curvature(d, radii);
        std::vector<std::pair<double, ScalarField>> samples;
        double max_r4_resid = 0.0;
        for (size_t i = 0; i < radii.size(); ++i) {
            const double base = hyperboloid_mean_curvature(radii[i]);
            for (double& v : curvatures[i].values())
                v -= base;
            samples.emplace_back(radii[i], std::move(curvatures[i]));
        }
        ExpansionFit fit = extract_expansion(samples, {2, 3});
        SphereExpansion e = coordinate_sphere_expansion(d);
        c.push(G, "fitted h_m2 vs coefficient formula", (fit.coeffs[0] - e.h_m2).max_abs(), c.tol(G, 1e-6));
        max_r4_resid = fit.max_residual * std::pow(radii.front(), 4);
        c.push(G, "r^4-weighted fit residual bounded", max_r4_resid, c.tol(G, 1e2));
        // the sup bound of the remainder against the stored h_m3
        double worst = 0.0;
        for (const auto& [r, H] : samples) {
            for (int j = 0; j < c.grid->nlat(); ++j)
                for (int k = 0; k < c.grid->nlon(); ++k) {
                    const double rem = r * r * r * (H(j, k) - e.h_m2(j, k) / (r * r)) - e.h_m3(j, k);
                    worst = std::max(worst, std::abs(rem));
                }
        }
        c.push(G, "r^3-weighted remainder bounded", worst, c.tol(G, 1.0));
    }
}

void check_angular_momentum(Ctx& c) {
    const std::string G = "angular-momentum";
    {
        AHExpansionData d = AHExpansionData::zero(c.grid);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        YlmSpectrum s(c.grid->band_limit());
        for (int ell = 1; ell <= 6; ++ell)
            for (int m = -ell; m <= ell; ++m)
                s(ell, m) = u(c.rng);
        d.g_ra_m3 = gradient(s, c.grid);
        d.p_ra_m3 = gradient(0.5 * s, c.grid);
        std::array<double, 3> J = angular_momentum(d);
        c.push(G, "gradient one-forms carry no J",
               std::max({std::abs(J[0]), std::abs(J[1]), std::abs(J[2])}), c.tol(G, 1e-10));
    }
    {
        const double cc = 0.8;
        AHExpansionData d = AHExpansionData::zero(c.grid);
        d.p_ra_m3 = cc * rotated_gradient(coordinate_function(c.grid, 3));
        std::array<double, 3> J = angular_momentum(d);
        c.push(G, "rotational potential sign: J3 = +c/3", std::abs(J[2] - cc / 3.0), c.tol(G, 1e-10));
        c.push(G, "rotational potential: J1 = J2 = 0", std::max(std::abs(J[0]), std::abs(J[1])),
               c.tol(G, 1e-10));
    }
    {
        AHExpansionData d = c.random_data(5, 1e-2, true);
        std::array<double, 3> J0 = angular_momentum(d);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        YlmSpectrum s(c.grid->band_limit());
        for (int ell = 1; ell <= 6; ++ell)
            for (int m = -ell; m <= ell; ++m)
                s(ell, m) = u(c.rng);
        d.g_ra_m3 += gradient(s, c.grid);
        std::array<double, 3> J1 = angular_momentum(d);
        double worst = 0.0;
        for (int i = 0; i < 3; ++i)
            worst = std::max(worst, std::abs(J0[i] - J1[i]));
        c.push(G, "J insensitive to gradient additions", worst, c.tol(G, 1e-10));
    }
}

void check_scaling(Ctx& c) {
    const std::string G = "scaling";
    AHExpansionData d = c.random_data(5, 1e-2, true);
    d.matter_F = 0.3 * coordinate_function(c.grid, 1) + ScalarField(c.grid, 0.5);
    const double lam = 2.5;
    AHExpansionData d2 = d.scaled(lam);
    EnergyMomentum e1 = energy_momentum(d), e2 = energy_momentum(d2);
    double worst = std::abs(e2.E - lam * e1.E);
    for (int i = 0; i < 3; ++i)
        worst = std::max(worst, std::abs(e2.P[i] - lam * e1.P[i]));
    std::array<double, 3> C1 = center_of_mass(d), C2 = center_of_mass(d2);
    std::array<double, 3> J1 = angular_momentum(d), J2 = angular_momentum(d2);
    for (int i = 0; i < 3; ++i) {
        worst = std::max(worst, std::abs(C2[i] - lam * C1[i]));
        worst = std::max(worst, std::abs(J2[i] - lam * J1[i]));
    }
    c.push(G, "E, P, C, J scale linearly", worst, c.tol(G, 1e-12));
    const double q1 = std::abs(vacuum_loss_rate(d2) - lam * lam * vacuum_loss_rate(d));
    const double q2 = std::abs(matter_loss_rate(d2) - lam * lam * matter_loss_rate(d));
    c.push(G, "loss rates scale quadratically", std::max(q1, q2), c.tol(G, 1e-12));
}

void check_data_io(Ctx& c) {
    const std::string G = "data-io";
    {
        AHExpansionData d = c.random_data(6, 1e-2, false);
        d.matter_F = 0.1 * coordinate_function(c.grid, 2);
        const std::string path = "/tmp/ahq_verify_roundtrip.dat";
        write_data(d, path);
        AHExpansionData r = read_data(path);
        double worst = (r.g_rr_m5 - d.g_rr_m5).max_abs();
        worst = std::max(worst, (r.g_ab_m2.comp_tp() - d.g_ab_m2.comp_tp()).max_abs());
        worst = std::max(worst, (r.p_ra_m3.comp_phi() - d.p_ra_m3.comp_phi()).max_abs());
        worst = std::max(worst, (*r.matter_F - *d.matter_F).max_abs());
        c.push(G, "file round trip", worst, c.tol(G, 1e-15));
        std::remove(path.c_str());
    }
    {
        RandomDataParams p;
        p.seed = 775577;
        p.lmax = 6;
        p.amplitude = 1e-2;
        AHExpansionData a = generate_random_bandlimited(c.grid, p);
        AHExpansionData b = generate_random_bandlimited(c.grid, p);
        double worst = (a.g_rr_m5 - b.g_rr_m5).max_abs();
        worst = std::max(worst, (a.p_ab_m2.comp_tt() - b.p_ab_m2.comp_tt()).max_abs());
        c.push(G, "generator determinism", worst, 0.0);
    }
    {
        AHExpansionData d = AHExpansionData::zero(c.grid);
        c.push_flag(G, "zero data validates", validate(d).ok());
        for (int j = 0; j < c.grid->nlat(); ++j)
            for (int k = 0; k < c.grid->nlon(); ++k) {
                d.p_ab_0.comp_tt()(j, k) = 1.0;
                d.p_ab_0.comp_pp()(j, k) = 1.0;
            }
        ValidationReport rep = validate(d);
        c.push_flag(G, "trace violation flagged with magnitude 2",
                    !rep.ok() && std::abs(rep.issues[0].magnitude - 2.0) < 1e-12);
    }
}

} // namespace

std::vector<std::string> verify_group_names() {
    return {"spectral-core",   "transforms",        "operators",         "energy-momentum",
            "boost-identity",  "loss-rate",         "embedding-solvability", "nirenberg-identity",
            "com-cross-check", "expansion-fidelity", "angular-momentum",  "scaling",
            "data-io"};
}

VerifyReport run_verify(const VerifyOptions& opt) {
    VerifyReport rep;
    Ctx ctx{opt, make_grid(opt.band_limit), std::mt19937_64(opt.seed), &rep};

    struct Entry {
        const char* group;
        std::function<void(Ctx&)> fn;
    };
    const std::vector<Entry> entries = {
        {"spectral-core", check_spectral_core},
        {"transforms", check_transforms},
        {"operators", check_operators},
        {"energy-momentum", check_energy_momentum},
        {"boost-identity", check_boost_identity},
        {"loss-rate", check_loss_rate},
        {"embedding-solvability", check_embedding},
        {"nirenberg-identity", check_nirenberg},
        {"com-cross-check", check_com_cross},
        {"expansion-fidelity", check_expansion_fidelity},
        {"angular-momentum", check_angular_momentum},
        {"scaling", check_scaling},
        {"data-io", check_data_io},
    };
    bool matched = false;
    for (const Entry& e : entries) {
        if (!opt.only_group.empty() && opt.only_group != e.group)
            continue;
        matched = true;
        e.fn(ctx);
    }
    if (!matched)
        throw std::invalid_argument("verify: unknown check group '" + opt.only_group + "'");
    return rep;
}

bool VerifyReport::all_passed() const {
    for (const CheckResult& r : results)
        if (!r.passed)
            return false;
    return true;
}

std::string format_report(const VerifyReport& rep) {
    std::ostringstream os;
    for (const CheckResult& r : rep.results) {
        os << (r.passed ? "PASS" : "FAIL") << "  [" << r.group << "] " << r.name << "  observed=" << r.observed
           << " tolerance=" << r.tolerance;
        if (!r.note.empty())
            os << "  (" << r.note << ")";
        os << "\n";
    }
    if (!rep.trace_variant_selected.empty())
        os << "h_m3 trace-term adjudication: oracle selects " << rep.trace_variant_selected << ", implementation uses "
           << rep.trace_variant_used << "\n";
    os << (rep.all_passed() ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT") << "\n";
    return os.str();
}

} // namespace ahq
