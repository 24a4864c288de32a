#include "ahq/surface_geometry.hpp"

#include "ahq/jets.hpp"

#include <cmath>

namespace ahq {

namespace {

ScalarField mass_aspect_field(const AHExpansionData& d) {
    return 1.5 * trace(d.g_ab_m1) + trace(d.p_ab_m1) + d.g_rr_m5;
}

void require_valid(const AHExpansionData& d) {
    ValidationReport rep = validate(d);
    if (!rep.ok())
        throw std::invalid_argument("expansion data failed validation:\n" + rep.to_string());
}

// 1/F = a0 + sum_i a^i x^i pointwise
ScalarField inverse_conformal_factor(const GridPtr& grid, const BoostVector& a) {
    ScalarField f(grid, a.a0);
    for (int i = 0; i < 3; ++i)
        if (a.a[i] != 0.0)
            f += a.a[i] * coordinate_function(grid, i + 1);
    return f;
}

} // namespace

SphereExpansion coordinate_sphere_expansion(const AHExpansionData& d) {
    require_valid(d);
    ScalarField m = mass_aspect_field(d);

    ScalarField h_m2 = -1.0 * m;
    OneFormField alpha_m1 = 0.5 * gradient(m);

    ScalarField h_m3 = -1.0 * (d.g_rr_m6 + 2.0 * trace(d.g_ab_m2) + divergence(d.g_ra_m3) + trace(d.p_ab_m2));
    h_m3 -= 0.25 * pointwise_product(m, m);

    ScalarField alpha_m2_curl = -1.0 * curl(d.g_ra_m3 + d.p_ra_m3);

    return SphereExpansion{std::move(h_m2),      std::move(h_m3), std::move(alpha_m1),
                           std::move(alpha_m2_curl), d.g_ab_0,        d.g_ab_m1};
}

std::pair<ScalarField, ScalarField> boosted_expansion(const AHExpansionData& d, const BoostVector& a) {
    require_valid(d);
    if (!a.valid())
        throw std::invalid_argument("boosted_expansion: boost vector is not unit timelike");
    const GridPtr& grid = d.grid();
    ScalarField m = mass_aspect_field(d);
    ScalarField invF = inverse_conformal_factor(grid, a);
    ScalarField leading(grid, 2.0);
    ScalarField sub(grid);
    const SphereGrid& g = *grid;
    for (int j = 0; j < g.nlat(); ++j)
        for (int k = 0; k < g.nlon(); ++k) {
            const double f = invF(j, k);
            sub(j, k) = -m(j, k) * f * f * f;
        }
    return {std::move(leading), std::move(sub)};
}

ScalarField gauss_curvature_check(const GridPtr& grid, const BoostVector& a) {
    if (!a.valid())
        throw std::invalid_argument("gauss_curvature_check: boost vector is not unit timelike");
    const SphereGrid& g = *grid;
    ScalarField invF = inverse_conformal_factor(grid, a);
    ScalarField lnF(grid);
    for (int j = 0; j < g.nlat(); ++j)
        for (int k = 0; k < g.nlon(); ++k)
            lnF(j, k) = -std::log(invF(j, k));
    ScalarField lap_lnF = laplacian(lnF);
    ScalarField out(grid);
    for (int j = 0; j < g.nlat(); ++j)
        for (int k = 0; k < g.nlon(); ++k) {
            const double invF2 = invF(j, k) * invF(j, k);
            out(j, k) = invF2 * (1.0 - lap_lnF(j, k)) - 1.0;
        }
    return out;
}

// ---------------------------------------------------------------------------
// linearized isometric embedding
// ---------------------------------------------------------------------------

EmbeddingLinearization solve_linearized_embedding(const ScalarField& X0_0, const SymTensorField& g0) {
    const GridPtr& grid = X0_0.grid();
    const SphereGrid& g = *grid;
    const double scale = std::max({1.0, X0_0.max_abs(), g0.max_abs()});
    if (trace(g0).max_abs() > 1e-8 * scale)
        throw std::invalid_argument("solve_linearized_embedding: g0 must be traceless");

    // T_ab = grad_a X0 grad_b X0 + g0_ab
    YlmSpectrum x0_spec = analyze(X0_0);
    OneFormField dx0 = gradient(x0_spec, grid);
    SymTensorField T = g0;
    for (int j = 0; j < g.nlat(); ++j)
        for (int k = 0; k < g.nlon(); ++k) {
            const double wt = dx0.comp_theta()(j, k), wp = dx0.comp_phi()(j, k);
            T.comp_tt()(j, k) += wt * wt;
            T.comp_tp()(j, k) += wt * wp;
            T.comp_pp()(j, k) += wp * wp;
        }

    const TensorPotentials tp = decompose_tensor(T);
    const int L = g.band_limit();

    // Q = (grad tr T - div T)/2, in Helmholtz potentials
    YlmSpectrum alphaQ(L), betaQ(L);
    for (int ell = 1; ell <= L; ++ell) {
        const double lam = static_cast<double>(ell) * (ell + 1);
        const double c = 1.0 - lam / 2.0;
        for (int m = -ell; m <= ell; ++m) {
            alphaQ(ell, m) = 0.5 * (tp.trace_half(ell, m) - c * tp.e_pot(ell, m));
            betaQ(ell, m) = -0.5 * c * tp.b_pot(ell, m);
        }
    }

    // curl(P) = 2F with P = Q + rotated_gradient(F):  (lap + 2) F = curl(Q)
    YlmSpectrum S(L);
    for (int ell = 1; ell <= L; ++ell) {
        const double lam = static_cast<double>(ell) * (ell + 1);
        for (int m = -ell; m <= ell; ++m)
            S(ell, m) = lam * betaQ(ell, m);
    }
    double s_ell1 = 0.0;
    for (int m = -1; m <= 1; ++m)
        s_ell1 = std::max(s_ell1, std::abs(S(1, m)));
    if (s_ell1 > 1e-8 * std::max(1.0, S.l2_norm()))
        throw SolverFailure("linearized embedding: curl source has kernel (ell=1) content");
    YlmSpectrum F_spec(L);
    for (int ell = 2; ell <= L; ++ell) {
        const double lam = static_cast<double>(ell) * (ell + 1);
        for (int m = -ell; m <= ell; ++m)
            F_spec(ell, m) = S(ell, m) / (2.0 - lam);
    }
    F_spec(0, 0) = 0.5 * S(0, 0); // S(0,0) vanishes for curls; kept for form

    OneFormPotentials p_pot{alphaQ, betaQ};
    p_pot.beta += F_spec;
    OneFormField P = synthesize_oneform(p_pot, grid);
    ScalarField F_field = synthesize(F_spec, grid);

    // h0_m3 = -div P + tr T / 2 - (lap X0)^2 / 4
    YlmSpectrum divP(L);
    for (int ell = 1; ell <= L; ++ell) {
        const double lam = static_cast<double>(ell) * (ell + 1);
        for (int m = -ell; m <= ell; ++m)
            divP(ell, m) = -lam * alphaQ(ell, m);
    }
    ScalarField divP_field = synthesize(divP, grid);
    YlmSpectrum lapx0 = x0_spec;
    lapx0.scale_by_degree([](int ell) { return -static_cast<double>(ell) * (ell + 1); });
    ScalarField lapX0 = synthesize(lapx0, grid);
    ScalarField trT = trace(T);
    ScalarField h0(grid);
    for (int j = 0; j < g.nlat(); ++j)
        for (int k = 0; k < g.nlon(); ++k)
            h0(j, k) = -divP_field(j, k) + 0.5 * trT(j, k) - 0.25 * lapX0(j, k) * lapX0(j, k);

    // residual of the first compatibility equation through grid quadrature
    ScalarField curlP = curl(P);
    double res1 = 0.0;
    for (int j = 0; j < g.nlat(); ++j)
        for (int k = 0; k < g.nlon(); ++k)
            res1 = std::max(res1, std::abs(curlP(j, k) - 2.0 * F_field(j, k)));

    // residual of the second equation, with grad T evaluated analytically in
    // coordinates (independent of the potential-space algebra above)
    TensorJet tj = tensor_jet(tp, grid);
    OneFormField rotF = rotated_gradient(F_spec, grid);
    double res2 = 0.0;
    for (int j = 0; j < g.nlat(); ++j) {
        const double s = g.sin_theta(j), c = g.cos_theta(j);
        const double cot = c / s;
        for (int k = 0; k < g.nlon(); ++k) {
            // covariant derivatives of T in coordinates; round-sphere
            // Christoffels: G^t_pp = -s c, G^p_tp = cot
            const double Ttt = tj.tt(j, k), Ttp = tj.tp(j, k), Tpp = tj.pp(j, k);
            const double covp_T_tt = tj.tt_dph(j, k) - 2.0 * cot * Ttp;
            const double covt_T_pt = tj.tp_dth(j, k) - cot * Ttp;
            const double covp_T_tp = tj.tp_dph(j, k) - cot * Tpp + s * c * Ttt;
            const double covt_T_pp = tj.pp_dth(j, k) - 2.0 * cot * Tpp;
            // W_c = (1/2) eps^{ad} grad_d T_ac = (1/(2s)) (cov_phi T_tc - cov_theta T_pc)
            const double W_t = (covp_T_tt - covt_T_pt) / (2.0 * s);
            const double W_p = (covp_T_tp - covt_T_pp) / (2.0 * s);
            // R^e = eps^{ce} W_c is W rotated, so in frame components
            // R = (-W_phihat, W_thetahat); the second equation reads
            // P = R + rotated_gradient(F)
            const double W_th = W_t;
            const double W_ph = W_p / s;
            const double R_th = -W_ph;
            const double R_ph = W_th;
            const double r1 = P.comp_theta()(j, k) - rotF.comp_theta()(j, k) - R_th;
            const double r2 = P.comp_phi()(j, k) - rotF.comp_phi()(j, k) - R_ph;
            res2 = std::max({res2, std::abs(r1), std::abs(r2)});
        }
    }

    return EmbeddingLinearization{X0_0, std::move(T), std::move(F_field), std::move(P), std::move(h0),
                                  std::max(res1, res2)};
}

// ---------------------------------------------------------------------------
// finite-radius oracle
// ---------------------------------------------------------------------------

double hyperboloid_mean_curvature(double r) { return 2.0 / std::sqrt(r * r - 1.0); }

namespace {

// radius-independent part of the truncated-series reconstruction
struct TruncatedGeometry {
    ScalarField g5, g6;
    OneFormJet A;
    TensorJet G0, G1, G2;
    SymTensorField P0, P1, P2;

    explicit TruncatedGeometry(const AHExpansionData& d)
        : g5(d.g_rr_m5), g6(d.g_rr_m6),
          A(oneform_jet(decompose_oneform(d.g_ra_m3), d.grid())),
          G0(tensor_jet(decompose_tensor(d.g_ab_0), d.grid())),
          G1(tensor_jet(decompose_tensor(d.g_ab_m1), d.grid())),
          G2(tensor_jet(decompose_tensor(d.g_ab_m2), d.grid())),
          P0(d.p_ab_0), P1(d.p_ab_m1), P2(d.p_ab_m2) {}

    ScalarField mean_curvature(double r) const {
        const GridPtr& grid = g5.grid();
        const SphereGrid& g = *grid;
        const double r2 = r * r, r3 = r2 * r, r4 = r2 * r2, r5 = r4 * r, r6 = r4 * r2;
        ScalarField H(grid);

        for (int j = 0; j < g.nlat(); ++j) {
            const double s = g.sin_theta(j), c = g.cos_theta(j);
            const double s2 = s * s;
            for (int k = 0; k < g.nlon(); ++k) {
                // induced metric in coordinates
                const double stt = r2 * 1.0 + G0.tt(j, k) + G1.tt(j, k) / r + G2.tt(j, k) / r2;
                const double stp = G0.tp(j, k) + G1.tp(j, k) / r + G2.tp(j, k) / r2;
                const double spp = r2 * s2 + G0.pp(j, k) + G1.pp(j, k) / r + G2.pp(j, k) / r2;
                const double det = stt * spp - stp * stp;
                if (det <= 0.0)
                    throw NonSpacelikeH("finite_r_mean_curvature: induced metric degenerate at r = " +
                                        std::to_string(r));
                const double itt = spp / det, itp = -stp / det, ipp = stt / det;

                // coordinate partials of the induced metric
                const double stt_dt = G0.tt_dth(j, k) + G1.tt_dth(j, k) / r + G2.tt_dth(j, k) / r2;
                const double stt_dp = G0.tt_dph(j, k) + G1.tt_dph(j, k) / r + G2.tt_dph(j, k) / r2;
                const double stp_dt = G0.tp_dth(j, k) + G1.tp_dth(j, k) / r + G2.tp_dth(j, k) / r2;
                const double stp_dp = G0.tp_dph(j, k) + G1.tp_dph(j, k) / r + G2.tp_dph(j, k) / r2;
                const double spp_dt =
                    2.0 * r2 * s * c + G0.pp_dth(j, k) + G1.pp_dth(j, k) / r + G2.pp_dth(j, k) / r2;
                const double spp_dp = G0.pp_dph(j, k) + G1.pp_dph(j, k) / r + G2.pp_dph(j, k) / r2;

                // radial derivative of the induced metric
                const double stt_dr = 2.0 * r - G1.tt(j, k) / r2 - 2.0 * G2.tt(j, k) / r3;
                const double stp_dr = -G1.tp(j, k) / r2 - 2.0 * G2.tp(j, k) / r3;
                const double spp_dr = 2.0 * r * s2 - G1.pp(j, k) / r2 - 2.0 * G2.pp(j, k) / r3;

                // g_ra and its angular partials
                const double At = A.th(j, k) / r3, Ap = A.ph(j, k) / r3;
                const double At_dt = A.th_dth(j, k) / r3, At_dp = A.th_dph(j, k) / r3;
                const double Ap_dt = A.ph_dth(j, k) / r3, Ap_dp = A.ph_dph(j, k) / r3;

                // Gamma_{ab,r} = (d_a g_br + d_b g_ar - d_r g_ab) / 2
                const double Mr_tt = At_dt - 0.5 * stt_dr;
                const double Mr_tp = 0.5 * (At_dp + Ap_dt) - 0.5 * stp_dr;
                const double Mr_pp = Ap_dp - 0.5 * spp_dr;

                // angular Christoffels of the induced metric, Gamma_{ab,c}
                const double G_tt_t = 0.5 * stt_dt;
                const double G_tt_p = stp_dt - 0.5 * stt_dp;
                const double G_tp_t = 0.5 * stt_dp;
                const double G_tp_p = 0.5 * spp_dt;
                const double G_pp_t = stp_dp - 0.5 * spp_dt;
                const double G_pp_p = 0.5 * spp_dp;

                // shift V^a, V_a = -g_ra
                const double Vt_lo = -At, Vp_lo = -Ap;
                const double Vt = itt * Vt_lo + itp * Vp_lo;
                const double Vp = itp * Vt_lo + ipp * Vp_lo;

                const double M_tt = Mr_tt + Vt * G_tt_t + Vp * G_tt_p;
                const double M_tp = Mr_tp + Vt * G_tp_t + Vp * G_tp_p;
                const double M_pp = Mr_pp + Vt * G_pp_t + Vp * G_pp_p;

                const double g_rr = 1.0 / r2 - 1.0 / r4 + g5(j, k) / r5 + g6(j, k) / r6;
                const double V2 = Vt * Vt_lo + Vp * Vp_lo;
                const double nn = g_rr - V2;
                if (nn <= 0.0)
                    throw NonSpacelikeH("finite_r_mean_curvature: normal not spacelike in the slice at r = " +
                                        std::to_string(r));
                const double N = 1.0 / std::sqrt(nn);

                const double k3 = -N * (itt * M_tt + 2.0 * itp * M_tp + ipp * M_pp);

                // tangential second fundamental form of the slice: sigma + p
                const double ptt = P0.comp_tt()(j, k) + P1.comp_tt()(j, k) / r + P2.comp_tt()(j, k) / r2;
                const double ptp_f = P0.comp_tp()(j, k) + P1.comp_tp()(j, k) / r + P2.comp_tp()(j, k) / r2;
                const double ppp = P0.comp_pp()(j, k) + P1.comp_pp()(j, k) / r + P2.comp_pp()(j, k) / r2;
                // frame -> coordinates: (tt, s*tp, s^2*pp)
                const double k4 = 2.0 + itt * ptt + 2.0 * itp * (s * ptp_f) + ipp * (s2 * ppp);

                const double h2 = k3 * k3 - k4 * k4;
                if (h2 <= 0.0)
                    throw NonSpacelikeH("finite_r_mean_curvature: mean curvature vector not spacelike at r = " +
                                        std::to_string(r));
                H(j, k) = std::sqrt(h2);
            }
        }
        return H;
    }
};

} // namespace

ScalarField finite_r_mean_curvature(const AHExpansionData& d, double r) {
    if (r < 10.0)
        throw std::invalid_argument("finite_r_mean_curvature: r must be >= 10");
    require_valid(d);
    return TruncatedGeometry(d).mean_curvature(r);
}

std::vector<ScalarField> finite_r_mean_curvature(const AHExpansionData& d, const std::vector<double>& radii) {
    for (double r : radii)
        if (r < 10.0)
            throw std::invalid_argument("finite_r_mean_curvature: r must be >= 10");
    require_valid(d);
    TruncatedGeometry geo(d);
    std::vector<ScalarField> out;
    out.reserve(radii.size());
    for (double r : radii)
        out.push_back(geo.mean_curvature(r));
    return out;
}

// ---------------------------------------------------------------------------
// inverse-power fit
// ---------------------------------------------------------------------------

namespace {

// eigenvalues of a small symmetric matrix by cyclic Jacobi
std::vector<double> sym_eigenvalues(std::vector<std::vector<double>> a) {
    const int n = static_cast<int>(a.size());
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q)
                off += a[p][q] * a[p][q];
        if (off < 1e-300)
            break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300)
                    continue;
                const double theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cth = 1.0 / std::sqrt(t * t + 1.0), sth = t * cth;
                for (int i = 0; i < n; ++i) {
                    const double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = cth * aip - sth * aiq;
                    a[i][q] = sth * aip + cth * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = a[p][i], aqi = a[q][i];
                    a[p][i] = cth * api - sth * aqi;
                    a[q][i] = sth * api + cth * aqi;
                }
            }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i)
        ev[i] = a[i][i];
    return ev;
}

} // namespace

ExpansionFit extract_expansion(const std::vector<std::pair<double, ScalarField>>& samples,
                               const std::vector<int>& orders) {
    const int ns = static_cast<int>(samples.size());
    const int nq = static_cast<int>(orders.size());
    if (nq < 1)
        throw std::invalid_argument("extract_expansion: no orders requested");
    if (ns < nq + 1)
        throw IllConditionedFit("extract_expansion: need at least " + std::to_string(nq + 1) +
                                " radii for " + std::to_string(nq) + " orders");
    for (int i = 0; i < ns; ++i) {
        if (samples[i].first < 10.0)
            throw std::invalid_argument("extract_expansion: radii must be >= 10");
        for (int j = i + 1; j < ns; ++j)
            if (samples[i].first == samples[j].first)
                throw std::invalid_argument("extract_expansion: radii must be distinct");
    }
    const GridPtr& grid = samples[0].second.grid();

    // column-normalized design matrix
    std::vector<std::vector<double>> A(ns, std::vector<double>(nq));
    std::vector<double> colnorm(nq, 0.0);
    for (int q = 0; q < nq; ++q) {
        for (int i = 0; i < ns; ++i) {
            A[i][q] = std::pow(samples[i].first, -orders[q]);
            colnorm[q] += A[i][q] * A[i][q];
        }
        colnorm[q] = std::sqrt(colnorm[q]);
        for (int i = 0; i < ns; ++i)
            A[i][q] /= colnorm[q];
    }

    std::vector<std::vector<double>> ata(nq, std::vector<double>(nq, 0.0));
    for (int p = 0; p < nq; ++p)
        for (int q = 0; q < nq; ++q)
            for (int i = 0; i < ns; ++i)
                ata[p][q] += A[i][p] * A[i][q];
    std::vector<double> ev = sym_eigenvalues(ata);
    double evmax = 0.0, evmin = std::numeric_limits<double>::max();
    for (double e : ev) {
        evmax = std::max(evmax, e);
        evmin = std::min(evmin, e);
    }
    const double cond = (evmin <= 0.0) ? std::numeric_limits<double>::infinity() : std::sqrt(evmax / evmin);
    if (cond > 1e12)
        throw IllConditionedFit("extract_expansion: design matrix condition number " + std::to_string(cond));

    // solve the normal equations once (Cholesky), shared by every grid node
    std::vector<std::vector<double>> Lc(nq, std::vector<double>(nq, 0.0));
    for (int p = 0; p < nq; ++p) {
        for (int q = 0; q <= p; ++q) {
            double sum = ata[p][q];
            for (int r = 0; r < q; ++r)
                sum -= Lc[p][r] * Lc[q][r];
            if (p == q)
                Lc[p][p] = std::sqrt(sum);
            else
                Lc[p][q] = sum / Lc[q][q];
        }
    }
    auto solve_normal = [&](std::vector<double>& b) {
        for (int p = 0; p < nq; ++p) {
            for (int q = 0; q < p; ++q)
                b[p] -= Lc[p][q] * b[q];
            b[p] /= Lc[p][p];
        }
        for (int p = nq - 1; p >= 0; --p) {
            for (int q = p + 1; q < nq; ++q)
                b[p] -= Lc[q][p] * b[q];
            b[p] /= Lc[p][p];
        }
    };

    ExpansionFit fit;
    fit.orders = orders;
    fit.condition_number = cond;
    fit.max_residual = 0.0;
    for (int q = 0; q < nq; ++q)
        fit.coeffs.emplace_back(grid);

    const SphereGrid& g = *grid;
    std::vector<double> rhs(nq), coef(nq);
    for (int j = 0; j < g.nlat(); ++j)
        for (int k = 0; k < g.nlon(); ++k) {
            for (int q = 0; q < nq; ++q) {
                double acc = 0.0;
                for (int i = 0; i < ns; ++i)
                    acc += A[i][q] * samples[i].second(j, k);
                rhs[q] = acc;
            }
            coef = rhs;
            solve_normal(coef);
            for (int i = 0; i < ns; ++i) {
                double fitval = 0.0;
                for (int q = 0; q < nq; ++q)
                    fitval += A[i][q] * coef[q];
                fit.max_residual = std::max(fit.max_residual, std::abs(fitval - samples[i].second(j, k)));
            }
            for (int q = 0; q < nq; ++q)
                fit.coeffs[q](j, k) = coef[q] / colnorm[q];
        }
    return fit;
}

} // namespace ahq
