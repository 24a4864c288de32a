#include "ahq/jets.hpp"

namespace ahq {

ScalarJet scalar_jet(const YlmSpectrum& spec, const GridPtr& grid) {
    return ScalarJet{synthesize(spec, grid), synthesize_derivative(spec, grid, 1, 0),
                     synthesize_derivative(spec, grid, 0, 1)};
}

OneFormJet oneform_jet(const OneFormPotentials& p, const GridPtr& grid) {
    const SphereGrid& g = *grid;
    auto d = [&](const YlmSpectrum& s, int a, int b) { return synthesize_derivative(s, grid, a, b); };
    ScalarField a_t = d(p.alpha, 1, 0), a_p = d(p.alpha, 0, 1);
    ScalarField a_tt = d(p.alpha, 2, 0), a_tp = d(p.alpha, 1, 1), a_pp = d(p.alpha, 0, 2);
    ScalarField b_t = d(p.beta, 1, 0), b_p = d(p.beta, 0, 1);
    ScalarField b_tt = d(p.beta, 2, 0), b_tp = d(p.beta, 1, 1), b_pp = d(p.beta, 0, 2);

    OneFormJet out{ScalarField(grid), ScalarField(grid), ScalarField(grid),
                   ScalarField(grid), ScalarField(grid), ScalarField(grid)};
    for (int j = 0; j < g.nlat(); ++j) {
        const double s = g.sin_theta(j), c = g.cos_theta(j);
        for (int k = 0; k < g.nlon(); ++k) {
            // w = grad(alpha) + rotated_gradient(beta):
            //   w_theta = alpha_t - beta_p / s,  w_phi = alpha_p + s beta_t
            out.th(j, k) = a_t(j, k) - b_p(j, k) / s;
            out.ph(j, k) = a_p(j, k) + s * b_t(j, k);
            out.th_dth(j, k) = a_tt(j, k) - b_tp(j, k) / s + b_p(j, k) * c / (s * s);
            out.th_dph(j, k) = a_tp(j, k) - b_pp(j, k) / s;
            out.ph_dth(j, k) = a_tp(j, k) + c * b_t(j, k) + s * b_tt(j, k);
            out.ph_dph(j, k) = a_pp(j, k) + s * b_tp(j, k);
        }
    }
    return out;
}

namespace {

// frame functions e1 = (H11 - H22)/2, e2 = H12 of the Hessian of a potential,
// plus their coordinate partials; needs potential derivatives through order 3
struct HessFuncs {
    ScalarField e1, e2, e1_dth, e1_dph, e2_dth, e2_dph;
};

HessFuncs hess_funcs(const YlmSpectrum& spec, const GridPtr& grid) {
    const SphereGrid& g = *grid;
    auto d = [&](int a, int b) { return synthesize_derivative(spec, grid, a, b); };
    ScalarField f_t = d(1, 0), f_p = d(0, 1);
    ScalarField f_tt = d(2, 0), f_tp = d(1, 1), f_pp = d(0, 2);
    ScalarField f_ttt = d(3, 0), f_ttp = d(2, 1), f_tpp = d(1, 2), f_ppp = d(0, 3);

    HessFuncs out{ScalarField(grid), ScalarField(grid), ScalarField(grid),
                  ScalarField(grid), ScalarField(grid), ScalarField(grid)};
    for (int j = 0; j < g.nlat(); ++j) {
        const double s = g.sin_theta(j), c = g.cos_theta(j);
        const double s2 = s * s, s3 = s2 * s;
        const double cot = c / s;
        for (int k = 0; k < g.nlon(); ++k) {
            out.e1(j, k) = 0.5 * (f_tt(j, k) - cot * f_t(j, k) - f_pp(j, k) / s2);
            out.e2(j, k) = f_tp(j, k) / s - c * f_p(j, k) / s2;
            out.e1_dth(j, k) = 0.5 * (f_ttt(j, k) + f_t(j, k) / s2 - cot * f_tt(j, k) - f_tpp(j, k) / s2 +
                                      2.0 * c * f_pp(j, k) / s3);
            out.e1_dph(j, k) = 0.5 * (f_ttp(j, k) - cot * f_tp(j, k) - f_ppp(j, k) / s2);
            out.e2_dth(j, k) =
                f_ttp(j, k) / s - 2.0 * c * f_tp(j, k) / s2 + (1.0 + c * c) * f_p(j, k) / s3;
            out.e2_dph(j, k) = f_tpp(j, k) / s - c * f_pp(j, k) / s2;
        }
    }
    return out;
}

} // namespace

TensorJet tensor_jet(const TensorPotentials& p, const GridPtr& grid) {
    const SphereGrid& g = *grid;
    ScalarJet t = scalar_jet(p.trace_half, grid);
    HessFuncs f = hess_funcs(p.e_pot, grid);
    HessFuncs h = hess_funcs(p.b_pot, grid);

    TensorJet out{ScalarField(grid), ScalarField(grid), ScalarField(grid),
                  ScalarField(grid), ScalarField(grid), ScalarField(grid),
                  ScalarField(grid), ScalarField(grid), ScalarField(grid)};
    for (int j = 0; j < g.nlat(); ++j) {
        const double s = g.sin_theta(j), c = g.cos_theta(j);
        const double s2 = s * s;
        for (int k = 0; k < g.nlon(); ++k) {
            // T = t sigma~ + E(f) + B(g); traceless frame pair of the sum:
            //   s1 = e1(f) - e2(g), s2 = e2(f) + e1(g)
            const double s1v = f.e1(j, k) - h.e2(j, k);
            const double s2v = f.e2(j, k) + h.e1(j, k);
            const double s1_dt = f.e1_dth(j, k) - h.e2_dth(j, k);
            const double s1_dp = f.e1_dph(j, k) - h.e2_dph(j, k);
            const double s2_dt = f.e2_dth(j, k) + h.e1_dth(j, k);
            const double s2_dp = f.e2_dph(j, k) + h.e1_dph(j, k);

            out.tt(j, k) = t.value(j, k) + s1v;
            out.tp(j, k) = s * s2v;
            out.pp(j, k) = s2 * (t.value(j, k) - s1v);
            out.tt_dth(j, k) = t.dth(j, k) + s1_dt;
            out.tt_dph(j, k) = t.dph(j, k) + s1_dp;
            out.tp_dth(j, k) = c * s2v + s * s2_dt;
            out.tp_dph(j, k) = s * s2_dp;
            out.pp_dth(j, k) = 2.0 * s * c * (t.value(j, k) - s1v) + s2 * (t.dth(j, k) - s1_dt);
            out.pp_dph(j, k) = s2 * (t.dph(j, k) - s1_dp);
        }
    }
    return out;
}

} // namespace ahq
