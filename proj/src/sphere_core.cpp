#include "ahq/sphere_core.hpp"

#include <cmath>

namespace ahq {

namespace {

constexpr long double kSqrt2L = 1.41421356237309504880168872420969808L;

// cos(m phi_k), sin(m phi_k) for 0 <= m <= mmax
struct TrigTable {
    int nlon;
    int mmax;
    std::vector<long double> c, s;
    long double at_c(int m, int k) const { return c[static_cast<size_t>(m) * nlon + k]; }
    long double at_s(int m, int k) const { return s[static_cast<size_t>(m) * nlon + k]; }
};

TrigTable make_trig(const SphereGrid& g, int mmax) {
    TrigTable t;
    t.nlon = g.nlon();
    t.mmax = mmax;
    t.c.resize(static_cast<size_t>(mmax + 1) * t.nlon);
    t.s.resize(static_cast<size_t>(mmax + 1) * t.nlon);
    for (int m = 0; m <= mmax; ++m)
        for (int k = 0; k < t.nlon; ++k) {
            t.c[static_cast<size_t>(m) * t.nlon + k] = cosl(m * g.phi_l(k));
            t.s[static_cast<size_t>(m) * t.nlon + k] = sinl(m * g.phi_l(k));
        }
    return t;
}

// longitude sums F_c(j,m) = sum_k f(j,k) cos(m phi_k), F_s likewise (unweighted)
struct FourierSums {
    int nlat, mmax;
    std::vector<long double> fc, fs;
    long double c(int j, int m) const { return fc[static_cast<size_t>(j) * (mmax + 1) + m]; }
    long double s(int j, int m) const { return fs[static_cast<size_t>(j) * (mmax + 1) + m]; }
};

FourierSums fourier_sums(const ScalarField& f, const TrigTable& t) {
    const SphereGrid& g = *f.grid();
    FourierSums F;
    F.nlat = g.nlat();
    F.mmax = t.mmax;
    F.fc.assign(static_cast<size_t>(F.nlat) * (F.mmax + 1), 0.0L);
    F.fs.assign(static_cast<size_t>(F.nlat) * (F.mmax + 1), 0.0L);
    for (int j = 0; j < g.nlat(); ++j) {
        for (int m = 0; m <= F.mmax; ++m) {
            long double ac = 0.0L, as = 0.0L;
            for (int k = 0; k < g.nlon(); ++k) {
                const long double v = f(j, k);
                ac += v * t.at_c(m, k);
                as += v * t.at_s(m, k);
            }
            F.fc[static_cast<size_t>(j) * (F.mmax + 1) + m] = ac;
            F.fs[static_cast<size_t>(j) * (F.mmax + 1) + m] = as;
        }
    }
    return F;
}

long double theta_profile(const SphereGrid& g, int ell, int m, int j, int order) {
    switch (order) {
    case 0: return g.plm(ell, m, j);
    case 1: return g.dplm(ell, m, j);
    case 2: return g.d2plm(ell, m, j);
    default: return g.d3plm(ell, m, j);
    }
}

} // namespace

// ---------------------------------------------------------------------------
// quadrature, scalar transforms
// ---------------------------------------------------------------------------

double integrate(const ScalarField& f) {
    const SphereGrid& g = *f.grid();
    long double total = 0.0L;
    for (int j = 0; j < g.nlat(); ++j) {
        long double row = 0.0L;
        for (int k = 0; k < g.nlon(); ++k)
            row += f(j, k);
        total += g.node_weight_l(j) * row;
    }
    return static_cast<double>(total);
}

YlmSpectrum analyze(const ScalarField& f) {
    const SphereGrid& g = *f.grid();
    const int L = g.band_limit();
    const TrigTable trig = make_trig(g, L);
    const FourierSums F = fourier_sums(f, trig);
    YlmSpectrum out(L);
    for (int m = 0; m <= L; ++m) {
        for (int ell = std::max(m, 0); ell <= L; ++ell) {
            long double ac = 0.0L, as = 0.0L;
            for (int j = 0; j < g.nlat(); ++j) {
                const long double p = g.plm(ell, m, j) * g.node_weight_l(j);
                ac += p * F.c(j, m);
                if (m > 0)
                    as += p * F.s(j, m);
            }
            if (m == 0) {
                out(ell, 0) = static_cast<double>(ac);
            } else {
                out(ell, m) = static_cast<double>(kSqrt2L * ac);
                out(ell, -m) = static_cast<double>(kSqrt2L * as);
            }
        }
    }
    return out;
}

ScalarField synthesize_derivative(const YlmSpectrum& spec, const GridPtr& grid, int dtheta, int dphi) {
    const SphereGrid& g = *grid;
    if (spec.band_limit() > g.band_limit())
        throw BandLimitMismatch("synthesize: spectrum band limit exceeds the grid");
    const int L = spec.band_limit();
    if (dtheta < 0 || dphi < 0 || dtheta + dphi > 3)
        throw std::invalid_argument("synthesize_derivative: up to third derivatives only");
    const TrigTable trig = make_trig(g, L);
    ScalarField out(grid);
    std::vector<long double> Ac(L + 1), As(L + 1);
    for (int j = 0; j < g.nlat(); ++j) {
        for (int m = 0; m <= L; ++m) {
            long double pc = 0.0L, ps = 0.0L;
            for (int ell = std::max(1, m); ell <= L; ++ell) {
                const long double p = theta_profile(g, ell, m, j, dtheta);
                pc += p * spec(ell, m);
                if (m > 0)
                    ps += p * spec(ell, -m);
            }
            if (m == 0 && dtheta == 0)
                pc += theta_profile(g, 0, 0, j, 0) * spec(0, 0);
            if (m > 0) {
                pc *= kSqrt2L;
                ps *= kSqrt2L;
            }
            // apply d^dphi/dphi^dphi to the (cos, sin) pair
            const long double mm = static_cast<long double>(m);
            long double ac = pc, as = ps;
            switch (dphi) {
            case 0: break;
            case 1: ac = mm * ps; as = -mm * pc; break;
            case 2: ac = -mm * mm * pc; as = -mm * mm * ps; break;
            case 3: ac = -mm * mm * mm * ps; as = mm * mm * mm * pc; break;
            }
            if (m == 0 && dphi > 0) {
                ac = 0.0L;
                as = 0.0L;
            }
            Ac[m] = ac;
            As[m] = as;
        }
        for (int k = 0; k < g.nlon(); ++k) {
            long double v = Ac[0];
            for (int m = 1; m <= L; ++m)
                v += Ac[m] * trig.at_c(m, k) + As[m] * trig.at_s(m, k);
            out(j, k) = static_cast<double>(v);
        }
    }
    return out;
}

ScalarField synthesize(const YlmSpectrum& s, const GridPtr& grid) { return synthesize_derivative(s, grid, 0, 0); }

ScalarField laplacian(const ScalarField& f) {
    YlmSpectrum s = analyze(f);
    s.scale_by_degree([](int ell) { return -static_cast<double>(ell) * (ell + 1); });
    return synthesize(s, f.grid());
}

// ---------------------------------------------------------------------------
// first-order operators
// ---------------------------------------------------------------------------

OneFormField gradient(const YlmSpectrum& s, const GridPtr& grid) {
    ScalarField th = synthesize_derivative(s, grid, 1, 0);
    ScalarField ph = synthesize_derivative(s, grid, 0, 1);
    const SphereGrid& g = *grid;
    for (int j = 0; j < g.nlat(); ++j) {
        const double inv_s = 1.0 / g.sin_theta(j);
        for (int k = 0; k < g.nlon(); ++k)
            ph(j, k) *= inv_s;
    }
    return OneFormField(std::move(th), std::move(ph));
}

OneFormField gradient(const ScalarField& f) { return gradient(analyze(f), f.grid()); }

OneFormField rotated_gradient(const YlmSpectrum& s, const GridPtr& grid) {
    OneFormField grad = gradient(s, grid);
    // (w_theta, w_phihat) -> (-w_phihat, w_theta)
    ScalarField th = grad.comp_phi();
    th *= -1.0;
    return OneFormField(std::move(th), ScalarField(grad.comp_theta()));
}

OneFormField rotated_gradient(const ScalarField& f) { return rotated_gradient(analyze(f), f.grid()); }

namespace {

// <grad Y_lm, w> and <rotated_grad Y_lm, w> for all modes, by quadrature
void oneform_projections(const OneFormField& w, YlmSpectrum& grad_proj, YlmSpectrum& rot_proj) {
    const SphereGrid& g = *w.grid();
    const int L = g.band_limit();
    const TrigTable trig = make_trig(g, L);
    const FourierSums Ft = fourier_sums(w.comp_theta(), trig);
    const FourierSums Fp = fourier_sums(w.comp_phi(), trig);
    for (int m = 0; m <= L; ++m) {
        for (int ell = std::max(1, m); ell <= L; ++ell) {
            long double gp_c = 0.0L, gp_s = 0.0L, rp_c = 0.0L, rp_s = 0.0L;
            for (int j = 0; j < g.nlat(); ++j) {
                const long double wgt = g.node_weight_l(j);
                const long double dp = g.dplm(ell, m, j);
                const long double pm_over_s = m * g.plm(ell, m, j) / g.sin_theta_l(j);
                gp_c += wgt * (dp * Ft.c(j, m) - pm_over_s * Fp.s(j, m));
                rp_c += wgt * (pm_over_s * Ft.s(j, m) + dp * Fp.c(j, m));
                if (m > 0) {
                    gp_s += wgt * (dp * Ft.s(j, m) + pm_over_s * Fp.c(j, m));
                    rp_s += wgt * (-pm_over_s * Ft.c(j, m) + dp * Fp.s(j, m));
                }
            }
            if (m == 0) {
                grad_proj(ell, 0) = static_cast<double>(gp_c);
                rot_proj(ell, 0) = static_cast<double>(rp_c);
            } else {
                grad_proj(ell, m) = static_cast<double>(kSqrt2L * gp_c);
                grad_proj(ell, -m) = static_cast<double>(kSqrt2L * gp_s);
                rot_proj(ell, m) = static_cast<double>(kSqrt2L * rp_c);
                rot_proj(ell, -m) = static_cast<double>(kSqrt2L * rp_s);
            }
        }
    }
}

} // namespace

YlmSpectrum divergence_spectrum(const OneFormField& w) {
    YlmSpectrum gp(w.grid()->band_limit()), rp(w.grid()->band_limit());
    oneform_projections(w, gp, rp);
    gp *= -1.0;
    return gp;
}

YlmSpectrum curl_spectrum(const OneFormField& w) {
    YlmSpectrum gp(w.grid()->band_limit()), rp(w.grid()->band_limit());
    oneform_projections(w, gp, rp);
    return rp;
}

ScalarField divergence(const OneFormField& w) { return synthesize(divergence_spectrum(w), w.grid()); }
ScalarField curl(const OneFormField& w) { return synthesize(curl_spectrum(w), w.grid()); }

OneFormPotentials decompose_oneform(const OneFormField& w) {
    const int L = w.grid()->band_limit();
    OneFormPotentials p{YlmSpectrum(L), YlmSpectrum(L)};
    YlmSpectrum gp(L), rp(L);
    oneform_projections(w, gp, rp);
    for (int ell = 1; ell <= L; ++ell) {
        const double lam = static_cast<double>(ell) * (ell + 1);
        for (int m = -ell; m <= ell; ++m) {
            p.alpha(ell, m) = gp(ell, m) / lam;
            p.beta(ell, m) = rp(ell, m) / lam;
        }
    }
    return p;
}

OneFormField synthesize_oneform(const OneFormPotentials& p, const GridPtr& grid) {
    OneFormField w = gradient(p.alpha, grid);
    w += rotated_gradient(p.beta, grid);
    return w;
}

// ---------------------------------------------------------------------------
// tensor potentials
// ---------------------------------------------------------------------------

namespace {

// frame profiles of the traceless Hessian basis built on Y_lm:
//   PE1 = (d2 - cot d1 + m^2/s^2 P)/2,  PE2 = (m/s)(d1 - cot P)
long double pe1(const SphereGrid& g, int ell, int m, int j) {
    const long double s = g.sin_theta_l(j);
    const long double cot = g.cos_theta_l(j) / s;
    return 0.5L * (g.d2plm(ell, m, j) - cot * g.dplm(ell, m, j) +
                   static_cast<long double>(m) * m / (s * s) * g.plm(ell, m, j));
}

long double pe2(const SphereGrid& g, int ell, int m, int j) {
    const long double s = g.sin_theta_l(j);
    const long double cot = g.cos_theta_l(j) / s;
    return m / s * (g.dplm(ell, m, j) - cot * g.plm(ell, m, j));
}

} // namespace

TensorPotentials decompose_tensor(const SymTensorField& T) {
    const GridPtr& grid = T.grid();
    const SphereGrid& g = *grid;
    const int L = g.band_limit();
    TensorPotentials out{YlmSpectrum(L), YlmSpectrum(L), YlmSpectrum(L)};

    // trace part
    ScalarField t(grid);
    for (int j = 0; j < g.nlat(); ++j)
        for (int k = 0; k < g.nlon(); ++k)
            t(j, k) = 0.5 * (T.comp_tt()(j, k) + T.comp_pp()(j, k));
    out.trace_half = analyze(t);

    // traceless part, s1 = (T_tt - T_pp)/2, s2 = T_tp
    ScalarField s1(grid), s2(grid);
    for (int j = 0; j < g.nlat(); ++j)
        for (int k = 0; k < g.nlon(); ++k) {
            s1(j, k) = 0.5 * (T.comp_tt()(j, k) - T.comp_pp()(j, k));
            s2(j, k) = T.comp_tp()(j, k);
        }

    const TrigTable trig = make_trig(g, L);
    const FourierSums F1 = fourier_sums(s1, trig);
    const FourierSums F2 = fourier_sums(s2, trig);

    for (int m = 0; m <= L; ++m) {
        for (int ell = std::max(2, m); ell <= L; ++ell) {
            long double e_c = 0.0L, e_s = 0.0L, b_c = 0.0L, b_s = 0.0L;
            for (int j = 0; j < g.nlat(); ++j) {
                const long double wgt = 2.0L * g.node_weight_l(j);
                const long double p1 = pe1(g, ell, m, j);
                const long double p2 = pe2(g, ell, m, j);
                e_c += wgt * (p1 * F1.c(j, m) - p2 * F2.s(j, m));
                b_c += wgt * (p2 * F1.s(j, m) + p1 * F2.c(j, m));
                if (m > 0) {
                    e_s += wgt * (p1 * F1.s(j, m) + p2 * F2.c(j, m));
                    b_s += wgt * (-p2 * F1.c(j, m) + p1 * F2.s(j, m));
                }
            }
            const long double lam = static_cast<long double>(ell) * (ell + 1);
            const long double norm = lam * (lam - 2.0L) / 2.0L;
            if (m == 0) {
                out.e_pot(ell, 0) = static_cast<double>(e_c / norm);
                out.b_pot(ell, 0) = static_cast<double>(b_c / norm);
            } else {
                out.e_pot(ell, m) = static_cast<double>(kSqrt2L * e_c / norm);
                out.e_pot(ell, -m) = static_cast<double>(kSqrt2L * e_s / norm);
                out.b_pot(ell, m) = static_cast<double>(kSqrt2L * b_c / norm);
                out.b_pot(ell, -m) = static_cast<double>(kSqrt2L * b_s / norm);
            }
        }
    }
    return out;
}

SymTensorField synthesize_tensor(const TensorPotentials& p, const GridPtr& grid) {
    const SphereGrid& g = *grid;
    if (p.trace_half.band_limit() > g.band_limit() || p.e_pot.band_limit() > g.band_limit())
        throw BandLimitMismatch("synthesize_tensor: potential band limit exceeds the grid");
    const int L = std::min(p.trace_half.band_limit(), p.e_pot.band_limit());
    const TrigTable trig = make_trig(g, L);
    ScalarField t = synthesize(p.trace_half, grid);
    ScalarField s1(grid), s2(grid);

    std::vector<long double> A1c(L + 1), A1s(L + 1), A2c(L + 1), A2s(L + 1);
    for (int j = 0; j < g.nlat(); ++j) {
        for (int m = 0; m <= L; ++m) {
            long double f_c = 0.0L, f_s = 0.0L, g_c = 0.0L, g_s = 0.0L;
            long double fp2_c = 0.0L, fp2_s = 0.0L, gp2_c = 0.0L, gp2_s = 0.0L;
            for (int ell = std::max(2, m); ell <= L; ++ell) {
                const long double p1 = pe1(g, ell, m, j);
                const long double p2 = pe2(g, ell, m, j);
                f_c += p1 * p.e_pot(ell, m);
                g_c += p1 * p.b_pot(ell, m);
                fp2_c += p2 * p.e_pot(ell, m);
                gp2_c += p2 * p.b_pot(ell, m);
                if (m > 0) {
                    f_s += p1 * p.e_pot(ell, -m);
                    g_s += p1 * p.b_pot(ell, -m);
                    fp2_s += p2 * p.e_pot(ell, -m);
                    gp2_s += p2 * p.b_pot(ell, -m);
                }
            }
            const long double r2 = (m == 0) ? 1.0L : kSqrt2L;
            // s1 = e1(f) - e2(g), s2 = e2(f) + e1(g); e2 of a cos mode rides on sin
            A1c[m] = r2 * (f_c - gp2_s);
            A1s[m] = (m == 0) ? 0.0L : r2 * (f_s + gp2_c);
            A2c[m] = r2 * (fp2_s + g_c);
            A2s[m] = (m == 0) ? 0.0L : r2 * (-fp2_c + g_s);
        }
        for (int k = 0; k < g.nlon(); ++k) {
            long double v1 = A1c[0], v2 = A2c[0];
            for (int m = 1; m <= L; ++m) {
                v1 += A1c[m] * trig.at_c(m, k) + A1s[m] * trig.at_s(m, k);
                v2 += A2c[m] * trig.at_c(m, k) + A2s[m] * trig.at_s(m, k);
            }
            s1(j, k) = static_cast<double>(v1);
            s2(j, k) = static_cast<double>(v2);
        }
    }

    ScalarField tt(grid), tp(grid), pp(grid);
    for (int j = 0; j < g.nlat(); ++j)
        for (int k = 0; k < g.nlon(); ++k) {
            tt(j, k) = t(j, k) + s1(j, k);
            tp(j, k) = s2(j, k);
            pp(j, k) = t(j, k) - s1(j, k);
        }
    return SymTensorField(std::move(tt), std::move(tp), std::move(pp));
}

OneFormPotentials divergence_potentials(const TensorPotentials& p) {
    const int L = p.trace_half.band_limit();
    OneFormPotentials out{YlmSpectrum(L), YlmSpectrum(L)};
    for (int ell = 1; ell <= L; ++ell) {
        const double lam = static_cast<double>(ell) * (ell + 1);
        const double c = 1.0 - lam / 2.0; // (lap/2 + 1) on degree ell
        for (int m = -ell; m <= ell; ++m) {
            out.alpha(ell, m) = p.trace_half(ell, m) + c * p.e_pot(ell, m);
            out.beta(ell, m) = c * p.b_pot(ell, m);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// shifted bilaplacian inverse
// ---------------------------------------------------------------------------

YlmSpectrum invert_shifted_bilaplacian(const YlmSpectrum& f) {
    const int L = f.band_limit();
    const double norm = f.l2_norm();
    const double tol = 1e-10 * norm;
    if (f.max_abs_low() > tol && norm > 0.0)
        throw KernelObstruction(f(0, 0), {f(1, -1), f(1, 0), f(1, 1)});
    YlmSpectrum u(L);
    for (int ell = 2; ell <= L; ++ell) {
        const double lam = static_cast<double>(ell) * (ell + 1);
        const double eig = lam * (lam - 2.0);
        for (int m = -ell; m <= ell; ++m)
            u(ell, m) = f(ell, m) / eig;
    }
    return u;
}

ScalarField invert_shifted_bilaplacian(const ScalarField& f) {
    return synthesize(invert_shifted_bilaplacian(analyze(f)), f.grid());
}

// ---------------------------------------------------------------------------
// pointwise tensor algebra
// ---------------------------------------------------------------------------

ScalarField trace(const SymTensorField& T) {
    ScalarField out = T.comp_tt();
    out += T.comp_pp();
    return out;
}

ScalarField norm_sq(const SymTensorField& T) {
    const SphereGrid& g = *T.grid();
    ScalarField out(T.grid());
    for (int j = 0; j < g.nlat(); ++j)
        for (int k = 0; k < g.nlon(); ++k) {
            const double a = T.comp_tt()(j, k), b = T.comp_tp()(j, k), c = T.comp_pp()(j, k);
            out(j, k) = a * a + 2.0 * b * b + c * c;
        }
    return out;
}

SymTensorField traceless_part(const SymTensorField& T) {
    const SphereGrid& g = *T.grid();
    SymTensorField out = T;
    for (int j = 0; j < g.nlat(); ++j)
        for (int k = 0; k < g.nlon(); ++k) {
            const double half_tr = 0.5 * (T.comp_tt()(j, k) + T.comp_pp()(j, k));
            out.comp_tt()(j, k) -= half_tr;
            out.comp_pp()(j, k) -= half_tr;
        }
    return out;
}

// ---------------------------------------------------------------------------
// coordinate functions
// ---------------------------------------------------------------------------

ScalarField coordinate_function(const GridPtr& grid, int i) {
    const SphereGrid& g = *grid;
    ScalarField out(grid);
    for (int j = 0; j < g.nlat(); ++j)
        for (int k = 0; k < g.nlon(); ++k) {
            switch (i) {
            case 1: out(j, k) = g.sin_theta(j) * std::cos(g.phi(k)); break;
            case 2: out(j, k) = g.sin_theta(j) * std::sin(g.phi(k)); break;
            case 3: out(j, k) = g.cos_theta(j); break;
            default: throw std::invalid_argument("coordinate_function: i must be 1, 2, or 3");
            }
        }
    return out;
}

std::array<ScalarField, 3> coordinate_functions(const GridPtr& grid) {
    return {coordinate_function(grid, 1), coordinate_function(grid, 2), coordinate_function(grid, 3)};
}

double evaluate_at(const YlmSpectrum& s, double theta, double phi) {
    const int L = s.band_limit();
    const double x = std::cos(theta), st = std::sin(theta);
    const double pi = std::acos(-1.0);
    // normalized P_lm(x) by the same recurrences as the grid tables
    std::vector<double> pmm(L + 1);
    pmm[0] = std::sqrt(1.0 / (4.0 * pi));
    for (int m = 1; m <= L; ++m)
        pmm[m] = pmm[m - 1] * st * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    double total = 0.0;
    for (int m = 0; m <= L; ++m) {
        double plo = pmm[m];
        double phi_c = std::cos(m * phi), phi_s = std::sin(m * phi);
        double pcur = plo;
        for (int ell = m; ell <= L; ++ell) {
            double p;
            if (ell == m) {
                p = plo;
            } else if (ell == m + 1) {
                pcur = std::sqrt(2.0 * m + 3.0) * x * plo;
                p = pcur;
            } else {
                const double a = std::sqrt((4.0 * ell * ell - 1.0) / (static_cast<double>(ell) * ell - m * m));
                const double b = std::sqrt((static_cast<double>(ell - 1) * (ell - 1) - m * m) /
                                           (4.0 * (ell - 1.0) * (ell - 1.0) - 1.0));
                const double pnew = a * (x * pcur - b * plo);
                plo = pcur;
                pcur = pnew;
                p = pnew;
            }
            if (m == 0)
                total += s(ell, 0) * p;
            else
                total += std::sqrt(2.0) * p * (s(ell, m) * phi_c + s(ell, -m) * phi_s);
        }
    }
    return total;
}

} // namespace ahq
