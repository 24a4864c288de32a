#pragma once

#include "ahq/fields.hpp"
#include "ahq/spectrum.hpp"

#include <array>

namespace ahq {

// ---------------------------------------------------------------------------
// Quadrature and scalar transforms
// ---------------------------------------------------------------------------

double integrate(const ScalarField& f);

YlmSpectrum analyze(const ScalarField& f);
ScalarField synthesize(const YlmSpectrum& s, const GridPtr& grid);

// Synthesis of d^a/dtheta^a d^b/dphi^b of the represented function, a+b <= 3.
// Partial derivatives in coordinates (theta, phi), not frame components.
ScalarField synthesize_derivative(const YlmSpectrum& s, const GridPtr& grid, int dtheta, int dphi);

// ---------------------------------------------------------------------------
// Differential operators. Sign conventions, fixed once for the whole library:
//   laplacian Y_lm = -l(l+1) Y_lm
//   orientation eps_{theta phihat} = +1
//   rotated_gradient(g)_a = eps^b_a grad_b g   (components (-g_phi/sin, g_theta))
//   curl(w) = eps^{ab} grad_b w_a, so curl(gradient f) = 0 and
//   curl(rotated_gradient g) = -laplacian g.
// First-order operators on one-forms are evaluated weakly, by quadrature
// against analytic derivatives of the harmonics; no pole differencing.
// ---------------------------------------------------------------------------

ScalarField laplacian(const ScalarField& f);

OneFormField gradient(const ScalarField& f);
OneFormField rotated_gradient(const ScalarField& f);
OneFormField gradient(const YlmSpectrum& s, const GridPtr& grid);
OneFormField rotated_gradient(const YlmSpectrum& s, const GridPtr& grid);

ScalarField divergence(const OneFormField& w);
ScalarField curl(const OneFormField& w);
YlmSpectrum divergence_spectrum(const OneFormField& w);
YlmSpectrum curl_spectrum(const OneFormField& w);

// Helmholtz potentials of a one-form: w = gradient(alpha) + rotated_gradient(beta),
// both potentials supported on ell >= 1. Exact for band-limited one-forms.
struct OneFormPotentials {
    YlmSpectrum alpha;
    YlmSpectrum beta;
};
OneFormPotentials decompose_oneform(const OneFormField& w);
OneFormField synthesize_oneform(const OneFormPotentials& p, const GridPtr& grid);

// Potential representation of a symmetric 2-tensor:
//   T = t sigma~ + (Hess f - (1/2) sigma~ lap f) + eps.(Hess g traceless part)
// t carries the trace (t = tr T / 2, any ell), f and g are supported on ell >= 2.
struct TensorPotentials {
    YlmSpectrum trace_half; // t
    YlmSpectrum e_pot;      // f
    YlmSpectrum b_pot;      // g
};
TensorPotentials decompose_tensor(const SymTensorField& T);
SymTensorField synthesize_tensor(const TensorPotentials& p, const GridPtr& grid);

// divergence of a symmetric 2-tensor, (div T)_b = grad^a T_ab, returned through
// its Helmholtz potentials:  div T = gradient(t + (lap/2 + 1) f)
//                                   + rotated_gradient((lap/2 + 1) g)
OneFormPotentials divergence_potentials(const TensorPotentials& p);

// Quadrature route for the same quantity, independent of the potential algebra:
// projects grad^a T_ab onto the harmonic gradient / rotated-gradient basis using
// pointwise Hessians of the harmonics. Used for residual checks.
OneFormPotentials divergence_potentials_weak(const SymTensorField& T);

// ---------------------------------------------------------------------------
// Shifted bilaplacian
// ---------------------------------------------------------------------------

// lap(lap+2) has kernel ell <= 1. Carries the offending coefficients.
struct KernelObstruction : std::runtime_error {
    KernelObstruction(double ell0, std::array<double, 3> ell1)
        : std::runtime_error("shifted bilaplacian: right-hand side meets the ell<=1 kernel"),
          coeff_ell0(ell0), coeff_ell1(ell1) {}
    double coeff_ell0;
    std::array<double, 3> coeff_ell1; // m = -1, 0, +1
};

// Solves lap(lap+2) u = f on the ell >= 2 subspace; u's ell <= 1 modes are set
// to zero. Throws KernelObstruction when f has ell <= 1 content above
// 1e-10 * ||f||_2.
ScalarField invert_shifted_bilaplacian(const ScalarField& f);
YlmSpectrum invert_shifted_bilaplacian(const YlmSpectrum& f);

// ---------------------------------------------------------------------------
// Pointwise tensor algebra
// ---------------------------------------------------------------------------

ScalarField trace(const SymTensorField& T);
ScalarField norm_sq(const SymTensorField& T);
SymTensorField traceless_part(const SymTensorField& T);

// ---------------------------------------------------------------------------
// Standard coordinate functions on S^2 (the -2 eigenfunctions)
// ---------------------------------------------------------------------------

ScalarField coordinate_function(const GridPtr& grid, int i); // i = 1, 2, 3
std::array<ScalarField, 3> coordinate_functions(const GridPtr& grid);

// Evaluate a spectrum at an arbitrary point (used by quadrature oracles).
double evaluate_at(const YlmSpectrum& s, double theta, double phi);

} // namespace ahq
