#pragma once

#include "ahq/ah_data.hpp"

#include <utility>
#include <vector>

namespace ahq {

// Expansion of the coordinate-sphere data (sigma, |H|, alpha_H) in powers of
// 1/r:  |H| = 2/r + h_m2/r^2 + h_m3/r^3 + ...,
//       alpha_H = alpha_m1/r + alpha_m2/r^2 + ...  (only curl(alpha_m2) is
// determined and stored), sigma = r^2 sigma~ + sigma_0 + sigma_m1/r + ...
struct SphereExpansion {
    ScalarField h_m2, h_m3;
    OneFormField alpha_m1;
    ScalarField alpha_m2_curl;
    SymTensorField sigma_0, sigma_m1;
};

SphereExpansion coordinate_sphere_expansion(const AHExpansionData& d);

// leading and subleading |H| coefficients on the boosted foliation r = R/(a0 + a.x):
// (2, -m (a0 + a.x)^3) pointwise
std::pair<ScalarField, ScalarField> boosted_expansion(const AHExpansionData& d, const BoostVector& a);

// residual of the constant-curvature identity (1/F^2)(1 - lap ln F) - 1 for
// F = 1/(a0 + a.x); zero up to spectral truncation
ScalarField gauss_curvature_check(const GridPtr& grid, const BoostVector& a);

// ---------------------------------------------------------------------------
// linearized isometric embedding (round-sphere background)
// ---------------------------------------------------------------------------

struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Output of the compatibility-system solve for the radial deformation:
// T_ab = grad_a X0 grad_b X0 + g0_ab; unknowns (F, P_a) satisfy
//   curl(P) = 2 F   and   P = (grad tr T - div T)/2 + rotated_gradient(F),
// and h0_m3 = -div P + tr T / 2 - (lap X0)^2 / 4.
struct EmbeddingLinearization {
    ScalarField X0_0;
    SymTensorField T_ab;
    ScalarField F_pot;
    OneFormField P_a;
    ScalarField h0_m3;
    double compatibility_residual;
};

EmbeddingLinearization solve_linearized_embedding(const ScalarField& X0_0, const SymTensorField& g0);

// ---------------------------------------------------------------------------
// finite-radius oracle
// ---------------------------------------------------------------------------

struct NonSpacelikeH : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |H| of the coordinate sphere of radius r, for the metric and second
// fundamental form reconstructed by truncating the coefficient series exactly
// at the stored orders. Radial derivatives are analytic; angular derivatives
// come from the potential representation of each field. r >= 10. The batched
// overload evaluates the radius-independent field derivatives once.
ScalarField finite_r_mean_curvature(const AHExpansionData& d, double r);
std::vector<ScalarField> finite_r_mean_curvature(const AHExpansionData& d, const std::vector<double>& radii);

// closed-form |H|(r) of the truncated zero-data ansatz (g_rr = 1/r^2 - 1/r^4)
double hyperboloid_mean_curvature(double r);

// ---------------------------------------------------------------------------
// inverse-power fit across radii
// ---------------------------------------------------------------------------

struct IllConditionedFit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExpansionFit {
    std::vector<int> orders;         // fitted inverse powers, e.g. {2, 3}
    std::vector<ScalarField> coeffs; // one coefficient field per order
    double max_residual;             // sup over samples and nodes
    double condition_number;         // of the column-normalized design matrix
};

// Least squares fit  y(r) ~ sum_q coeff_q r^-orders[q]  pointwise over the
// grid. Requires at least orders.size()+1 distinct radii, all >= 10; throws
// IllConditionedFit when underdetermined or when the normalized design matrix
// has condition number above 1e12.
ExpansionFit extract_expansion(const std::vector<std::pair<double, ScalarField>>& samples,
                               const std::vector<int>& orders);

} // namespace ahq
