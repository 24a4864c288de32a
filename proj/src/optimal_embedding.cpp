#include "ahq/optimal_embedding.hpp"

#include <cmath>

namespace ahq {

ScalarField assemble_optimal_rhs(const ScalarField& h_m2, const BoostVector& a) {
    if (!a.valid())
        throw std::invalid_argument("assemble_optimal_rhs: boost vector is not unit timelike");
    const GridPtr& grid = h_m2.grid();
    ScalarField rhs = -0.5 * laplacian(h_m2);
    for (int i = 0; i < 3; ++i) {
        if (a.a[i] == 0.0)
            continue;
        const double w = a.a[i] / a.a0;
        ScalarField xi = coordinate_function(grid, i + 1);
        OneFormField grad_xi = gradient(xi);
        OneFormField h_grad_xi(pointwise_product(h_m2, grad_xi.comp_theta()),
                               pointwise_product(h_m2, grad_xi.comp_phi()));
        rhs += w * divergence(h_grad_xi);
        rhs += (0.5 * w) * laplacian(pointwise_product(h_m2, xi));
    }
    return rhs;
}

OptimalSolution solve_optimal_embedding(const ScalarField& h_m2, const BoostVector& a) {
    const GridPtr& grid = h_m2.grid();
    ScalarField rhs = assemble_optimal_rhs(h_m2, a);
    YlmSpectrum rs = analyze(rhs);
    const std::array<double, 4> obstruction{rs(0, 0), rs(1, -1), rs(1, 0), rs(1, 1)};
    double worst = 0.0;
    for (double o : obstruction)
        worst = std::max(worst, std::abs(o));
    const double norm = rs.l2_norm();
    const bool solvable = (norm == 0.0) || (worst <= 1e-10 * norm);

    // lap(lap+2) X0 = 2 RHS on the ell >= 2 subspace
    const int L = grid->band_limit();
    YlmSpectrum x0(L);
    for (int ell = 2; ell <= L; ++ell) {
        const double lam = static_cast<double>(ell) * (ell + 1);
        for (int m = -ell; m <= ell; ++m)
            x0(ell, m) = 2.0 * rs(ell, m) / (lam * (lam - 2.0));
    }
    ScalarField X0 = synthesize(x0, grid);

    // residual through the grid-space operator route
    ScalarField lapX0 = laplacian(X0);
    ScalarField op = 0.5 * laplacian(lapX0 + 2.0 * X0);
    double resid = 0.0;
    const SphereGrid& g = *grid;
    for (int j = 0; j < g.nlat(); ++j)
        for (int k = 0; k < g.nlon(); ++k) {
            double target = rhs(j, k);
            resid = std::max(resid, std::abs(op(j, k) - target));
        }
    // when not solvable, only the ell >= 2 part of the equation is met; report
    // the residual against the projected right-hand side instead
    if (!solvable) {
        YlmSpectrum proj = rs;
        proj(0, 0) = 0.0;
        for (int m = -1; m <= 1; ++m)
            proj(1, m) = 0.0;
        ScalarField rhs_proj = synthesize(proj, grid);
        resid = 0.0;
        for (int j = 0; j < g.nlat(); ++j)
            for (int k = 0; k < g.nlon(); ++k)
                resid = std::max(resid, std::abs(op(j, k) - rhs_proj(j, k)));
    }

    return OptimalSolution{X0, obstruction, solvable, X0, resid};
}

} // namespace ahq
