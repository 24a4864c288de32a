#pragma once

#include "ahq/ah_data.hpp"

namespace ahq {

// Leading-order embedding equation  (1/2) lap(lap+2) X0 = RHS(h_m2, a).
// Solvability is decided by the ell <= 1 content of the right-hand side.
struct OptimalSolution {
    ScalarField X0_0;                  // ell >= 2 solution (gauge: no ell <= 1 modes)
    std::array<double, 4> obstruction; // RHS modes (0,0), (1,-1), (1,0), (1,1)
    bool solvable;
    ScalarField tau_leading; // leading observer time: X0_0 with b^i fixed to 0
    double pde_residual;     // sup | (1/2) lap(lap+2) X0 - RHS |
};

// -(1/2) lap h + sum_i (a^i/a^0) [ div(h grad x^i) + lap(h x^i / 2) ]
ScalarField assemble_optimal_rhs(const ScalarField& h_m2, const BoostVector& a);

OptimalSolution solve_optimal_embedding(const ScalarField& h_m2, const BoostVector& a);

} // namespace ahq
