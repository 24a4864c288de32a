#include "ahq/conserved.hpp"

#include "ahq/optimal_embedding.hpp"
#include "ahq/surface_geometry.hpp"

#include <cmath>

namespace ahq {

namespace {

const double kEightPi = 8.0 * std::acos(-1.0);

void require_zero_momentum(const EnergyMomentum& ep, double momentum_gate) {
    const double gate = momentum_gate * std::max(ep.E, 1.0);
    if (ep.momentum_norm() > gate)
        throw NonzeroMomentum("center of mass / angular momentum undefined: |P| = " +
                              std::to_string(ep.momentum_norm()) + " exceeds " + std::to_string(gate) +
                              " on this foliation");
}

} // namespace

double EnergyMomentum::momentum_norm() const { return std::sqrt(P[0] * P[0] + P[1] * P[1] + P[2] * P[2]); }

double ComCrossCheck::max_disagreement() const {
    double w = 0.0;
    for (int i = 0; i < 3; ++i)
        w = std::max(w, std::abs(direct[i] - shortcut[i]));
    return w;
}

ScalarField mass_aspect(const AHExpansionData& d) {
    return 1.5 * trace(d.g_ab_m1) + trace(d.p_ab_m1) + d.g_rr_m5;
}

std::array<double, 3> first_moments_over_8pi(const ScalarField& f) {
    std::array<double, 3> out{};
    for (int i = 0; i < 3; ++i)
        out[i] = integrate(pointwise_product(coordinate_function(f.grid(), i + 1), f)) / kEightPi;
    return out;
}

EnergyMomentum energy_momentum(const AHExpansionData& d) {
    ScalarField m = mass_aspect(d);
    return EnergyMomentum{integrate(m) / kEightPi, first_moments_over_8pi(m)};
}

double boost_energy(const AHExpansionData& d, const BoostVector& a) {
    if (!a.valid())
        throw std::invalid_argument("boost_energy: boost vector is not unit timelike");
    ScalarField m = mass_aspect(d);
    const GridPtr& grid = d.grid();
    ScalarField weight(grid, a.a0);
    for (int i = 0; i < 3; ++i)
        if (a.a[i] != 0.0)
            weight += a.a[i] * coordinate_function(grid, i + 1);
    return integrate(pointwise_product(m, weight)) / kEightPi;
}

std::pair<double, BoostVector> rest_frame(const AHExpansionData& d) {
    const EnergyMomentum ep = energy_momentum(d);
    const double pnorm = ep.momentum_norm();
    if (!(ep.E > pnorm + 1e-12))
        throw NullOrSpacelikeMomentum("rest frame undefined: E = " + std::to_string(ep.E) +
                                      " is not strictly above |P| = " + std::to_string(pnorm));
    const double M = std::sqrt(ep.E * ep.E - pnorm * pnorm);
    BoostVector b;
    b.a0 = ep.E / M;
    for (int i = 0; i < 3; ++i)
        b.a[i] = -ep.P[i] / M;
    return {M, b};
}

std::pair<std::array<double, 3>, std::array<double, 3>> finiteness_obstruction(const AHExpansionData& d) {
    ScalarField m = mass_aspect(d);
    std::array<double, 3> o1{};
    for (int i = 0; i < 3; ++i)
        o1[i] = integrate(pointwise_product(coordinate_function(d.grid(), i + 1), m));
    OneFormField alpha_m1 = 0.5 * gradient(m);
    ScalarField c = curl(alpha_m1);
    std::array<double, 3> o2{};
    for (int i = 0; i < 3; ++i)
        o2[i] = integrate(pointwise_product(coordinate_function(d.grid(), i + 1), c));
    return {o1, o2};
}

std::array<double, 3> center_of_mass(const AHExpansionData& d, double momentum_gate) {
    require_zero_momentum(energy_momentum(d), momentum_gate);
    ScalarField integrand =
        2.0 * trace(d.g_ab_m2) + d.g_rr_m6 + divergence(d.g_ra_m3) + trace(d.p_ab_m2);
    return first_moments_over_8pi(integrand);
}

ComCrossCheck com_via_embedding(const AHExpansionData& d, double momentum_gate) {
    require_zero_momentum(energy_momentum(d), momentum_gate);
    SphereExpansion exp = coordinate_sphere_expansion(d);

    OptimalSolution sol = solve_optimal_embedding(exp.h_m2, BoostVector::identity());
    if (!sol.solvable)
        throw NonzeroMomentum("optimal embedding obstruction nonzero despite momentum gate");
    EmbeddingLinearization lin = solve_linearized_embedding(sol.X0_0, d.g_ab_0);

    ComCrossCheck out;
    out.direct = first_moments_over_8pi(lin.h0_m3 - exp.h_m3);
    ScalarField shortcut_integrand = exp.h_m3 + 0.25 * pointwise_product(exp.h_m2, exp.h_m2);
    out.shortcut = first_moments_over_8pi(shortcut_integrand);
    for (double& v : out.shortcut)
        v = -v;
    return out;
}

std::array<double, 3> angular_momentum(const AHExpansionData& d, double momentum_gate) {
    require_zero_momentum(energy_momentum(d), momentum_gate);
    return first_moments_over_8pi(curl(d.g_ra_m3 + d.p_ra_m3));
}

double vacuum_loss_rate(const AHExpansionData& d) {
    return -integrate(norm_sq(d.p_ab_0 + d.g_ab_0)) / kEightPi;
}

double matter_loss_rate(const AHExpansionData& d) {
    if (!d.matter_F)
        throw MissingMatterField("matter_loss_rate: data carries no matter flux field");
    return vacuum_loss_rate(d) - integrate(pointwise_product(*d.matter_F, *d.matter_F)) / kEightPi;
}

ConservedSet evaluate_conserved(const AHExpansionData& d, double momentum_gate) {
    ConservedSet out;
    const EnergyMomentum ep = energy_momentum(d);
    out.E = ep.E;
    out.P = ep.P;
    try {
        auto [m, frame] = rest_frame(d);
        out.M_rest = m;
        out.rest_frame = frame;
    } catch (const NullOrSpacelikeMomentum& e) {
        out.rest_frame_reason = "null_or_spacelike_momentum";
    }
    try {
        out.C = center_of_mass(d, momentum_gate);
        out.J = angular_momentum(d, momentum_gate);
    } catch (const NonzeroMomentum& e) {
        out.com_reason = "nonzero_momentum";
    }
    out.vacuum_loss_rate = vacuum_loss_rate(d);
    if (d.matter_F)
        out.matter_loss_rate = matter_loss_rate(d);
    return out;
}

} // namespace ahq
