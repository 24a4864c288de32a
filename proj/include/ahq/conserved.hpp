#pragma once

#include "ahq/ah_data.hpp"

#include <optional>

namespace ahq {

struct NullOrSpacelikeMomentum : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonzeroMomentum : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingMatterField : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// m = 3/2 tr g_ab_m1 + tr p_ab_m1 + g_rr_m5
ScalarField mass_aspect(const AHExpansionData& d);

// E = (1/8pi) int m,  P^i = (1/8pi) int x^i m
struct EnergyMomentum {
    double E;
    std::array<double, 3> P;
    double momentum_norm() const;
};
EnergyMomentum energy_momentum(const AHExpansionData& d);

// (1/8pi) int m / F = (1/8pi) int m (a0 + a.x); equals a0 E + a.P
double boost_energy(const AHExpansionData& d, const BoostVector& a);

// rest mass sqrt(E^2 - |P|^2) and the minimizing boost (E, -P)/M.
// Requires E > |P| + 1e-12; throws NullOrSpacelikeMomentum otherwise.
std::pair<double, BoostVector> rest_frame(const AHExpansionData& d);

// O1^i = int x^i m (proportional to momentum), O2^i = int x^i curl(alpha_m1)
// (structurally zero: alpha_m1 is a gradient)
std::pair<std::array<double, 3>, std::array<double, 3>> finiteness_obstruction(const AHExpansionData& d);

// (1/8pi) int x^i (2 tr g_ab_m2 + g_rr_m6 + div g_ra_m3 + tr p_ab_m2);
// defined only on vanishing-momentum foliations (|P| <= gate * max(E,1)).
constexpr double kMomentumGate = 1e-8;
std::array<double, 3> center_of_mass(const AHExpansionData& d, double momentum_gate = kMomentumGate);

// Both routes through the embedding machinery:
//   direct   = (1/8pi) int x^i (h0_m3 - h_m3)       (full linearized solve)
//   shortcut = -(1/8pi) int x^i (h_m3 + h_m2^2 / 4)
struct ComCrossCheck {
    std::array<double, 3> direct;
    std::array<double, 3> shortcut;
    double max_disagreement() const;
};
ComCrossCheck com_via_embedding(const AHExpansionData& d, double momentum_gate = kMomentumGate);

// (1/8pi) int x^i curl(g_ra_m3 + p_ra_m3); same momentum gate as the center of mass
std::array<double, 3> angular_momentum(const AHExpansionData& d, double momentum_gate = kMomentumGate);

// -(1/8pi) int |p_ab_0 + g_ab_0|^2   (never positive)
double vacuum_loss_rate(const AHExpansionData& d);

// vacuum rate - (1/8pi) int F^2; requires matter_F
double matter_loss_rate(const AHExpansionData& d);

// batch record with undefined-flags where the gates fail
struct ConservedSet {
    double E = 0.0;
    std::array<double, 3> P{};
    std::optional<double> M_rest;
    std::optional<BoostVector> rest_frame;
    std::string rest_frame_reason; // set when undefined
    std::optional<std::array<double, 3>> C, J;
    std::string com_reason; // set when C, J undefined
    double vacuum_loss_rate = 0.0;
    std::optional<double> matter_loss_rate;
};
ConservedSet evaluate_conserved(const AHExpansionData& d, double momentum_gate = kMomentumGate);

// shared helper: (1/8pi) int x^i f for i = 1..3
std::array<double, 3> first_moments_over_8pi(const ScalarField& f);

} // namespace ahq
