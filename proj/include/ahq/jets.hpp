#pragma once

#include "ahq/sphere_core.hpp"

namespace ahq {

// Coordinate-basis components and their first partial derivatives, evaluated
// analytically from potential representations. These feed the finite-radius
// geometry oracle, where grid differencing would lose the spectral accuracy.

struct ScalarJet {
    ScalarField value, dth, dph;
};

struct OneFormJet {
    // w_theta, w_phi are coordinate components (w_phi = sin(theta) * frame phihat)
    ScalarField th, ph;
    ScalarField th_dth, th_dph, ph_dth, ph_dph;
};

struct TensorJet {
    ScalarField tt, tp, pp; // T_theta_theta, T_theta_phi, T_phi_phi (coordinates)
    ScalarField tt_dth, tt_dph, tp_dth, tp_dph, pp_dth, pp_dph;
};

ScalarJet scalar_jet(const YlmSpectrum& s, const GridPtr& grid);
OneFormJet oneform_jet(const OneFormPotentials& p, const GridPtr& grid);
TensorJet tensor_jet(const TensorPotentials& p, const GridPtr& grid);

} // namespace ahq
