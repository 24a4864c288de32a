#pragma once

#include "ahq/sphere_core.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace ahq {

// The eleven expansion coefficient fields of an asymptotically hyperbolic end,
// all sampled on one shared grid. Metric coefficients:
//   g_rr = 1/r^2 - 1/r^4 + g_rr_m5/r^5 + g_rr_m6/r^6
//   g_ra = g_ra_m3/r^3
//   g_ab = r^2 sigma~ + g_ab_0 + g_ab_m1/r + g_ab_m2/r^2
// and likewise p = k - g with p_rr_m4, p_ra_m3, p_ab_0 / _m1 / _m2.
// g_ab_0 and p_ab_0 are traceless. p_rr_m4 is carried for completeness; no
// computed quantity consumes it. matter_F is the optional null flux amplitude.
struct AHExpansionData {
    ScalarField g_rr_m5, g_rr_m6, p_rr_m4;
    OneFormField g_ra_m3, p_ra_m3;
    SymTensorField g_ab_0, g_ab_m1, g_ab_m2;
    SymTensorField p_ab_0, p_ab_m1, p_ab_m2;
    std::optional<ScalarField> matter_F;

    const GridPtr& grid() const { return g_rr_m5.grid(); }
    static AHExpansionData zero(const GridPtr& grid);
    AHExpansionData scaled(double lambda) const;
};

// Future-directed unit timelike vector labeling a boosted foliation.
struct BoostVector {
    double a0 = 1.0;
    std::array<double, 3> a{0.0, 0.0, 0.0};

    static BoostVector identity() { return {}; }
    static BoostVector from_rapidity(double rapidity, int axis);
    static BoostVector from_spatial(const std::array<double, 3>& v);
    bool valid(double tol = 1e-12) const;
};

struct ValidationIssue {
    std::string field;
    std::string what;
    double magnitude = 0.0;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

ValidationReport validate(const AHExpansionData& d);

// ---------------------------------------------------------------------------
// generators
// ---------------------------------------------------------------------------

// hyperboloid in flat spacetime: every coefficient field vanishes
AHExpansionData generate_minkowski_hyperboloid(const GridPtr& grid);

// g_rr_m5 = 2 m0, everything else zero; mass aspect is the constant 2 m0
AHExpansionData generate_schwarzschild_aspect(const GridPtr& grid, double m0);

struct RandomDataParams {
    std::uint64_t seed = 1;
    int lmax = 8;
    double amplitude = 1e-2;
    bool zero_momentum = false; // project the ell=1 modes out of the mass aspect
    bool with_matter = false;
};

AHExpansionData generate_random_bandlimited(const GridPtr& grid, const RandomDataParams& params);

// removes the ell=1 modes of the mass aspect by adjusting g_rr_m5
AHExpansionData project_zero_momentum(const AHExpansionData& d);

// ---------------------------------------------------------------------------
// file I/O (structured text, 17 significant digits, row-major latitude-then-
// longitude value arrays; unknown keys rejected)
// ---------------------------------------------------------------------------

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line)
        : std::runtime_error("parse error at line " + std::to_string(line) + ": " + msg), line_number(line) {}
    int line_number;
};

void write_data(const AHExpansionData& d, const std::string& path);
AHExpansionData read_data(const std::string& path);

void write_field(const ScalarField& f, const std::string& name, const std::string& path);
ScalarField read_field(const std::string& path, std::string* name_out = nullptr);

} // namespace ahq
