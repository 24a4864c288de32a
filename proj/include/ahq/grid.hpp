#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

namespace ahq {

// Gauss-Legendre colatitude nodes x equispaced longitudes. nlat = L+1 rows at
// theta_j = acos(x_j) with x_j the roots of P_{L+1}, so no node sits on a pole
// and the quadrature integrates cos(theta)-polynomials of degree <= 2L+1
// exactly. nlon = 2L+2 columns resolve azimuthal orders |m| <= L without
// aliasing in products of two band-limited fields. Node and basis tables are
// kept in extended precision: the transforms divide by eigenvalues up to
// L(L+1), which amplifies any table rounding.
class SphereGrid {
public:
    explicit SphereGrid(int band_limit);

    int band_limit() const { return band_limit_; }
    int nlat() const { return nlat_; }
    int nlon() const { return nlon_; }
    int size() const { return nlat_ * nlon_; }

    double theta(int j) const { return static_cast<double>(theta_[j]); }
    double cos_theta(int j) const { return static_cast<double>(x_[j]); }
    double sin_theta(int j) const { return static_cast<double>(sin_theta_[j]); }
    double phi(int k) const { return static_cast<double>(phi_[k]); }

    // full quadrature weight of one grid node in row j (includes 2*pi/nlon)
    double node_weight(int j) const { return static_cast<double>(weight_[j]); }

    long double cos_theta_l(int j) const { return x_[j]; }
    long double sin_theta_l(int j) const { return sin_theta_[j]; }
    long double node_weight_l(int j) const { return weight_[j]; }
    long double phi_l(int k) const { return phi_[k]; }

    // number of real harmonic modes (ell,m), 0 <= ell <= L, -ell <= m <= ell
    int n_modes() const { return (band_limit_ + 1) * (band_limit_ + 1); }
    static int mode_index(int ell, int m) { return ell * ell + ell + m; }

    // Orthonormalized associated Legendre values at row j, Condon-Shortley-free,
    // m >= 0. plm carries the 1/sqrt(4*pi) spherical normalization; the real
    // basis is Y_{l0} = plm, Y_{lm} = sqrt(2)*plm*cos(m phi),
    // Y_{l,-m} = sqrt(2)*plm*sin(m phi).
    long double plm(int ell, int m, int j) const { return plm_[tri(ell, m) * nlat_ + j]; }
    // d/dtheta of plm
    long double dplm(int ell, int m, int j) const { return dplm_[tri(ell, m) * nlat_ + j]; }
    // higher theta derivatives, from the associated Legendre equation
    long double d2plm(int ell, int m, int j) const;
    long double d3plm(int ell, int m, int j) const;

    int tri(int ell, int m) const { return ell * (ell + 1) / 2 + m; }

private:
    int band_limit_;
    int nlat_;
    int nlon_;
    std::vector<long double> x_, theta_, sin_theta_, weight_, phi_;
    std::vector<long double> plm_, dplm_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

GridPtr make_grid(int band_limit);

struct BandLimitMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ahq
