#pragma once

#include "ahq/grid.hpp"

#include <vector>

namespace ahq {

// Coefficients in the real orthonormal harmonic basis, packed as
// index = ell^2 + ell + m.
class YlmSpectrum {
public:
    explicit YlmSpectrum(int band_limit)
        : band_limit_(band_limit), c_(static_cast<size_t>((band_limit + 1) * (band_limit + 1)), 0.0) {}

    int band_limit() const { return band_limit_; }
    double operator()(int ell, int m) const { return c_[SphereGrid::mode_index(ell, m)]; }
    double& operator()(int ell, int m) { return c_[SphereGrid::mode_index(ell, m)]; }
    const std::vector<double>& coeffs() const { return c_; }
    std::vector<double>& coeffs() { return c_; }

    // multiply each degree-ell coefficient by func(ell)
    template <typename F>
    YlmSpectrum& scale_by_degree(F&& func) {
        for (int ell = 0; ell <= band_limit_; ++ell) {
            const double s = func(ell);
            for (int m = -ell; m <= ell; ++m)
                c_[SphereGrid::mode_index(ell, m)] *= s;
        }
        return *this;
    }

    double l2_norm() const;
    // largest |coefficient| with ell <= 1 and with ell >= 2, respectively
    double max_abs_low() const;
    double max_abs() const;

    YlmSpectrum& operator+=(const YlmSpectrum& o);
    YlmSpectrum& operator*=(double s);
    friend YlmSpectrum operator+(YlmSpectrum a, const YlmSpectrum& b) { return a += b; }
    friend YlmSpectrum operator*(double s, YlmSpectrum a) { return a *= s; }

private:
    int band_limit_;
    std::vector<double> c_;
};

} // namespace ahq
