#include "ahq/grid.hpp"

#include <cmath>

namespace ahq {

namespace {

// Legendre P_n(x) and its derivative by the three-term recurrence.
void legendre_pair(int n, long double x, long double& p, long double& dp) {
    long double p0 = 1.0L, p1 = x;
    for (int k = 2; k <= n; ++k) {
        long double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    p = (n == 0) ? p0 : p1;
    if (n == 0) {
        dp = 0.0L;
        return;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0L);
}

} // namespace

SphereGrid::SphereGrid(int band_limit) : band_limit_(band_limit) {
    if (band_limit < 1)
        throw std::invalid_argument("SphereGrid: band limit must be positive");
    nlat_ = band_limit_ + 1;
    nlon_ = 2 * band_limit_ + 2;

    x_.resize(nlat_);
    theta_.resize(nlat_);
    sin_theta_.resize(nlat_);
    weight_.resize(nlat_);
    phi_.resize(nlon_);

    const long double pi = acosl(-1.0L);
    const int n = nlat_;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton iteration from the Chebyshev-like initial guess
        long double x = cosl(pi * (i + 0.75L) / (n + 0.5L));
        long double p, dp;
        for (int it = 0; it < 100; ++it) {
            legendre_pair(n, x, p, dp);
            long double dx = -p / dp;
            x += dx;
            if (fabsl(dx) < 1e-19L)
                break;
        }
        legendre_pair(n, x, p, dp);
        long double w = 2.0L / ((1.0L - x * x) * dp * dp);
        // store descending in x so theta increases with the row index
        x_[n - 1 - i] = -x;
        x_[i] = x;
        weight_[i] = weight_[n - 1 - i] = w;
    }
    const long double lon_weight = 2.0L * pi / nlon_;
    for (int j = 0; j < nlat_; ++j) {
        theta_[j] = acosl(x_[j]);
        sin_theta_[j] = sqrtl(1.0L - x_[j] * x_[j]);
        weight_[j] *= lon_weight;
    }
    for (int k = 0; k < nlon_; ++k)
        phi_[k] = 2.0L * pi * k / nlon_;

    // associated Legendre tables, orthonormalized, no Condon-Shortley sign
    const int npairs = (band_limit_ + 1) * (band_limit_ + 2) / 2;
    plm_.assign(static_cast<size_t>(npairs) * nlat_, 0.0L);
    dplm_.assign(static_cast<size_t>(npairs) * nlat_, 0.0L);

    auto P = [&](int ell, int m) -> long double* { return plm_.data() + static_cast<size_t>(tri(ell, m)) * nlat_; };

    const long double p00 = sqrtl(1.0L / (4.0L * pi));
    for (int j = 0; j < nlat_; ++j)
        P(0, 0)[j] = p00;
    for (int m = 1; m <= band_limit_; ++m) {
        const long double c = sqrtl((2.0L * m + 1.0L) / (2.0L * m));
        for (int j = 0; j < nlat_; ++j)
            P(m, m)[j] = c * sin_theta_[j] * P(m - 1, m - 1)[j];
    }
    for (int m = 0; m < band_limit_; ++m) {
        const long double c = sqrtl(2.0L * m + 3.0L);
        for (int j = 0; j < nlat_; ++j)
            P(m + 1, m)[j] = c * x_[j] * P(m, m)[j];
    }
    for (int m = 0; m <= band_limit_; ++m) {
        for (int ell = m + 2; ell <= band_limit_; ++ell) {
            const long double a = sqrtl((4.0L * ell * ell - 1.0L) / (static_cast<long double>(ell) * ell - m * m));
            const long double b = sqrtl((static_cast<long double>(ell - 1) * (ell - 1) - m * m) /
                                        (4.0L * (ell - 1.0L) * (ell - 1.0L) - 1.0L));
            for (int j = 0; j < nlat_; ++j)
                P(ell, m)[j] = a * (x_[j] * P(ell - 1, m)[j] - b * P(ell - 2, m)[j]);
        }
    }

    // d/dtheta via  dP_lm = (l x P_lm - e_lm P_{l-1,m}) / sin(theta),
    // e_lm = sqrt((l^2-m^2)(2l+1)/(2l-1))
    for (int m = 0; m <= band_limit_; ++m) {
        for (int ell = m; ell <= band_limit_; ++ell) {
            long double* d = dplm_.data() + static_cast<size_t>(tri(ell, m)) * nlat_;
            if (ell == 0)
                continue;
            const long double e =
                sqrtl((static_cast<long double>(ell) * ell - m * m) * (2.0L * ell + 1.0L) / (2.0L * ell - 1.0L));
            const long double* plo = (ell - 1 >= m) ? P(ell - 1, m) : nullptr;
            for (int j = 0; j < nlat_; ++j) {
                long double lower = plo ? plo[j] : 0.0L;
                d[j] = (ell * x_[j] * P(ell, m)[j] - e * lower) / sin_theta_[j];
            }
        }
    }
}

long double SphereGrid::d2plm(int ell, int m, int j) const {
    const long double s = sin_theta_[j];
    const long double cot = x_[j] / s;
    const long double lam = static_cast<long double>(ell) * (ell + 1);
    return -cot * dplm(ell, m, j) - (lam - static_cast<long double>(m) * m / (s * s)) * plm(ell, m, j);
}

long double SphereGrid::d3plm(int ell, int m, int j) const {
    const long double s = sin_theta_[j];
    const long double c = x_[j];
    const long double cot = c / s;
    const long double lam = static_cast<long double>(ell) * (ell + 1);
    const long double m2 = static_cast<long double>(m) * m;
    return (1.0L / (s * s) + m2 / (s * s) - lam) * dplm(ell, m, j) - cot * d2plm(ell, m, j) -
           (2.0L * m2 * c / (s * s * s)) * plm(ell, m, j);
}

GridPtr make_grid(int band_limit) { return std::make_shared<const SphereGrid>(band_limit); }

} // namespace ahq
