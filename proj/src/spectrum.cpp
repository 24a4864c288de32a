#include "ahq/spectrum.hpp"

#include <cmath>

namespace ahq {

double YlmSpectrum::l2_norm() const {
    double s = 0.0;
    for (double c : c_)
        s += c * c;
    return std::sqrt(s);
}

double YlmSpectrum::max_abs_low() const {
    double m = 0.0;
    for (int i = 0; i < 4 && i < static_cast<int>(c_.size()); ++i)
        m = std::max(m, std::abs(c_[i]));
    return m;
}

double YlmSpectrum::max_abs() const {
    double m = 0.0;
    for (double c : c_)
        m = std::max(m, std::abs(c));
    return m;
}

YlmSpectrum& YlmSpectrum::operator+=(const YlmSpectrum& o) {
    if (o.band_limit_ != band_limit_)
        throw BandLimitMismatch("spectrum band limits differ");
    for (size_t i = 0; i < c_.size(); ++i)
        c_[i] += o.c_[i];
    return *this;
}

YlmSpectrum& YlmSpectrum::operator*=(double s) {
    for (double& c : c_)
        c *= s;
    return *this;
}

} // namespace ahq
