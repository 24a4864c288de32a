#include "ahq/fields.hpp"

#include <cmath>

namespace ahq {

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    detail::check_same_grid(grid_, o.grid_);
    for (size_t i = 0; i < v_.size(); ++i)
        v_[i] += o.v_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    detail::check_same_grid(grid_, o.grid_);
    for (size_t i = 0; i < v_.size(); ++i)
        v_[i] -= o.v_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& x : v_)
        x *= s;
    return *this;
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double x : v_)
        m = std::max(m, std::abs(x));
    return m;
}

bool ScalarField::all_finite() const {
    for (double x : v_)
        if (!std::isfinite(x))
            return false;
    return true;
}

ScalarField pointwise_product(const ScalarField& a, const ScalarField& b) {
    detail::check_same_grid(a.grid(), b.grid());
    ScalarField r = a;
    for (size_t i = 0; i < r.values().size(); ++i)
        r.values()[i] *= b.values()[i];
    return r;
}

} // namespace ahq
