#pragma once

#include "ahq/grid.hpp"

#include <array>
#include <vector>

namespace ahq {

namespace detail {
inline void check_same_grid(const GridPtr& a, const GridPtr& b) {
    if (a.get() != b.get() && (a->band_limit() != b->band_limit()))
        throw BandLimitMismatch("fields live on grids with different band limits");
}
} // namespace detail

// Scalar samples on a SphereGrid, row-major latitude-then-longitude.
class ScalarField {
public:
    explicit ScalarField(GridPtr grid, double fill = 0.0)
        : grid_(std::move(grid)), v_(static_cast<size_t>(grid_->size()), fill) {}

    const GridPtr& grid() const { return grid_; }
    double operator()(int j, int k) const { return v_[static_cast<size_t>(j) * grid_->nlon() + k]; }
    double& operator()(int j, int k) { return v_[static_cast<size_t>(j) * grid_->nlon() + k]; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(double s);

    friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
    friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
    friend ScalarField operator*(double s, ScalarField a) { return a *= s; }
    friend ScalarField operator*(ScalarField a, double s) { return a *= s; }

    double max_abs() const;
    bool all_finite() const;

private:
    GridPtr grid_;
    std::vector<double> v_;
};

ScalarField pointwise_product(const ScalarField& a, const ScalarField& b);

// One-form in the orthonormal frame (e_theta, e_phihat).
class OneFormField {
public:
    explicit OneFormField(GridPtr grid) : th_(grid), ph_(std::move(grid)) {}
    OneFormField(ScalarField th, ScalarField ph) : th_(std::move(th)), ph_(std::move(ph)) {
        detail::check_same_grid(th_.grid(), ph_.grid());
    }

    const GridPtr& grid() const { return th_.grid(); }
    const ScalarField& comp_theta() const { return th_; }
    const ScalarField& comp_phi() const { return ph_; }
    ScalarField& comp_theta() { return th_; }
    ScalarField& comp_phi() { return ph_; }

    OneFormField& operator+=(const OneFormField& o) {
        th_ += o.th_;
        ph_ += o.ph_;
        return *this;
    }
    OneFormField& operator*=(double s) {
        th_ *= s;
        ph_ *= s;
        return *this;
    }
    friend OneFormField operator+(OneFormField a, const OneFormField& b) { return a += b; }
    friend OneFormField operator*(double s, OneFormField a) { return a *= s; }

    double max_abs() const { return std::max(th_.max_abs(), ph_.max_abs()); }
    bool all_finite() const { return th_.all_finite() && ph_.all_finite(); }

private:
    ScalarField th_, ph_;
};

// Symmetric 2-tensor in the orthonormal frame; three stored components.
class SymTensorField {
public:
    explicit SymTensorField(GridPtr grid) : tt_(grid), tp_(grid), pp_(std::move(grid)) {}
    SymTensorField(ScalarField tt, ScalarField tp, ScalarField pp)
        : tt_(std::move(tt)), tp_(std::move(tp)), pp_(std::move(pp)) {
        detail::check_same_grid(tt_.grid(), tp_.grid());
        detail::check_same_grid(tt_.grid(), pp_.grid());
    }

    const GridPtr& grid() const { return tt_.grid(); }
    const ScalarField& comp_tt() const { return tt_; }
    const ScalarField& comp_tp() const { return tp_; }
    const ScalarField& comp_pp() const { return pp_; }
    ScalarField& comp_tt() { return tt_; }
    ScalarField& comp_tp() { return tp_; }
    ScalarField& comp_pp() { return pp_; }

    SymTensorField& operator+=(const SymTensorField& o) {
        tt_ += o.tt_;
        tp_ += o.tp_;
        pp_ += o.pp_;
        return *this;
    }
    SymTensorField& operator*=(double s) {
        tt_ *= s;
        tp_ *= s;
        pp_ *= s;
        return *this;
    }
    friend SymTensorField operator+(SymTensorField a, const SymTensorField& b) { return a += b; }
    friend SymTensorField operator*(double s, SymTensorField a) { return a *= s; }

    double max_abs() const { return std::max({tt_.max_abs(), tp_.max_abs(), pp_.max_abs()}); }
    bool all_finite() const { return tt_.all_finite() && tp_.all_finite() && pp_.all_finite(); }

private:
    ScalarField tt_, tp_, pp_;
};

} // namespace ahq
