#pragma once

#include <cstddef>
#include <vector>

#include "fairdiv/interval.hpp"

namespace fairdiv {

/// Absolutely continuous measure on [0,1] with a piecewise-constant density.
/// Masses are kept as prefix sums at the breakpoints, so interval values and
/// cut points are closed-form (no root finding).
class PiecewiseConstantMeasure {
public:
    /// breakpoints: 0 = b0 < b1 < ... < bB = 1, densities: B non-negative reals.
    /// Total mass must equal 1 within `mass_tol`.
    PiecewiseConstantMeasure(std::vector<double> breakpoints, std::vector<double> densities,
                             double mass_tol = 1e-12);

    /// Loader-style construction: rescales the density so the total mass is 1,
    /// rejecting inputs whose raw total deviates by more than `max_dev`.
    static PiecewiseConstantMeasure renormalized(std::vector<double> breakpoints,
                                                 std::vector<double> densities,
                                                 double max_dev = 1e-9);

    static PiecewiseConstantMeasure uniform();

    /// Cumulative mass of [0,x].
    double cdf(double x) const;

    /// mu([x,y]); requires 0 <= x <= y <= 1.
    double mass(double x, double y) const;

    /// Smallest y in [x,1] with mu([x,y]) = a (left endpoint of any zero-density
    /// plateau). Throws InsufficientMass if a exceeds mu([x,1]) + 1e-12.
    double leftmost_cut(double x, double a) const;

    /// Smallest y with cdf(y) >= target; the generalized inverse of the CDF.
    double leftmost_point(double target) const;

    double total() const { return prefix_.back(); }
    std::size_t cells() const { return densities_.size(); }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& densities() const { return densities_; }
    const std::vector<double>& prefix_masses() const { return prefix_; }

private:
    std::vector<double> breakpoints_;
    std::vector<double> densities_;
    std::vector<double> prefix_;
};

/// Left-to-right CDF evaluator; amortizes the cell lookup when queried at
/// nondecreasing positions (the near-exact streaming loop).
class CdfCursor {
public:
    explicit CdfCursor(const PiecewiseConstantMeasure& m) : m_(&m) {}

    double cdf_at(double x) {
        const auto& bp = m_->breakpoints();
        while (cell_ + 1 < bp.size() - 1 && bp[cell_ + 1] <= x) ++cell_;
        return m_->prefix_masses()[cell_] + m_->densities()[cell_] * (x - bp[cell_]);
    }

private:
    const PiecewiseConstantMeasure* m_;
    std::size_t cell_ = 0;
};

}  // namespace fairdiv
