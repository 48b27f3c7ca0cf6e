#include "fairdiv/measure.hpp"

#include <algorithm>
#include <cmath>

#include "fairdiv/errors.hpp"

namespace fairdiv {

namespace {

void check_shape(const std::vector<double>& bp, const std::vector<double>& dens) {
    if (bp.size() < 2 || dens.size() + 1 != bp.size())
        throw DomainError("measure needs B+1 breakpoints for B density cells");
    if (bp.front() != 0.0 || bp.back() != 1.0)
        throw DomainError("measure breakpoints must span [0,1]");
    for (std::size_t i = 0; i + 1 < bp.size(); ++i)
        if (!(bp[i] < bp[i + 1])) throw DomainError("measure breakpoints must be strictly increasing");
    for (double d : dens)
        if (!std::isfinite(d) || d < 0.0) throw DomainError("densities must be finite and non-negative");
}

std::vector<double> prefix_of(const std::vector<double>& bp, const std::vector<double>& dens) {
    std::vector<double> prefix(bp.size());
    prefix[0] = 0.0;
    for (std::size_t i = 0; i < dens.size(); ++i)
        prefix[i + 1] = prefix[i] + dens[i] * (bp[i + 1] - bp[i]);
    return prefix;
}

}  // namespace

PiecewiseConstantMeasure::PiecewiseConstantMeasure(std::vector<double> breakpoints,
                                                   std::vector<double> densities, double mass_tol)
    : breakpoints_(std::move(breakpoints)), densities_(std::move(densities)) {
    check_shape(breakpoints_, densities_);
    prefix_ = prefix_of(breakpoints_, densities_);
    if (std::abs(prefix_.back() - 1.0) > mass_tol)
        throw DomainError("measure total mass differs from 1 beyond tolerance");
}

PiecewiseConstantMeasure PiecewiseConstantMeasure::renormalized(std::vector<double> breakpoints,
                                                                std::vector<double> densities,
                                                                double max_dev) {
    check_shape(breakpoints, densities);
    const std::vector<double> prefix = prefix_of(breakpoints, densities);
    const double total = prefix.back();
    if (std::abs(total - 1.0) > max_dev)
        throw DomainError("measure total mass off by more than the loader tolerance");
    if (total != 1.0)
        for (double& d : densities) d /= total;
    return PiecewiseConstantMeasure(std::move(breakpoints), std::move(densities), 1e-12);
}

PiecewiseConstantMeasure PiecewiseConstantMeasure::uniform() {
    return PiecewiseConstantMeasure({0.0, 1.0}, {1.0});
}

double PiecewiseConstantMeasure::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return prefix_.back();
    // First breakpoint strictly greater than x; x lies in cell k-1.
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - breakpoints_.begin());
    return prefix_[k - 1] + densities_[k - 1] * (x - breakpoints_[k - 1]);
}

double PiecewiseConstantMeasure::mass(double x, double y) const {
    if (!(x >= 0.0) || !(y <= 1.0) || !(x <= y))
        throw DomainError("mass query needs 0 <= x <= y <= 1");
    return cdf(y) - cdf(x);
}

double PiecewiseConstantMeasure::leftmost_point(double target) const {
    if (target <= 0.0) return 0.0;
    if (target >= prefix_.back()) target = prefix_.back();
    // First prefix >= target; the crossing cell k-1 has positive density since
    // prefix[k-1] < target <= prefix[k].
    const auto it = std::lower_bound(prefix_.begin(), prefix_.end(), target);
    const std::size_t k = static_cast<std::size_t>(it - prefix_.begin());
    if (k == 0) return breakpoints_[0];
    const double y = breakpoints_[k - 1] + (target - prefix_[k - 1]) / densities_[k - 1];
    return std::min(y, breakpoints_[k]);
}

double PiecewiseConstantMeasure::leftmost_cut(double x, double a) const {
    if (!(x >= 0.0) || !(x <= 1.0)) throw DomainError("cut origin outside [0,1]");
    if (!(a >= 0.0)) throw DomainError("cut mass must be non-negative");
    const double fx = cdf(x);
    const double remaining = prefix_.back() - fx;
    if (a > remaining + 1e-12) throw InsufficientMass("requested mass exceeds mu([x,1])");
    const double target = std::min(fx + a, prefix_.back());
    const double y = leftmost_point(target);
    return std::clamp(y < x ? x : y, x, 1.0);
}

}  // namespace fairdiv
