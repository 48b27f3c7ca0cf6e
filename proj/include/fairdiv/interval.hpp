#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fairdiv/errors.hpp"

namespace fairdiv {

/// Closed subinterval of the cake [0,1].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool valid() const {
        return std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && hi <= 1.0 && lo <= hi;
    }
};

inline void require_valid(const Interval& w) {
    if (!w.valid()) throw DomainError("interval outside [0,1] or lo > hi");
}

/// Finite union of intervals, kept normalized: sorted by lo, interiors pairwise
/// disjoint, touching neighbors merged, degenerate (zero-length) pieces dropped.
class PieceSet {
public:
    PieceSet() = default;
    explicit PieceSet(std::vector<Interval> intervals) { assign(std::move(intervals)); }

    void assign(std::vector<Interval> intervals) {
        for (const Interval& w : intervals) require_valid(w);
        std::sort(intervals.begin(), intervals.end(),
                  [](const Interval& a, const Interval& b) {
                      return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
                  });
        iv_.clear();
        for (const Interval& w : intervals) {
            if (w.hi <= w.lo) continue;
            if (!iv_.empty() && w.lo < iv_.back().hi)
                throw DomainError("piece set has overlapping interiors");
            if (!iv_.empty() && w.lo == iv_.back().hi)
                iv_.back().hi = w.hi;
            else
                iv_.push_back(w);
        }
    }

    const std::vector<Interval>& intervals() const { return iv_; }
    bool empty() const { return iv_.empty(); }
    std::size_t size() const { return iv_.size(); }

    double lebesgue() const {
        double s = 0.0;
        for (const Interval& w : iv_) s += w.length();
        return s;
    }

    /// Intersection with a single interval (used to split an allocation back
    /// into its per-cell sub-pieces when re-auditing offline).
    PieceSet clipped(const Interval& w) const {
        std::vector<Interval> out;
        for (const Interval& p : iv_) {
            const double lo = std::max(p.lo, w.lo);
            const double hi = std::min(p.hi, w.hi);
            if (lo < hi) out.push_back({lo, hi});
        }
        return PieceSet(std::move(out));
    }

private:
    std::vector<Interval> iv_;
};

}  // namespace fairdiv
