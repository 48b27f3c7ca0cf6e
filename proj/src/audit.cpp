#include "fairdiv/audit.hpp"

#include <algorithm>
#include <cmath>

#include "fairdiv/errors.hpp"

namespace fairdiv {

double piece_value(const PiecewiseConstantMeasure& m, const PieceSet& pieces) {
    double s = 0.0;
    for (const Interval& w : pieces.intervals()) s += m.mass(w.lo, w.hi);
    return s;
}

namespace {

// n x n table of mu_i(C_j).
std::vector<double> value_table(const std::vector<PiecewiseConstantMeasure>& measures,
                                const std::vector<PieceSet>& pieces) {
    const std::size_t n = measures.size();
    if (pieces.size() != n) throw DomainError("audit needs one piece set per measure");
    std::vector<double> v(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v[i * n + j] = piece_value(measures[i], pieces[j]);
    return v;
}

}  // namespace

AuditRecord audit_near_exact(const std::vector<PiecewiseConstantMeasure>& measures,
                             const std::vector<PieceSet>& pieces,
                             const std::vector<double>& ratios, double epsilon) {
    const std::size_t n = measures.size();
    if (pieces.size() != n || ratios.size() != n)
        throw DomainError("audit needs matching measures, pieces, and ratios");
    const std::vector<double> v = value_table(measures, pieces);
    double margin = epsilon;  // value when every constraint is vacuous
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) total += v[i * n + j];
        if (total == 0.0) continue;  // vacuous player, satisfied by convention
        for (std::size_t j = 0; j < n; ++j) {
            const double dev = std::abs(v[i * n + j] - ratios[j] * total) / total;
            margin = std::min(margin, epsilon - dev);
        }
    }
    return AuditRecord{margin > 0.0, margin};
}

AuditRecord audit_envy_free(const std::vector<PiecewiseConstantMeasure>& measures,
                            const Allocation& allocation) {
    const std::size_t n = measures.size();
    const std::vector<double> v = value_table(measures, allocation.pieces);
    double margin = 1.0;  // no pairs when n = 1
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            margin = std::min(margin, v[i * n + i] - v[i * n + j]);
        }
    return AuditRecord{margin >= 0.0, margin};
}

SuperEnvyAudit audit_super_envy_free(const std::vector<PiecewiseConstantMeasure>& measures,
                                     const Allocation& allocation) {
    const std::size_t n = measures.size();
    const std::vector<double> v = value_table(measures, allocation.pieces);
    SuperEnvyAudit out;
    if (n == 1) {  // no (i, j != i) constraints
        out.pass = true;
        out.own_margin = out.other_margin = out.worst_margin = 1.0;
        return out;
    }
    const double share = 1.0 / static_cast<double>(n);
    double own = 1.0, other = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        own = std::min(own, v[i * n + i] - share);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) other = std::min(other, share - v[i * n + j]);
    }
    out.own_margin = own;
    out.other_margin = other;
    out.worst_margin = std::min(own, other);
    out.pass = own > 0.0 && other > 0.0;
    return out;
}

AuditRecord audit_proportional(const std::vector<PiecewiseConstantMeasure>& measures,
                               const Allocation& allocation) {
    const std::size_t n = measures.size();
    const std::vector<double> v = value_table(measures, allocation.pieces);
    const double share = 1.0 / static_cast<double>(n);
    double margin = 1.0;
    for (std::size_t i = 0; i < n; ++i) margin = std::min(margin, v[i * n + i] - share);
    return AuditRecord{margin >= 0.0, margin};
}

}  // namespace fairdiv
