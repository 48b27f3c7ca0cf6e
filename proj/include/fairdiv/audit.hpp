#pragma once

#include <vector>

#include "fairdiv/allocation.hpp"
#include "fairdiv/interval.hpp"
#include "fairdiv/measure.hpp"

namespace fairdiv {

/// Auditors integrate densities directly (non-query operations); the ledger
/// is never touched.

struct AuditRecord {
    bool pass = false;
    double worst_margin = 0.0;  // minimum slack over all audited constraints
};

struct SuperEnvyAudit {
    bool pass = false;
    double worst_margin = 0.0;
    double own_margin = 0.0;    // min_i mu_i(C_i) - 1/n
    double other_margin = 0.0;  // min_{i != j} 1/n - mu_i(C_j)
};

double piece_value(const PiecewiseConstantMeasure& m, const PieceSet& pieces);

/// Near-exact condition |mu_i(A_j) - ratios[j] mu_i(A)| < epsilon mu_i(A) for
/// every non-vacuous player; margins are relative to mu_i(A).
AuditRecord audit_near_exact(const std::vector<PiecewiseConstantMeasure>& measures,
                             const std::vector<PieceSet>& pieces,
                             const std::vector<double>& ratios, double epsilon);

/// mu_i(C_i) >= mu_i(C_j).
AuditRecord audit_envy_free(const std::vector<PiecewiseConstantMeasure>& measures,
                            const Allocation& allocation);

/// mu_i(C_i) > 1/n > mu_i(C_j), strict.
SuperEnvyAudit audit_super_envy_free(const std::vector<PiecewiseConstantMeasure>& measures,
                                     const Allocation& allocation);

/// mu_i(C_i) >= 1/n.
AuditRecord audit_proportional(const std::vector<PiecewiseConstantMeasure>& measures,
                               const Allocation& allocation);

}  // namespace fairdiv
