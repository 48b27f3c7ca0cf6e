#pragma once

#include <optional>
#include <vector>

#include "fairdiv/allocation.hpp"
#include "fairdiv/audit.hpp"
#include "fairdiv/matrix.hpp"
#include "fairdiv/near_exact.hpp"
#include "fairdiv/oracle.hpp"
#include "fairdiv/webb_math.hpp"

namespace fairdiv {

/// Raised when the witness matrix stays numerically singular after the one
/// jittered-partition retry; carries both witnesses for diagnosis. The
/// fallback protocol for linearly dependent measures is out of scope, and
/// under both random models this event has probability zero.
struct SingularWitnessMatrix : std::runtime_error {
    SingularWitnessMatrix(StochasticMatrix first_witness, double first_sigma,
                          std::optional<StochasticMatrix> retry_witness, double retry_sigma)
        : std::runtime_error("witness matrix singular (after retry)"),
          first(std::move(first_witness)),
          first_sigma_n(first_sigma),
          retry(std::move(retry_witness)),
          retry_sigma_n(retry_sigma) {}

    StochasticMatrix first;
    double first_sigma_n;
    std::optional<StochasticMatrix> retry;
    double retry_sigma_n;
};

struct ProtocolAudits {
    AuditRecord near_exact;  // aggregated over cells: worst relative margin
    AuditRecord envy_free;
    SuperEnvyAudit super_envy_free;
    AuditRecord proportional;
};

struct BoundsReport {
    double webb_bound = 0.0;         // n^5 (2+2 n^{3/2}) (1-tn)/(n-1)
    double sigma_bound = 0.0;        // n^7 max(1, 1/sigma_n)
    bool sigma_in_range = false;     // corollary stated for n >= 19
};

/// Full outcome of one protocol run.
struct WebbReport {
    int n = 0;
    std::vector<Interval> partition;
    StochasticMatrix witness{SquareMatrix::identity(1)};
    StochasticMatrix ratios{SquareMatrix::identity(1)};  // R = M^{-1} N
    double t = 0.0;
    double delta_value = 0.0;
    double sigma_n = 0.0;
    double epsilon = 0.0;
    EpsilonMode epsilon_mode = EpsilonMode::Fast;
    Allocation allocation;
    LedgerSnapshot queries;
    BoundsReport bounds;
    ProtocolAudits audits;
    std::vector<CellStats> cells;
    bool jitter_retry_used = false;
};

/// Webb's super envy-free construction on a given partition: n^2 witness
/// evals, M^{-1}, t, delta, N, R, then one near-exact division per cell in
/// the ratios of R's rows, assembling C_i from the i-th sub-pieces.
WebbReport webb_super_envy_free(std::vector<MeasureOracle>& oracles,
                                const std::vector<Interval>& partition,
                                const NearExactConfig& cfg);

/// Top-level algorithm: witness on the uniform grid; if singular, one seeded
/// jittered-partition retry; if still singular, SingularWitnessMatrix.
WebbReport envy_free(std::vector<MeasureOracle>& oracles, const NearExactConfig& cfg);

/// sigma_n / sigma_1 threshold defining the det(M) = 0 branch.
inline constexpr double kSingularSigmaRatio = 1e-12;

}  // namespace fairdiv
