#pragma once

#include <cstdint>
#include <vector>

#include "fairdiv/interval.hpp"
#include "fairdiv/oracle.hpp"
#include "fairdiv/rng.hpp"

namespace fairdiv {

enum class EpsilonMode { Paper, Fast };

struct NearExactConfig {
    EpsilonMode epsilon_mode = EpsilonMode::Fast;
    int retry_cap = 64;      // assignment redraws before K doubles
    long k_cap = 400000;     // refinement ceiling; exceeding it censors the run
    Rng* rng = nullptr;      // mediator's assignment stream (required)
};

/// Per-cell trace of one near_exact_divide call; enough to recount the
/// ledger increments independently.
struct CellStats {
    int cell = -1;
    long k_first = 0;
    long k_final = 0;
    int doublings = 0;
    long attempts = 0;  // assignment draws over all rounds
    long pieces = 0;    // atomic pieces in the accepted round
    int vacuous_players = 0;
    bool shortcut = false;  // degenerate 0/1 ratios, no refinement issued
    std::uint64_t new_eval_queries = 0;
    std::uint64_t new_cut_queries = 0;
};

/// Divides w into n piece sets, near-exact in the given ratios: for every
/// player with mu_i(w) > 0 and every bucket j,
///     |mu_i(A_j) - ratios[j] * mu_i(w)| < epsilon * mu_i(w).
/// Quantile-union refinement with randomized bucket assignment: K quantile
/// cuts per non-vacuous player bound every atomic piece by mu_i(w)/K, a
/// seeded independent assignment is verified by the mediator against values
/// it has already queried (free), failed draws are redrawn, and after
/// cfg.retry_cap failures K doubles. Hoeffding plus a union bound keeps the
/// per-attempt failure probability at most 1/2.
std::vector<PieceSet> near_exact_divide(const Interval& w, const std::vector<double>& ratios,
                                        double epsilon, std::vector<MeasureOracle>& oracles,
                                        const NearExactConfig& cfg, CellStats* stats = nullptr);

}  // namespace fairdiv
