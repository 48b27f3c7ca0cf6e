#pragma once

#include <cstdint>
#include <memory>
#include <unordered_set>
#include <vector>

#include "fairdiv/interval.hpp"
#include "fairdiv/measure.hpp"

namespace fairdiv {

enum class QueryKind : int { Eval = 0, Cut = 1 };

struct LedgerSnapshot {
    std::vector<std::uint64_t> evals;  // per player
    std::vector<std::uint64_t> cuts;   // per player
    std::uint64_t eval_total = 0;
    std::uint64_t cut_total = 0;
    std::uint64_t total() const { return eval_total + cut_total; }
};

/// Exact accounting of distinct Robertson-Webb queries. The mediator retains
/// all answers, so a repeated identical query never increments a counter.
class QueryLedger {
public:
    explicit QueryLedger(int players);

    /// Records one query; returns true (and counts it) only when the
    /// canonicalized key has not been issued before.
    bool record(QueryKind kind, int player, double a, double b);

    /// Counts `count` queries the caller has proven pairwise distinct and
    /// previously unissued (the streamed refinement loops, where retaining
    /// every key would dominate memory). Keys are not remembered, so callers
    /// must never route the same queries through record() afterwards.
    void record_bulk(QueryKind kind, int player, std::uint64_t count);

    std::uint64_t eval_count(int player) const { return evals_.at(static_cast<std::size_t>(player)); }
    std::uint64_t cut_count(int player) const { return cuts_.at(static_cast<std::size_t>(player)); }
    std::uint64_t eval_total() const;
    std::uint64_t cut_total() const;
    std::uint64_t total() const { return eval_total() + cut_total(); }
    int players() const { return static_cast<int>(evals_.size()); }

    LedgerSnapshot snapshot() const;

private:
    std::vector<std::uint64_t> evals_;
    std::vector<std::uint64_t> cuts_;
    // Canonical key: (player, kind) plus the two argument bit patterns, with
    // -0.0 folded onto +0.0.
    struct FullKey {
        std::uint64_t meta, a, b;
        bool operator==(const FullKey&) const = default;
    };
    struct FullKeyHash {
        std::size_t operator()(const FullKey& k) const noexcept;
    };
    std::unordered_set<FullKey, FullKeyHash> dedup_;
};

/// A player's measure behind the two Robertson-Webb queries. All protocol
/// access goes through eval/cut; measure_direct() is reserved for auditors
/// and mediator-internal math with explicit ledger accounting.
class MeasureOracle {
public:
    MeasureOracle(int player, const PiecewiseConstantMeasure* measure,
                  std::shared_ptr<QueryLedger> ledger);

    /// mu_i([x,y]); requires 0 <= x <= y <= 1.
    double eval(double x, double y);

    /// Smallest y in [x,1] with mu_i([x,y]) = a.
    double cut(double x, double a);

    /// One eval per interval of a normalized piece set.
    double eval_pieces(const PieceSet& pieces);

    /// K-quantile points of w: y_k = cut(w.lo, k*mu_i(w)/K), k = 1..K-1.
    /// Issues one eval for mu_i(w) plus K-1 cut queries; empty when mu_i(w)=0.
    std::vector<double> quantile_cuts(const Interval& w, long K);

    int player() const { return player_; }
    const PiecewiseConstantMeasure& measure_direct() const { return *measure_; }
    QueryLedger& ledger() { return *ledger_; }
    const std::shared_ptr<QueryLedger>& ledger_ptr() const { return ledger_; }

private:
    int player_;
    const PiecewiseConstantMeasure* measure_;
    std::shared_ptr<QueryLedger> ledger_;
};

}  // namespace fairdiv
