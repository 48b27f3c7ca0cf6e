#include "fairdiv/near_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fairdiv/errors.hpp"

namespace fairdiv {

namespace {

long required_k(int n, double epsilon) {
    const double raw = std::ceil(std::log(4.0 * n * n) / (2.0 * epsilon * epsilon));
    if (!(raw < 9.0e15)) return std::numeric_limits<long>::max() / 4;
    return std::max<long>(n, static_cast<long>(raw));
}

// Same arithmetic as MeasureOracle::quantile_cuts, so doubled-K rounds
// reproduce the earlier points bit-exactly.
void quantile_points(const PiecewiseConstantMeasure& m, const Interval& w, double mass, long K,
                     std::vector<double>& out) {
    out.clear();
    out.reserve(static_cast<std::size_t>(K - 1));
    for (long k = 1; k < K; ++k) {
        const double a = (static_cast<double>(k) * mass) / static_cast<double>(K);
        out.push_back(std::min(m.leftmost_cut(w.lo, a), w.hi));
    }
}

// Pieces of `bounds` whose endpoints were already adjacent in `prev`.
long count_surviving_pieces(const std::vector<double>& bounds, const std::vector<double>& prev) {
    long survivors = 0;
    std::size_t q = 0;
    for (std::size_t l = 0; l + 1 < bounds.size(); ++l) {
        while (q < prev.size() && prev[q] < bounds[l]) ++q;
        if (q + 1 < prev.size() && prev[q] == bounds[l] && prev[q + 1] == bounds[l + 1]) ++survivors;
    }
    return survivors;
}

}  // namespace

std::vector<PieceSet> near_exact_divide(const Interval& w, const std::vector<double>& ratios,
                                        double epsilon, std::vector<MeasureOracle>& oracles,
                                        const NearExactConfig& cfg, CellStats* stats_out) {
    require_valid(w);
    const std::size_t np = oracles.size();
    const int n = static_cast<int>(np);
    if (n < 1) throw DomainError("near_exact_divide needs at least one player");
    if (ratios.size() != np) throw DomainError("one ratio per player is required");
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
    if (cfg.retry_cap < 1) throw DomainError("retry_cap must be >= 1");
    if (!cfg.rng) throw DomainError("near-exact config needs an rng stream");

    double ratio_sum = 0.0;
    for (double r : ratios) {
        if (!(r >= -1e-12)) throw DomainError("ratios must be non-negative");
        ratio_sum += r;
    }
    if (std::abs(ratio_sum - 1.0) > 1e-9) throw DomainError("ratios must sum to 1");

    CellStats scratch;
    CellStats& st = stats_out ? *stats_out : scratch;
    const int cell_idx = st.cell;
    st = CellStats{};
    st.cell = cell_idx;

    std::vector<PieceSet> result(np);

    // Degenerate 0/1 row: the unit bucket takes the whole cell, skipping the
    // refinement and its queries.
    for (std::size_t j = 0; j < np; ++j) {
        if (ratios[j] >= 1.0 - 1e-12) {
            if (w.length() > 0.0) result[j] = PieceSet({w});
            st.shortcut = true;
            st.pieces = 1;
            return result;
        }
    }

    QueryLedger& ledger = oracles.front().ledger();
    const std::uint64_t evals0 = ledger.eval_total();
    const std::uint64_t cuts0 = ledger.cut_total();

    // (1) one eval per player; a repeat of the witness eval is free.
    std::vector<double> masses(np);
    std::vector<char> vacuous(np, 0);
    int n_vacuous = 0;
    for (std::size_t i = 0; i < np; ++i) {
        masses[i] = oracles[i].eval(w.lo, w.hi);
        if (masses[i] == 0.0) {
            vacuous[i] = 1;
            ++n_vacuous;
        }
    }
    st.vacuous_players = n_vacuous;

    std::vector<double> alpha(ratios);
    for (double& a : alpha) a = std::max(a, 0.0);

    if (n_vacuous == n) {
        // No player values w; every constraint is vacuous. Keep the partition
        // property by handing the cell to the heaviest bucket.
        std::size_t argmax = 0;
        for (std::size_t j = 1; j < np; ++j)
            if (alpha[j] > alpha[argmax]) argmax = j;
        if (w.length() > 0.0) result[argmax] = PieceSet({w});
        st.pieces = 1;
        st.new_eval_queries = ledger.eval_total() - evals0;
        return result;
    }

    // (2) refinement depth from Hoeffding + union bound over <= n^2 constraints.
    long K = required_k(n, epsilon);
    if (K > cfg.k_cap)
        throw ResourceError("near-exact refinement needs K = " + std::to_string(K) +
                            " beyond the cap " + std::to_string(cfg.k_cap));
    st.k_first = K;

    // Cumulative assignment law; buckets of ratio zero can never win.
    std::vector<double> cum(np, 0.0);
    {
        double c = 0.0;
        std::size_t last_positive = 0;
        for (std::size_t j = 0; j < np; ++j) {
            c += alpha[j];
            cum[j] = c;
            if (alpha[j] > 0.0) last_positive = j;
        }
        for (std::size_t j = last_positive; j < np; ++j) cum[j] = 1.0;
    }

    std::vector<std::vector<double>> pts(np);
    std::vector<double> bounds, prev_bounds;
    std::vector<std::uint16_t> bucket;
    std::vector<double> sums(np * np);
    std::vector<double> prev_cdf(np);
    long prev_k = 0;

    for (int round = 0;; ++round) {
        for (std::size_t i = 0; i < np; ++i) {
            if (vacuous[i]) continue;
            quantile_points(oracles[i].measure_direct(), w, masses[i], K, pts[i]);
            ledger.record_bulk(QueryKind::Cut, oracles[i].player(),
                               static_cast<std::uint64_t>(round == 0 ? K - 1 : K - prev_k));
        }

        // (3) union of all cut points -> atomic pieces.
        bounds.clear();
        bounds.push_back(w.lo);
        for (std::size_t i = 0; i < np; ++i)
            bounds.insert(bounds.end(), pts[i].begin(), pts[i].end());
        bounds.push_back(w.hi);
        std::sort(bounds.begin(), bounds.end());
        bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
        const long m = static_cast<long>(bounds.size()) - 1;

        // (4) ledger cost of streaming every piece past every player. Pieces
        // already evaluated in the previous round (both endpoints adjacent
        // there) are repeats; with m == 1 the lone piece is w itself.
        long fresh = m;
        if (round == 0) {
            if (m == 1) fresh = 0;
        } else {
            fresh = m - count_surviving_pieces(bounds, prev_bounds);
        }
        if (fresh > 0)
            for (std::size_t i = 0; i < np; ++i)
                ledger.record_bulk(QueryKind::Eval, oracles[i].player(),
                                   static_cast<std::uint64_t>(fresh));

        for (int attempt = 0; attempt < cfg.retry_cap; ++attempt) {
            ++st.attempts;
            // (5) independent seeded bucket per piece, streaming the sums.
            std::fill(sums.begin(), sums.end(), 0.0);
            bucket.assign(static_cast<std::size_t>(m), 0);
            std::vector<CdfCursor> cur;
            cur.reserve(np);
            for (std::size_t i = 0; i < np; ++i) {
                cur.emplace_back(oracles[i].measure_direct());
                prev_cdf[i] = cur[i].cdf_at(bounds[0]);
            }
            for (long p = 0; p < m; ++p) {
                const double u = cfg.rng->uniform01();
                const std::size_t b = static_cast<std::size_t>(
                    std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
                bucket[static_cast<std::size_t>(p)] = static_cast<std::uint16_t>(b);
                const double edge = bounds[static_cast<std::size_t>(p) + 1];
                for (std::size_t i = 0; i < np; ++i) {
                    const double c = cur[i].cdf_at(edge);
                    sums[i * np + b] += c - prev_cdf[i];
                    prev_cdf[i] = c;
                }
            }

            // (6) mediator verification against already-queried values; the
            // tiny slack keeps independent re-integration strictly inside.
            bool ok = true;
            for (std::size_t i = 0; i < np && ok; ++i) {
                if (vacuous[i]) continue;
                const double budget = epsilon * masses[i] * (1.0 - 1e-7);
                for (std::size_t j = 0; j < np; ++j) {
                    if (!(std::abs(sums[i * np + j] - ratios[j] * masses[i]) < budget)) {
                        ok = false;
                        break;
                    }
                }
            }
            if (!ok) continue;

            std::vector<std::vector<Interval>> runs(np);
            for (long p = 0; p < m; ++p) {
                const std::size_t b = bucket[static_cast<std::size_t>(p)];
                const Interval piece{bounds[static_cast<std::size_t>(p)],
                                     bounds[static_cast<std::size_t>(p) + 1]};
                if (!runs[b].empty() && runs[b].back().hi == piece.lo)
                    runs[b].back().hi = piece.hi;
                else
                    runs[b].push_back(piece);
            }
            for (std::size_t j = 0; j < np; ++j) result[j] = PieceSet(std::move(runs[j]));

            st.k_final = K;
            st.pieces = m;
            st.new_eval_queries = ledger.eval_total() - evals0;
            st.new_cut_queries = ledger.cut_total() - cuts0;
            return result;
        }

        if (K > cfg.k_cap / 2)
            throw ResourceError("near-exact refinement exhausted the K cap at K = " +
                                std::to_string(K));
        prev_bounds = bounds;
        prev_k = K;
        K *= 2;
        ++st.doublings;
    }
}

}  // namespace fairdiv
