#include "fairdiv/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fairdiv/errors.hpp"
#include "fairdiv/linalg.hpp"
#include "fairdiv/sampling.hpp"

namespace fairdiv {

void Allocation::validate(double tol) const {
    std::vector<Interval> all;
    for (const PieceSet& ps : pieces)
        all.insert(all.end(), ps.intervals().begin(), ps.intervals().end());
    std::sort(all.begin(), all.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    double covered = 0.0;
    for (std::size_t k = 0; k < all.size(); ++k) {
        if (k > 0 && all[k].lo < all[k - 1].hi)
            throw InvariantViolation("allocation pieces overlap in the interior");
        covered += all[k].length();
    }
    if (std::abs(covered - 1.0) > tol)
        throw InvariantViolation("allocation does not cover [0,1]");
}

namespace {

StochasticMatrix build_witness(std::vector<MeasureOracle>& oracles,
                               const std::vector<Interval>& partition) {
    const int n = static_cast<int>(oracles.size());
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m.at(i, j) = oracles[static_cast<std::size_t>(i)].eval(
                partition[static_cast<std::size_t>(j)].lo, partition[static_cast<std::size_t>(j)].hi);
    return StochasticMatrix(std::move(m));
}

std::vector<PiecewiseConstantMeasure> gather_measures(const std::vector<MeasureOracle>& oracles) {
    std::vector<PiecewiseConstantMeasure> out;
    out.reserve(oracles.size());
    for (const MeasureOracle& o : oracles) out.push_back(o.measure_direct());
    return out;
}

WebbReport run_single_player(std::vector<MeasureOracle>& oracles,
                             const std::vector<Interval>& partition) {
    WebbReport rep;
    rep.n = 1;
    rep.partition = partition;
    SquareMatrix w(1);
    w.at(0, 0) = oracles[0].eval(partition[0].lo, partition[0].hi);
    rep.witness = StochasticMatrix(std::move(w));
    rep.ratios = StochasticMatrix(SquareMatrix::identity(1));
    rep.sigma_n = rep.witness.at(0, 0);
    rep.allocation.pieces = {PieceSet({Interval{0.0, 1.0}})};
    rep.allocation.validate();
    const std::vector<PiecewiseConstantMeasure> measures = gather_measures(oracles);
    rep.audits.near_exact = {true, 0.0};  // no ratios to miss with one player
    rep.audits.envy_free = audit_envy_free(measures, rep.allocation);
    rep.audits.super_envy_free = audit_super_envy_free(measures, rep.allocation);
    rep.audits.proportional = audit_proportional(measures, rep.allocation);
    const SigmaQueryBound sb = sigma_query_bound(1, rep.sigma_n);
    rep.bounds = {0.0, sb.value, sb.in_range};
    rep.queries = oracles.front().ledger().snapshot();
    return rep;
}

WebbReport run_webb(std::vector<MeasureOracle>& oracles, const std::vector<Interval>& partition,
                    StochasticMatrix witness, double sigma_n_value, bool jittered,
                    const NearExactConfig& cfg) {
    const int n = static_cast<int>(oracles.size());
    WebbReport rep;
    rep.n = n;
    rep.partition = partition;
    rep.witness = std::move(witness);
    rep.sigma_n = sigma_n_value;
    rep.epsilon_mode = cfg.epsilon_mode;
    rep.jitter_retry_used = jittered;

    const SquareMatrix m_inv = invert(rep.witness.base());
    rep.t = min_entry(m_inv);
    rep.delta_value = delta(n, rep.t);
    const StochasticMatrix n_mat = target_matrix(n, rep.delta_value);
    rep.ratios = ratio_matrix(m_inv, n_mat);
    rep.epsilon = cfg.epsilon_mode == EpsilonMode::Paper
                      ? rep.delta_value / (static_cast<double>(n) * n)
                      : rep.delta_value / (2.0 * (n - 1));

    const std::vector<PiecewiseConstantMeasure> measures = gather_measures(oracles);
    std::vector<std::vector<Interval>> assembled(static_cast<std::size_t>(n));
    bool ne_pass = true;
    double ne_margin = std::numeric_limits<double>::infinity();
    rep.cells.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        std::vector<double> row(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) row[static_cast<std::size_t>(k)] = rep.ratios.at(j, k);
        CellStats st;
        st.cell = j;
        const std::vector<PieceSet> sub =
            near_exact_divide(partition[static_cast<std::size_t>(j)], row, rep.epsilon, oracles, cfg, &st);
        rep.cells.push_back(st);
        const AuditRecord cell_audit = audit_near_exact(measures, sub, row, rep.epsilon);
        ne_pass = ne_pass && cell_audit.pass;
        ne_margin = std::min(ne_margin, cell_audit.worst_margin);
        for (int k = 0; k < n; ++k) {
            const auto& iv = sub[static_cast<std::size_t>(k)].intervals();
            assembled[static_cast<std::size_t>(k)].insert(assembled[static_cast<std::size_t>(k)].end(),
                                                          iv.begin(), iv.end());
        }
    }
    rep.audits.near_exact = {ne_pass, ne_margin};

    rep.allocation.pieces.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        rep.allocation.pieces.emplace_back(std::move(assembled[static_cast<std::size_t>(k)]));
    rep.allocation.validate();

    rep.audits.envy_free = audit_envy_free(measures, rep.allocation);
    rep.audits.super_envy_free = audit_super_envy_free(measures, rep.allocation);
    rep.audits.proportional = audit_proportional(measures, rep.allocation);

    rep.bounds.webb_bound = webb_query_bound(n, rep.t);
    const SigmaQueryBound sb = sigma_query_bound(n, rep.sigma_n);
    rep.bounds.sigma_bound = sb.value;
    rep.bounds.sigma_in_range = sb.in_range;

    rep.queries = oracles.front().ledger().snapshot();
    return rep;
}

}  // namespace

WebbReport webb_super_envy_free(std::vector<MeasureOracle>& oracles,
                                const std::vector<Interval>& partition,
                                const NearExactConfig& cfg) {
    if (oracles.empty()) throw DomainError("protocol needs at least one player");
    if (partition.size() != oracles.size())
        throw DomainError("witness partition needs one cell per player");
    if (oracles.size() == 1) return run_single_player(oracles, partition);

    StochasticMatrix witness = build_witness(oracles, partition);
    const std::vector<double> sig = singular_values(witness.base());
    if (!(sig.back() > kSingularSigmaRatio * sig.front()))
        throw SingularError("witness matrix numerically singular");
    return run_webb(oracles, partition, std::move(witness), sig.back(), false, cfg);
}

WebbReport envy_free(std::vector<MeasureOracle>& oracles, const NearExactConfig& cfg) {
    const int n = static_cast<int>(oracles.size());
    if (n < 1) throw DomainError("protocol needs at least one player");
    const std::vector<Interval> grid = uniform_partition(n);
    if (n == 1) return run_single_player(oracles, grid);

    StochasticMatrix first = build_witness(oracles, grid);
    const std::vector<double> sig1 = singular_values(first.base());
    if (sig1.back() > kSingularSigmaRatio * sig1.front()) {
        try {
            return run_webb(oracles, grid, first, sig1.back(), false, cfg);
        } catch (const SingularError&) {
            // pivot-level breakdown despite the sigma gate; fall through to retry
        }
    }

    // One jittered-partition retry: interior grid points moved by +-1/(4n).
    if (!cfg.rng) throw DomainError("near-exact config needs an rng stream");
    std::vector<double> cuts(static_cast<std::size_t>(n) + 1, 0.0);
    cuts.back() = 1.0;
    for (int j = 1; j < n; ++j)
        cuts[static_cast<std::size_t>(j)] =
            static_cast<double>(j) / n + cfg.rng->uniform_sym(1.0 / (4.0 * n));
    std::vector<Interval> jittered(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        jittered[static_cast<std::size_t>(j)] = {cuts[static_cast<std::size_t>(j)],
                                                 cuts[static_cast<std::size_t>(j) + 1]};

    StochasticMatrix second = build_witness(oracles, jittered);
    const std::vector<double> sig2 = singular_values(second.base());
    if (sig2.back() > kSingularSigmaRatio * sig2.front()) {
        try {
            return run_webb(oracles, jittered, second, sig2.back(), true, cfg);
        } catch (const SingularError&) {
        }
    }
    throw SingularWitnessMatrix(std::move(first), sig1.back(), std::move(second), sig2.back());
}

}  // namespace fairdiv
