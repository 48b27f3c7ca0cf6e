#include "fairdiv/oracle.hpp"

#include <bit>
#include <cmath>

#include "fairdiv/errors.hpp"

namespace fairdiv {

namespace {

std::uint64_t canonical_bits(double v) {
    if (v == 0.0) v = 0.0;  // fold -0.0
    return std::bit_cast<std::uint64_t>(v);
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

std::size_t QueryLedger::FullKeyHash::operator()(const FullKey& k) const noexcept {
    return static_cast<std::size_t>(mix64(k.meta ^ mix64(k.a ^ mix64(k.b))));
}

QueryLedger::QueryLedger(int players) {
    if (players < 1) throw DomainError("ledger needs at least one player");
    evals_.assign(static_cast<std::size_t>(players), 0);
    cuts_.assign(static_cast<std::size_t>(players), 0);
}

bool QueryLedger::record(QueryKind kind, int player, double a, double b) {
    const std::size_t p = static_cast<std::size_t>(player);
    if (p >= evals_.size()) throw DomainError("player index out of range");
    const FullKey key{(static_cast<std::uint64_t>(p) << 1) | static_cast<std::uint64_t>(kind),
                      canonical_bits(a), canonical_bits(b)};
    if (!dedup_.insert(key).second) return false;
    (kind == QueryKind::Eval ? evals_ : cuts_)[p] += 1;
    return true;
}

void QueryLedger::record_bulk(QueryKind kind, int player, std::uint64_t count) {
    const std::size_t p = static_cast<std::size_t>(player);
    if (p >= evals_.size()) throw DomainError("player index out of range");
    (kind == QueryKind::Eval ? evals_ : cuts_)[p] += count;
}

std::uint64_t QueryLedger::eval_total() const {
    std::uint64_t s = 0;
    for (std::uint64_t v : evals_) s += v;
    return s;
}

std::uint64_t QueryLedger::cut_total() const {
    std::uint64_t s = 0;
    for (std::uint64_t v : cuts_) s += v;
    return s;
}

LedgerSnapshot QueryLedger::snapshot() const {
    return LedgerSnapshot{evals_, cuts_, eval_total(), cut_total()};
}

MeasureOracle::MeasureOracle(int player, const PiecewiseConstantMeasure* measure,
                             std::shared_ptr<QueryLedger> ledger)
    : player_(player), measure_(measure), ledger_(std::move(ledger)) {
    if (!measure_ || !ledger_) throw DomainError("oracle needs a measure and a ledger");
    if (player_ < 0 || player_ >= ledger_->players())
        throw DomainError("oracle player index not covered by the ledger");
}

double MeasureOracle::eval(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y) || x < 0.0 || y > 1.0 || x > y)
        throw DomainError("eval needs 0 <= x <= y <= 1");
    const double value = measure_->mass(x, y);
    ledger_->record(QueryKind::Eval, player_, x, y);
    return value;
}

double MeasureOracle::cut(double x, double a) {
    if (!std::isfinite(x) || !std::isfinite(a) || x < 0.0 || x > 1.0 || a < 0.0)
        throw DomainError("cut needs x in [0,1] and a >= 0");
    const double y = measure_->leftmost_cut(x, a);
    ledger_->record(QueryKind::Cut, player_, x, a);
    return y;
}

double MeasureOracle::eval_pieces(const PieceSet& pieces) {
    double s = 0.0;
    for (const Interval& w : pieces.intervals()) s += eval(w.lo, w.hi);
    return s;
}

std::vector<double> MeasureOracle::quantile_cuts(const Interval& w, long K) {
    require_valid(w);
    if (K < 1) throw DomainError("quantile_cuts needs K >= 1");
    const double m = eval(w.lo, w.hi);
    std::vector<double> points;
    if (m == 0.0) return points;  // vacuous player for w
    points.reserve(static_cast<std::size_t>(K - 1));
    for (long k = 1; k < K; ++k) {
        // Written as (k*m)/K so that doubling K reproduces the even-index
        // points bit-exactly and the ledger treats them as repeats.
        const double a = (static_cast<double>(k) * m) / static_cast<double>(K);
        points.push_back(std::min(cut(w.lo, a), w.hi));
    }
    return points;
}

}  // namespace fairdiv
