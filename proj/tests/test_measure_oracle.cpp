#include "doctest.h"

#include <cmath>
#include <memory>
#include <set>
#include <tuple>
#include <vector>

#include "fairdiv/errors.hpp"
#include "fairdiv/measure.hpp"
#include "fairdiv/oracle.hpp"
#include "fairdiv/rng.hpp"

using namespace fairdiv;

namespace {

// Independent oracle: midpoint quadrature of the density over [x,y].
double quadrature_mass(const PiecewiseConstantMeasure& m, double x, double y, int steps = 200000) {
    const double h = (y - x) / steps;
    double s = 0.0;
    for (int k = 0; k < steps; ++k) {
        const double mid = x + (k + 0.5) * h;
        const auto& bp = m.breakpoints();
        std::size_t cell = 0;
        while (cell + 2 < bp.size() && bp[cell + 1] <= mid) ++cell;
        s += m.densities()[cell] * h;
    }
    return s;
}

PiecewiseConstantMeasure front_loaded() {  // density 2 on [0, 0.5], 0 after
    return PiecewiseConstantMeasure({0.0, 0.5, 1.0}, {2.0, 0.0});
}

struct Rig {
    std::vector<PiecewiseConstantMeasure> measures;
    std::shared_ptr<QueryLedger> ledger;
    std::vector<MeasureOracle> oracles;

    explicit Rig(std::vector<PiecewiseConstantMeasure> ms) : measures(std::move(ms)) {
        ledger = std::make_shared<QueryLedger>(static_cast<int>(measures.size()));
        for (std::size_t i = 0; i < measures.size(); ++i)
            oracles.emplace_back(static_cast<int>(i), &measures[i], ledger);
    }
};

}  // namespace

TEST_CASE("eval matches closed forms and the quadrature oracle") {
    Rig rig({PiecewiseConstantMeasure::uniform(), front_loaded()});
    auto& uni = rig.oracles[0];
    auto& fl = rig.oracles[1];

    CHECK(uni.eval(0.2, 0.5) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(uni.eval(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fl.eval(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

    const double direct = fl.eval(0.1, 0.4);
    CHECK(direct == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(direct == doctest::Approx(quadrature_mass(rig.measures[1], 0.1, 0.4)).epsilon(1e-4));

    CHECK_THROWS_AS(uni.eval(-0.1, 0.5), DomainError);
    CHECK_THROWS_AS(uni.eval(0.5, 1.2), DomainError);
    CHECK_THROWS_AS(uni.eval(0.6, 0.4), DomainError);
}

TEST_CASE("cut inverts the CDF, leftmost convention") {
    Rig rig({PiecewiseConstantMeasure::uniform(), front_loaded()});
    auto& uni = rig.oracles[0];
    auto& fl = rig.oracles[1];

    CHECK(uni.cut(0.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    const double y = fl.cut(0.0, 0.6);
    CHECK(y == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(fl.eval(0.0, y) == doctest::Approx(0.6).epsilon(1e-12));

    // leftmost solution on the trailing zero-density plateau
    CHECK(fl.cut(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    // a = 0 returns x itself
    CHECK(fl.cut(0.7, 0.0) == 0.7);
    CHECK(uni.cut(0.25, 0.0) == 0.25);

    CHECK_THROWS_AS(uni.cut(0.5, 0.6), InsufficientMass);
    CHECK_THROWS_AS(uni.cut(-0.1, 0.1), DomainError);
    CHECK_THROWS_AS(uni.cut(0.1, -0.2), DomainError);
}

TEST_CASE("eval_pieces sums interval values") {
    Rig rig({PiecewiseConstantMeasure::uniform(), front_loaded()});
    CHECK(rig.oracles[0].eval_pieces(PieceSet({{0.0, 0.1}, {0.5, 0.6}})) ==
          doctest::Approx(0.2).epsilon(1e-12));
    CHECK(rig.oracles[0].eval_pieces(PieceSet{}) == 0.0);
    CHECK(rig.oracles[1].eval_pieces(PieceSet({{0.0, 0.25}, {0.75, 1.0}})) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("quantile_cuts") {
    Rig rig({PiecewiseConstantMeasure::uniform(), front_loaded(),
             PiecewiseConstantMeasure({0.0, 0.5, 1.0}, {0.0, 2.0})});
    const std::vector<double> q = rig.oracles[0].quantile_cuts({0.0, 1.0}, 4);
    REQUIRE(q.size() == 3);
    CHECK(q[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(q[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(q[2] == doctest::Approx(0.75).epsilon(1e-12));

    CHECK(rig.oracles[0].quantile_cuts({0.2, 0.8}, 1).empty());

    const std::vector<double> h = rig.oracles[1].quantile_cuts({0.0, 1.0}, 2);
    REQUIRE(h.size() == 1);
    CHECK(h[0] == doctest::Approx(0.25).epsilon(1e-12));

    // mu vanishes on w: vacuous player, empty list
    CHECK(rig.oracles[2].quantile_cuts({0.0, 0.4}, 8).empty());

    CHECK_THROWS_AS(rig.oracles[0].quantile_cuts({0.5, 0.2}, 4), DomainError);
    CHECK_THROWS_AS(rig.oracles[0].quantile_cuts({0.0, 1.0}, 0), DomainError);
}

TEST_CASE("round trip, monotonicity, additivity on random queries") {
    PiecewiseConstantMeasure m({0.0, 0.15, 0.4, 0.55, 0.8, 1.0},
                               {0.5, 1.8, 0.9, 1.2, 0.35});
    REQUIRE(std::abs(m.total() - 1.0) <= 1e-12);
    Rig rig({m});
    auto& o = rig.oracles[0];

    Rng rng(42);
    for (int it = 0; it < 2000; ++it) {
        const double x = rng.uniform01();
        const double avail = o.eval(x, 1.0);
        const double a = rng.uniform01() * avail;
        const double y = o.cut(x, a);
        CHECK(o.eval(x, y) == doctest::Approx(a).epsilon(1e-10));

        const double a2 = rng.uniform01() * avail;
        const double y2 = o.cut(x, a2);
        if (a2 >= a) CHECK(y2 >= y);
        if (a2 < a) CHECK(y2 <= y);
    }
    for (int it = 0; it < 500; ++it) {
        double x = rng.uniform01(), y = rng.uniform01(), z = rng.uniform01();
        if (x > y) std::swap(x, y);
        if (y > z) std::swap(y, z);
        if (x > y) std::swap(x, y);
        CHECK(o.eval(x, z) == doctest::Approx(o.eval(x, y) + o.eval(y, z)).epsilon(1e-12));
    }
}

TEST_CASE("cut is continuous in a for strictly positive densities") {
    PiecewiseConstantMeasure m({0.0, 0.3, 0.7, 1.0}, {0.5, 1.5, 0.8333333333333334});
    const double min_density = 0.5;
    Rig rig({m});
    Rng rng(7);
    for (int it = 0; it < 2000; ++it) {
        const double a = rng.uniform01() * 0.999;
        const double h = 1e-7 * rng.uniform01();
        const double y1 = rig.oracles[0].cut(0.0, a);
        const double y2 = rig.oracles[0].cut(0.0, std::min(a + h, 1.0));
        CHECK(y2 - y1 >= -1e-15);
        CHECK(y2 - y1 <= h / min_density + 1e-12);
    }
}

TEST_CASE("ledger counts distinct queries only and replays for free") {
    Rig rig({PiecewiseConstantMeasure::uniform(), front_loaded()});
    auto& ledger = *rig.ledger;

    // scripted sequence with duplicates, mirrored by a test-side key set
    std::set<std::tuple<int, int, double, double>> keys;
    auto eval_q = [&](int p, double x, double y) {
        rig.oracles[static_cast<std::size_t>(p)].eval(x, y);
        keys.insert({p, 0, x, y});
    };
    auto cut_q = [&](int p, double x, double a) {
        rig.oracles[static_cast<std::size_t>(p)].cut(x, a);
        keys.insert({p, 1, x, a});
    };
    eval_q(0, 0.0, 0.5);
    eval_q(0, 0.0, 0.5);
    eval_q(1, 0.0, 0.5);
    eval_q(0, 0.25, 0.5);
    cut_q(0, 0.0, 0.25);
    cut_q(0, 0.0, 0.25);
    cut_q(1, 0.1, 0.25);
    CHECK(ledger.total() == keys.size());

    const std::uint64_t before = ledger.total();
    eval_q(0, 0.0, 0.5);
    cut_q(0, 0.0, 0.25);
    eval_q(1, 0.0, 0.5);
    CHECK(ledger.total() == before);

    // same query by different players counts per player
    CHECK(ledger.eval_count(0) == 2);
    CHECK(ledger.eval_count(1) == 1);
    CHECK(ledger.cut_count(0) == 1);
    CHECK(ledger.cut_count(1) == 1);

    // -0.0 and +0.0 canonicalize to the same key
    rig.oracles[0].eval(-0.0, 0.5);
    CHECK(ledger.eval_count(0) == 2);
}

TEST_CASE("measure construction and loader gates") {
    CHECK_THROWS_AS(PiecewiseConstantMeasure({0.0, 1.0}, {2.0}), DomainError);  // mass 2
    CHECK_THROWS_AS(PiecewiseConstantMeasure({0.0, 0.5}, {2.0}), DomainError);  // span
    CHECK_THROWS_AS(PiecewiseConstantMeasure({0.0, 0.5, 0.5, 1.0}, {1.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(PiecewiseConstantMeasure({0.0, 1.0}, {-1.0}), DomainError);

    // loader renormalizes small deviations, rejects large ones
    const auto m = PiecewiseConstantMeasure::renormalized({0.0, 1.0}, {1.0 + 5e-10});
    CHECK(m.total() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(PiecewiseConstantMeasure::renormalized({0.0, 1.0}, {1.1}), DomainError);
}
