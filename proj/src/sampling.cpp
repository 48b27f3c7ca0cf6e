#include "fairdiv/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "fairdiv/errors.hpp"

namespace fairdiv {

void ModelConfig::validate() const {
    if (n < 1) throw ConfigError("model needs n >= 1");
    if (kind == ModelKind::H2) {
        if (!(epsilon >= 0.0) || epsilon >= 1.0)
            throw ConfigError("H2 epsilon must lie in [0,1)");
        if (noise != "uniform") throw ConfigError("only uniform noise is defined");
        if (base) {
            if (base->n() != n) throw ConfigError("H2 base dimension differs from n");
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (!(base->at(i, j) > 0.0)) throw ConfigError("H2 base entries must be positive");
        }
    }
}

namespace {

SampleRecord assemble(SquareMatrix x, SeedPath path, double eps_eff) {
    const int n = x.n();
    SquareMatrix d(n);
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i) {
        const double di = 1.0 / x.row_sum(i);
        d.at(i, i) = di;
        for (int j = 0; j < n; ++j) m.at(i, j) = d.at(i, i) * x.at(i, j);
    }
    return SampleRecord{std::move(x), std::move(d), StochasticMatrix(std::move(m)), path, eps_eff};
}

}  // namespace

SampleRecord sample_h1(int n, Rng& rng, SeedPath path) {
    if (n < 1) throw ConfigError("sample_h1 needs n >= 1");
    SquareMatrix x(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) x.at(i, j) = rng.exponential();
    return assemble(std::move(x), path, 0.0);
}

SampleRecord sample_h2(const ModelConfig& cfg, Rng& rng, SeedPath path) {
    if (cfg.kind != ModelKind::H2) throw ConfigError("sample_h2 needs an H2 config");
    cfg.validate();
    const int n = cfg.n;
    const StochasticMatrix base = cfg.base ? *cfg.base : default_base(n);
    double base_min = base.at(0, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) base_min = std::min(base_min, base.at(i, j));
    const double eps_eff = std::min(cfg.epsilon, base_min);

    SquareMatrix x(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) x.at(i, j) = base.at(i, j) + rng.uniform_sym(eps_eff);
    return assemble(std::move(x), path, eps_eff);
}

SampleRecord sample(const ModelConfig& cfg, Rng& rng, SeedPath path) {
    cfg.validate();
    return cfg.kind == ModelKind::H1 ? sample_h1(cfg.n, rng, path) : sample_h2(cfg, rng, path);
}

StochasticMatrix default_base(int n) {
    SquareMatrix m(n);
    const double v = 1.0 / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = v;
    return StochasticMatrix(std::move(m));
}

std::vector<Interval> uniform_partition(int n) {
    if (n < 1) throw DomainError("partition needs n >= 1");
    std::vector<double> cuts(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) cuts[static_cast<std::size_t>(j)] = static_cast<double>(j) / n;
    cuts[0] = 0.0;
    cuts[static_cast<std::size_t>(n)] = 1.0;
    std::vector<Interval> out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        out[static_cast<std::size_t>(j)] = {cuts[static_cast<std::size_t>(j)], cuts[static_cast<std::size_t>(j) + 1]};
    return out;
}

std::vector<PiecewiseConstantMeasure> measures_from_matrix(const StochasticMatrix& m,
                                                           const std::vector<Interval>& partition) {
    const int n = m.n();
    if (partition.empty()) throw PartitionError("empty partition");
    if (partition.front().lo != 0.0 || partition.back().hi != 1.0)
        throw PartitionError("partition must span [0,1]");
    for (std::size_t j = 0; j + 1 < partition.size(); ++j)
        if (partition[j].hi != partition[j + 1].lo)
            throw PartitionError("partition has a gap or overlap");
    for (const Interval& w : partition)
        if (!(w.lo < w.hi)) throw PartitionError("partition cells need positive width");
    if (partition.size() != static_cast<std::size_t>(n))
        throw PartitionError("partition cell count differs from matrix dimension");

    std::vector<double> bp(partition.size() + 1);
    bp[0] = 0.0;
    for (std::size_t j = 0; j < partition.size(); ++j) bp[j + 1] = partition[j].hi;

    std::vector<PiecewiseConstantMeasure> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<double> dens(partition.size());
        for (std::size_t j = 0; j < partition.size(); ++j)
            dens[j] = m.at(i, static_cast<int>(j)) / partition[j].length();
        out.emplace_back(bp, std::move(dens));
    }
    return out;
}

}  // namespace fairdiv
