#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairdiv/interval.hpp"
#include "fairdiv/matrix.hpp"
#include "fairdiv/measure.hpp"
#include "fairdiv/rng.hpp"

namespace fairdiv {

enum class ModelKind { H1, H2 };

struct ModelConfig {
    ModelKind kind = ModelKind::H1;
    int n = 0;
    double epsilon = 0.0;                    // H2 noise half-width
    std::optional<StochasticMatrix> base;    // H2 base; uniform when absent
    std::string noise = "uniform";           // only uniform noise is defined

    void validate() const;  // throws ConfigError
};

struct SeedPath {
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
};

/// One draw of the factorization M = D X together with its provenance.
struct SampleRecord {
    SquareMatrix X;
    SquareMatrix D;   // diagonal of reciprocal row sums of X
    StochasticMatrix M;
    SeedPath seed_path;
    double epsilon_effective = 0.0;  // H2: noise width actually used
};

/// H1 (full independence): X_ij i.i.d. exponential(1); each row of M is then
/// uniform on the standard simplex. Consumes exactly n^2 stream values in
/// row-major order.
SampleRecord sample_h1(int n, Rng& rng, SeedPath path = {});

/// H2(eps): X = base + noise with noise i.i.d. uniform on (-eps', eps') where
/// eps' = min(eps, min base entry). The clamp keeps X positive when the
/// requested eps is infeasible for the base (no stochastic base has all
/// entries above eps once n*eps >= 1); the record reports the width used.
SampleRecord sample_h2(const ModelConfig& cfg, Rng& rng, SeedPath path = {});

/// Dispatch on cfg.kind.
SampleRecord sample(const ModelConfig& cfg, Rng& rng, SeedPath path = {});

/// Uniform base a_ij = 1/n.
StochasticMatrix default_base(int n);

/// The witness grid W_j = [(j-1)/n, j/n].
std::vector<Interval> uniform_partition(int n);

/// Piecewise-constant measures whose witness evaluations reproduce M: player
/// i has constant density M_ij/|W_j| on W_j. The partition must tile [0,1].
std::vector<PiecewiseConstantMeasure> measures_from_matrix(const StochasticMatrix& m,
                                                           const std::vector<Interval>& partition);

}  // namespace fairdiv
