#pragma once

#include <vector>

#include "fairdiv/interval.hpp"

namespace fairdiv {

/// A division of the cake: one piece set per player, pairwise interior
/// disjoint, jointly covering [0,1] (endpoint sharing is value-irrelevant
/// for atomless measures).
struct Allocation {
    std::vector<PieceSet> pieces;

    int players() const { return static_cast<int>(pieces.size()); }

    /// Throws InvariantViolation unless the pieces tile [0,1] within tol.
    void validate(double tol = 1e-9) const;
};

}  // namespace fairdiv
