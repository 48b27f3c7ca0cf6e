#pragma once

#include <vector>

#include "fairdiv/matrix.hpp"

namespace fairdiv {

/// Inverse by row-pivoted Gauss-Jordan elimination. Throws SingularError when
/// a pivot vanishes or the smallest/largest pivot ratio falls below 1e-12;
/// that is the det(M)=0 branch of the top-level algorithm.
SquareMatrix invert(const SquareMatrix& m);

/// LU determinant (partial pivoting); exact 0 when elimination breaks down.
double determinant(const SquareMatrix& m);

double min_entry(const SquareMatrix& m);
double max_abs_entry(const SquareMatrix& m);

/// Singular values in decreasing order, via one-sided (Hestenes) Jacobi
/// orthogonalization. Deterministic for fixed input; small singular values
/// keep high relative accuracy. Throws ConvergenceError after 100*n sweeps.
std::vector<double> singular_values(const SquareMatrix& m);

double smallest_singular_value(const SquareMatrix& m);

}  // namespace fairdiv
