#pragma once

#include "fairdiv/matrix.hpp"

namespace fairdiv {

/// delta = (n-1) / (n (1 - t n)) for t = min entry of the inverted witness
/// matrix; always in (0, (n-1)/n] since t <= 0 for stochastic inputs.
double delta(int n, double t);

/// Target matrix N: diagonal 1/n + d, off-diagonal 1/n - d/(n-1).
StochasticMatrix target_matrix(int n, double d);

/// R = M^{-1} N, evaluated through the affine identity
///     r_ij = 1/n - d/(n-1) + d*n/(n-1) * m~_ij
/// which holds because the inverse of a row-stochastic matrix has unit row
/// sums. The identity pins the minimum of R at exactly 0 and keeps row sums
/// accurate even for ill-conditioned witnesses, which the literal product
/// does not. Requires n_mat to have the target structure; validates that the
/// result has row sums within 1e-9 of 1 and min entry in [-1e-12, 1e-9].
StochasticMatrix ratio_matrix(const SquareMatrix& m_inv, const StochasticMatrix& n_mat);

/// Query bound n^5 (2 + 2 n^{3/2}) (1 - t n) / (n-1) for the super envy-free
/// algorithm under the cited near-exact cost model. A calculator: reported
/// alongside, never enforced against, the measured query count.
double webb_query_bound(int n, double t);

struct SigmaQueryBound {
    double value = 0.0;
    bool in_range = false;  // the corollary is stated for n >= 19
};

/// n^7 max(1, 1/sigma_n); flagged out-of-range for n < 19.
SigmaQueryBound sigma_query_bound(int n, double sigma_n);

/// Polynomial decay exponent -(b-1)/3 + 1 of the query-count tail (the o(1)
/// term is not representable). Requires b > 4.
double tail_exponent(double b);

}  // namespace fairdiv
