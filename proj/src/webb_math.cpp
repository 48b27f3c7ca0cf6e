#include "fairdiv/webb_math.hpp"

#include <cmath>

#include "fairdiv/errors.hpp"

namespace fairdiv {

double delta(int n, double t) {
    if (n < 2) throw DomainError("delta needs n >= 2");
    if (t > 0.0) throw DomainError("delta needs t <= 0 (non-witness input)");
    return (n - 1.0) / (n * (1.0 - t * n));
}

StochasticMatrix target_matrix(int n, double d) {
    if (n < 2) throw DomainError("target matrix needs n >= 2");
    const double d_max = (n - 1.0) / n;
    if (!(d > 0.0) || d > d_max * (1.0 + 1e-12))
        throw DomainError("target offset d must lie in (0, (n-1)/n]");
    SquareMatrix base(n);
    const double diag = 1.0 / n + d;
    const double off = 1.0 / n - d / (n - 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) base.at(i, j) = (i == j) ? diag : off;
    return StochasticMatrix(std::move(base), 1e-12, 1e-15);
}

StochasticMatrix ratio_matrix(const SquareMatrix& m_inv, const StochasticMatrix& n_mat) {
    const int n = m_inv.n();
    if (n != n_mat.n()) throw DomainError("inverse and target dimensions differ");
    if (n == 1) return StochasticMatrix(SquareMatrix::identity(1));

    const double off = n_mat.at(0, 1);
    const double slope = n_mat.at(0, 0) - off;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double expect = (i == j) ? off + slope : off;
            if (std::abs(n_mat.at(i, j) - expect) > 1e-12)
                throw DomainError("ratio_matrix needs a target-structured N");
        }

    SquareMatrix r(n);
    double min_r = off + slope * m_inv.at(0, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = off + slope * m_inv.at(i, j);
            r.at(i, j) = v;
            if (v < min_r) min_r = v;
        }

    if (min_r < -1e-12 || min_r > 1e-9)
        throw InvariantViolation("ratio matrix minimum escapes [-1e-12, 1e-9]; delta/t mismatch");
    for (int i = 0; i < n; ++i)
        if (std::abs(r.row_sum(i) - 1.0) > 1e-9)
            throw InvariantViolation("ratio matrix row sum off by more than 1e-9");
    return StochasticMatrix(std::move(r), 1e-9, 1e-12);
}

double webb_query_bound(int n, double t) {
    if (n < 2) throw DomainError("webb_query_bound needs n >= 2");
    if (t > 0.0) throw DomainError("webb_query_bound needs t <= 0");
    const double nn = n;
    return std::pow(nn, 5.0) * (2.0 + 2.0 * std::pow(nn, 1.5)) * (1.0 - t * nn) / (nn - 1.0);
}

SigmaQueryBound sigma_query_bound(int n, double sigma_n) {
    if (n < 1) throw DomainError("sigma_query_bound needs n >= 1");
    if (!(sigma_n > 0.0)) throw DomainError("sigma_query_bound needs sigma_n > 0");
    SigmaQueryBound out;
    out.value = std::pow(static_cast<double>(n), 7.0) * std::max(1.0, 1.0 / sigma_n);
    out.in_range = n >= 19;
    return out;
}

double tail_exponent(double b) {
    if (!(b > 4.0)) throw DomainError("tail exponent needs b > 4");
    return -(b - 1.0) / 3.0 + 1.0;
}

}  // namespace fairdiv
