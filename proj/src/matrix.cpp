#include "fairdiv/matrix.hpp"

#include <cmath>

#include "fairdiv/errors.hpp"

namespace fairdiv {

SquareMatrix::SquareMatrix(int n) : n_(n) {
    if (n < 1) throw DomainError("matrix dimension must be >= 1");
    a_.assign(static_cast<std::size_t>(n) * n, 0.0);
}

SquareMatrix::SquareMatrix(int n, std::vector<double> entries) : n_(n), a_(std::move(entries)) {
    if (n < 1) throw DomainError("matrix dimension must be >= 1");
    if (a_.size() != static_cast<std::size_t>(n) * n)
        throw DomainError("matrix entry count does not match dimension");
    for (double v : a_)
        if (!std::isfinite(v)) throw DomainError("matrix entries must be finite");
}

SquareMatrix SquareMatrix::identity(int n) {
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

double SquareMatrix::row_sum(int i) const {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += at(i, j);
    return s;
}

SquareMatrix multiply(const SquareMatrix& a, const SquareMatrix& b) {
    if (a.n() != b.n()) throw DomainError("matrix product needs equal dimensions");
    const int n = a.n();
    SquareMatrix c(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j) c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

StochasticMatrix::StochasticMatrix(SquareMatrix base, double row_tol, double entry_floor)
    : base_(std::move(base)) {
    const int n = base_.n();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if (base_.at(i, j) < -entry_floor)
                throw InvariantViolation("stochastic matrix has a negative entry");
        if (std::abs(base_.row_sum(i) - 1.0) > row_tol)
            throw InvariantViolation("stochastic matrix row does not sum to 1");
    }
}

}  // namespace fairdiv
