#include "fairdiv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fairdiv/errors.hpp"

namespace fairdiv {

namespace {
constexpr double kPivotRatioFloor = 1e-12;
}

SquareMatrix invert(const SquareMatrix& m) {
    const int n = m.n();
    SquareMatrix a = m;
    SquareMatrix inv = SquareMatrix::identity(n);
    double pivot_max = 0.0, pivot_min = 0.0;

    for (int col = 0; col < n; ++col) {
        int pivot_row = col;
        double best = std::abs(a.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double v = std::abs(a.at(r, col));
            if (v > best) {
                best = v;
                pivot_row = r;
            }
        }
        if (best == 0.0) throw SingularError("zero pivot during elimination");
        if (pivot_row != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(a.at(col, j), a.at(pivot_row, j));
                std::swap(inv.at(col, j), inv.at(pivot_row, j));
            }
        }
        pivot_max = std::max(pivot_max, best);
        pivot_min = (col == 0) ? best : std::min(pivot_min, best);

        const double p = a.at(col, col);
        for (int j = 0; j < n; ++j) {
            a.at(col, j) /= p;
            inv.at(col, j) /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a.at(r, col);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                a.at(r, j) -= f * a.at(col, j);
                inv.at(r, j) -= f * inv.at(col, j);
            }
        }
    }
    if (pivot_min < kPivotRatioFloor * pivot_max)
        throw SingularError("pivot ratio below the singularity threshold");
    return inv;
}

double determinant(const SquareMatrix& m) {
    const int n = m.n();
    SquareMatrix a = m;
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot_row = col;
        double best = std::abs(a.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double v = std::abs(a.at(r, col));
            if (v > best) {
                best = v;
                pivot_row = r;
            }
        }
        if (best == 0.0) return 0.0;
        if (pivot_row != col) {
            for (int j = col; j < n; ++j) std::swap(a.at(col, j), a.at(pivot_row, j));
            det = -det;
        }
        const double p = a.at(col, col);
        det *= p;
        for (int r = col + 1; r < n; ++r) {
            const double f = a.at(r, col) / p;
            if (f == 0.0) continue;
            for (int j = col; j < n; ++j) a.at(r, j) -= f * a.at(col, j);
        }
    }
    return det;
}

double min_entry(const SquareMatrix& m) {
    return *std::min_element(m.entries().begin(), m.entries().end());
}

double max_abs_entry(const SquareMatrix& m) {
    double best = 0.0;
    for (double v : m.entries()) best = std::max(best, std::abs(v));
    return best;
}

std::vector<double> singular_values(const SquareMatrix& m) {
    const int n = m.n();
    // Column-major working copy; rotations act on contiguous columns.
    std::vector<double> col(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) col[static_cast<std::size_t>(j) * n + i] = m.at(i, j);

    const double tol = 1e-14;
    const long max_sweeps = 100L * n;
    bool converged = false;
    for (long sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (int i = 0; i < n - 1; ++i) {
            for (int j = i + 1; j < n; ++j) {
                double* ci = &col[static_cast<std::size_t>(i) * n];
                double* cj = &col[static_cast<std::size_t>(j) * n];
                double aii = 0.0, ajj = 0.0, aij = 0.0;
                for (int k = 0; k < n; ++k) {
                    aii += ci[k] * ci[k];
                    ajj += cj[k] * cj[k];
                    aij += ci[k] * cj[k];
                }
                if (aii == 0.0 || ajj == 0.0) continue;
                if (std::abs(aij) <= tol * std::sqrt(aii * ajj)) continue;
                converged = false;
                const double tau = (ajj - aii) / (2.0 * aij);
                const double sign = (tau >= 0.0) ? 1.0 : -1.0;
                const double t = sign / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int k = 0; k < n; ++k) {
                    const double vi = ci[k], vj = cj[k];
                    ci[k] = c * vi - s * vj;
                    cj[k] = s * vi + c * vj;
                }
            }
        }
    }
    if (!converged) throw ConvergenceError("one-sided Jacobi did not converge");

    std::vector<double> sigma(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        double norm2 = 0.0;
        const double* cj = &col[static_cast<std::size_t>(j) * n];
        for (int k = 0; k < n; ++k) norm2 += cj[k] * cj[k];
        sigma[static_cast<std::size_t>(j)] = std::sqrt(norm2);
    }
    std::sort(sigma.begin(), sigma.end(), std::greater<double>());
    return sigma;
}

double smallest_singular_value(const SquareMatrix& m) { return singular_values(m).back(); }

}  // namespace fairdiv
