#pragma once

#include <cstddef>
#include <vector>

namespace fairdiv {

/// Dense real n-by-n matrix, row major.
class SquareMatrix {
public:
    explicit SquareMatrix(int n);
    SquareMatrix(int n, std::vector<double> entries);
    static SquareMatrix identity(int n);

    int n() const { return n_; }
    double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<double>& entries() const { return a_; }
    std::vector<double>& entries() { return a_; }

    double row_sum(int i) const;

private:
    int n_;
    std::vector<double> a_;
};

SquareMatrix multiply(const SquareMatrix& a, const SquareMatrix& b);

/// Row-stochastic matrix: non-negative entries, every row summing to 1.
/// `entry_floor`/`row_tol` loosen the gate for matrices produced by floating
/// arithmetic (the ratio matrix R carries row sums accurate to 1e-9 only).
class StochasticMatrix {
public:
    explicit StochasticMatrix(SquareMatrix base, double row_tol = 1e-12,
                              double entry_floor = 0.0);

    const SquareMatrix& base() const { return base_; }
    int n() const { return base_.n(); }
    double at(int i, int j) const { return base_.at(i, j); }

private:
    SquareMatrix base_;
};

}  // namespace fairdiv
