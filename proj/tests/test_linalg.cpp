#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "fairdiv/errors.hpp"
#include "fairdiv/linalg.hpp"
#include "fairdiv/rng.hpp"
#include "fairdiv/sampling.hpp"

using namespace fairdiv;

namespace {

SquareMatrix mat2(double a, double b, double c, double d) {
    return SquareMatrix(2, {a, b, c, d});
}

double identity_deviation(const SquareMatrix& m, const SquareMatrix& minv) {
    const SquareMatrix p = multiply(m, minv);
    double worst = 0.0;
    for (int i = 0; i < p.n(); ++i)
        for (int j = 0; j < p.n(); ++j)
            worst = std::max(worst, std::abs(p.at(i, j) - (i == j ? 1.0 : 0.0)));
    return worst;
}

SquareMatrix random_exponential(int n, Rng& rng) {
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = rng.exponential();
    return m;
}

}  // namespace

TEST_CASE("invert: closed forms and singular detection") {
    const SquareMatrix id2 = SquareMatrix::identity(2);
    const SquareMatrix inv_id = invert(id2);
    CHECK(inv_id.at(0, 0) == 1.0);
    CHECK(inv_id.at(0, 1) == 0.0);

    const SquareMatrix m = mat2(2.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3);
    const SquareMatrix inv = invert(m);
    CHECK(inv.at(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(inv.at(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(inv.at(1, 0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(inv.at(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(identity_deviation(m, inv) <= 1e-8 * m.n());

    CHECK_THROWS_AS(invert(mat2(0.5, 0.5, 0.5, 0.5)), SingularError);
}

TEST_CASE("min_entry and determinant") {
    CHECK(min_entry(SquareMatrix::identity(2)) == 0.0);
    CHECK(min_entry(mat2(2, -1, -1, 2)) == -1.0);
    CHECK(min_entry(SquareMatrix(1, {1.0})) == 1.0);

    CHECK(determinant(SquareMatrix::identity(3)) == 1.0);
    CHECK(determinant(mat2(0.5, 0.5, 0.5, 0.5)) == 0.0);
    CHECK(determinant(mat2(2.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3)) ==
          doctest::Approx(1.0 / 3).epsilon(1e-14));
}

TEST_CASE("singular values: closed forms") {
    for (int n : {1, 2, 5, 20}) {
        const std::vector<double> s = singular_values(SquareMatrix::identity(n));
        for (double v : s) CHECK(v == 1.0);
    }

    const std::vector<double> s = singular_values(mat2(2.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3));
    REQUIRE(s.size() == 2);
    CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s[1] == doctest::Approx(1.0 / 3).epsilon(1e-10));

    const std::vector<double> r1 = singular_values(mat2(0.5, 0.5, 0.5, 0.5));
    CHECK(r1[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r1[1] <= 1e-10);

    CHECK(smallest_singular_value(SquareMatrix(2, {1, 0, 0, 2})) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(smallest_singular_value(SquareMatrix::identity(4)) == 1.0);
}

TEST_CASE("t <= 0 for random stochastic witnesses") {
    Rng rng(11);
    for (int it = 0; it < 1000; ++it) {
        const int n = 2 + static_cast<int>(rng.uniform01() * 11);
        const SampleRecord rec = sample_h1(n, rng);
        try {
            CHECK(min_entry(invert(rec.M.base())) <= 0.0);
        } catch (const SingularError&) {
            // measure-zero event; nothing to check
        }
    }
}

TEST_CASE("product of singular values equals |det|") {
    Rng rng(13);
    for (int it = 0; it < 60; ++it) {
        const SquareMatrix m = random_exponential(30, rng);
        const std::vector<double> s = singular_values(m);
        double prod = 1.0;
        for (double v : s) prod *= v;
        const double det = std::abs(determinant(m));
        CHECK(std::abs(prod - det) <= 1e-8 * std::max(prod, det));
    }
}

TEST_CASE("singular values are permutation invariant") {
    Rng rng(17);
    const SquareMatrix m = random_exponential(8, rng);
    SquareMatrix perm(8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) perm.at(i, j) = m.at((i + 3) % 8, (j + 5) % 8);
    const std::vector<double> s1 = singular_values(m);
    const std::vector<double> s2 = singular_values(perm);
    for (std::size_t k = 0; k < s1.size(); ++k)
        CHECK(std::abs(s1[k] - s2[k]) <= 1e-10 * std::max(1.0, s1[0]));
}

TEST_CASE("max |inverse entry| bounded by 1/sigma_n") {
    Rng rng(19);
    for (int it = 0; it < 200; ++it) {
        const int n = 2 + static_cast<int>(rng.uniform01() * 15);
        const SquareMatrix m = random_exponential(n, rng);
        try {
            const SquareMatrix inv = invert(m);
            const double sn = smallest_singular_value(m);
            CHECK(max_abs_entry(inv) <= (1.0 + 1e-9) / sn);
        } catch (const SingularError&) {
        }
    }
}

TEST_CASE("sigma_n(A) sigma_n(B) <= sigma_n(AB)") {
    Rng rng(23);
    for (int it = 0; it < 100; ++it) {
        const int n = 2 + static_cast<int>(rng.uniform01() * 15);
        const SquareMatrix a = random_exponential(n, rng);
        const SquareMatrix b = random_exponential(n, rng);
        const double sa = smallest_singular_value(a);
        const double sb = smallest_singular_value(b);
        const double sab = smallest_singular_value(multiply(a, b));
        CHECK(sa * sb <= sab * (1.0 + 1e-9));
    }
}

TEST_CASE("rank deficiency means sigma_n below 1e-10") {
    Rng rng(29);
    for (int it = 0; it < 50; ++it) {
        const int n = 3 + static_cast<int>(rng.uniform01() * 10);
        SquareMatrix m = random_exponential(n, rng);
        for (int j = 0; j < n; ++j) m.at(n - 1, j) = m.at(0, j);  // duplicate row
        CHECK(smallest_singular_value(m) <= 1e-10 * singular_values(m).front());
        CHECK(std::abs(determinant(m)) <= 1e-10);
    }
}
