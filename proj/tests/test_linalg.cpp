#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "rpt/error.hpp"
#include "rpt/linalg.hpp"
#include "rpt/rng.hpp"

using namespace rpt;

namespace {

// Random orthonormal basis via Gram-Schmidt on a Gaussian matrix.
std::vector<std::vector<double>> random_rotation(std::size_t d, SplitRng& rng) {
    std::vector<std::vector<double>> basis;
    while (basis.size() < d) {
        std::vector<double> v(d);
        for (double& x : v) x = rng.next_gaussian();
        for (const auto& b : basis) {
            const double c = dot(v, b);
            for (std::size_t i = 0; i < d; ++i) v[i] -= c * b[i];
        }
        const double norm = std::sqrt(dot(v, v));
        if (norm < 1e-8) continue;
        for (double& x : v) x /= norm;
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<double> rotate_by(const std::vector<std::vector<double>>& rot,
                          std::span<const double> v) {
    std::vector<double> out(rot.size());
    for (std::size_t i = 0; i < rot.size(); ++i) out[i] = dot(rot[i], v);
    return out;
}

}  // namespace

TEST_CASE("random_unit_direction in one dimension is a sign") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SplitRng rng(seed);
        const auto u = random_unit_direction(1, rng);
        CHECK((u[0] == 1.0 || u[0] == -1.0));
    }
}

TEST_CASE("random_unit_direction has unit norm") {
    SplitRng rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        const auto u = random_unit_direction(3, rng);
        CHECK(std::abs(std::sqrt(dot(u, u)) - 1.0) < 1e-9);
    }
}

TEST_CASE("random_unit_direction rejects dimension zero") {
    SplitRng rng(0);
    CHECK_THROWS_AS(random_unit_direction(0, rng), validation_error);
}

TEST_CASE("random_unit_direction coordinates average to zero") {
    SplitRng rng(123);
    const int trials = 100000;
    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < trials; ++i) {
        const auto u = random_unit_direction(2, rng);
        sx += u[0];
        sy += u[1];
    }
    const double tol = 4.0 / std::sqrt(static_cast<double>(trials));
    CHECK(std::abs(sx / trials) < tol);
    CHECK(std::abs(sy / trials) < tol);
}

TEST_CASE("random_unit_direction is reproducible bit for bit") {
    SplitRng a = SplitRng(9).child(4);
    SplitRng b = SplitRng(9).child(4);
    const auto u = random_unit_direction(8, a);
    const auto v = random_unit_direction(8, b);
    CHECK(u == v);
}

TEST_CASE("projection basics") {
    const std::vector<double> pts{3.0, 4.0};
    const std::vector<double> u{1.0, 0.0};
    CHECK(project_rows(pts, 2, u)[0] == 3.0);

    const std::vector<double> zero{0.0, 0.0};
    CHECK(project_rows(zero, 2, u)[0] == 0.0);

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const std::vector<double> ones{1.0, 1.0};
    const std::vector<double> diag{inv_sqrt2, inv_sqrt2};
    CHECK(project_rows(ones, 2, diag)[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("projection rejects dimension mismatch") {
    const std::vector<double> pts{1.0, 2.0, 3.0};
    const std::vector<double> u{1.0, 0.0};
    CHECK_THROWS_AS(project_rows(pts, 3, u), validation_error);
    CHECK_THROWS_AS(dot(std::vector<double>{1.0}, u), validation_error);
}

TEST_CASE("projection is linear") {
    SplitRng rng(31);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t d = 5;
        std::vector<double> x(d), y(d);
        for (double& v : x) v = rng.next_gaussian();
        for (double& v : y) v = rng.next_gaussian();
        const auto u = random_unit_direction(d, rng);
        const double a = 2.0 * rng.next_double() - 1.0;
        const double b = 2.0 * rng.next_double() - 1.0;
        std::vector<double> combo(d);
        for (std::size_t i = 0; i < d; ++i) combo[i] = a * x[i] + b * y[i];
        const double lhs = dot(combo, u);
        const double rhs = a * dot(x, u) + b * dot(y, u);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("fractile_value matches the stated rank rule") {
    CHECK(fractile_value(std::vector<double>{1, 2, 3, 4}, 0.5) == 2.0);
    CHECK(fractile_value(std::vector<double>{7}, 0.3) == 7.0);
    // rank ceil(0.75 * 5) = 4 of sorted [1,3,5,7,9]
    CHECK(fractile_value(std::vector<double>{5, 1, 9, 3, 7}, 0.75) == 7.0);
}

TEST_CASE("fractile_value rejects bad input") {
    CHECK_THROWS_AS(fractile_value(std::vector<double>{}, 0.5), validation_error);
    CHECK_THROWS_AS(fractile_value(std::vector<double>{1.0}, 0.0), validation_error);
    CHECK_THROWS_AS(fractile_value(std::vector<double>{1.0}, 1.0), validation_error);
    CHECK_THROWS_AS(fractile_value(std::vector<double>{1.0}, -0.1), validation_error);
}

TEST_CASE("fractile_value is an order statistic and bounds the strict-below count") {
    SplitRng rng(77);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rng.uniform_index(40);
        std::vector<double> values(n);
        // small integer support provokes ties
        for (double& v : values) v = static_cast<double>(rng.uniform_index(8));
        const double beta = 0.01 + 0.98 * rng.next_double();
        const double fv = fractile_value(values, beta);
        CHECK(std::count(values.begin(), values.end(), fv) > 0);
        const auto below = static_cast<std::size_t>(
            std::count_if(values.begin(), values.end(), [&](double v) { return v < fv; }));
        CHECK(below <= static_cast<std::size_t>(std::ceil(beta * static_cast<double>(n))));
    }
}

TEST_CASE("euclidean_distance basics") {
    const std::vector<double> a{1.0, 2.0, 3.0};
    CHECK(euclidean_distance(a, a) == 0.0);
    CHECK(euclidean_distance(std::vector<double>{0.0, 0.0}, std::vector<double>{3.0, 4.0}) ==
          5.0);
    CHECK_THROWS_AS(euclidean_distance(a, std::vector<double>{1.0}), validation_error);
}

TEST_CASE("euclidean distance of binary vectors is the square root of the hamming distance") {
    SplitRng rng(55);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t d = 1 + rng.uniform_index(60);
        std::vector<double> a(d), b(d);
        std::size_t h = 0;
        for (std::size_t i = 0; i < d; ++i) {
            a[i] = static_cast<double>(rng.uniform_index(2));
            b[i] = static_cast<double>(rng.uniform_index(2));
            if (a[i] != b[i]) ++h;
        }
        CHECK(euclidean_distance(a, b) ==
              doctest::Approx(std::sqrt(static_cast<double>(h))).epsilon(1e-12));
    }
}

TEST_CASE("distances survive an orthonormal change of basis") {
    SplitRng rng(91);
    const std::size_t d = 6;
    const auto rot = random_rotation(d, rng);
    for (int rep = 0; rep < 30; ++rep) {
        std::vector<double> a(d), b(d);
        for (double& v : a) v = rng.next_gaussian();
        for (double& v : b) v = rng.next_gaussian();
        const double before = euclidean_distance(a, b);
        const double after = euclidean_distance(rotate_by(rot, a), rotate_by(rot, b));
        CHECK(after == doctest::Approx(before).epsilon(1e-9));
    }
}
