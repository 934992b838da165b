#include "rpt/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "rpt/error.hpp"

namespace rpt {

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw validation_error("dot: dimension mismatch (" + std::to_string(a.size()) +
                               " vs " + std::to_string(b.size()) + ")");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw validation_error("euclidean_distance: dimension mismatch (" +
                               std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                               ")");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return std::sqrt(s);
}

std::vector<double> random_unit_direction(std::size_t d, SplitRng& rng) {
    if (d == 0) throw validation_error("random_unit_direction: dimension must be >= 1");
    std::vector<double> u(d);
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            u[i] = rng.next_gaussian();
            norm2 += u[i] * u[i];
        }
    } while (norm2 < 1e-300);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : u) x *= inv;
    return u;
}

std::vector<double> project_rows(std::span<const double> rows, std::size_t d,
                                 std::span<const double> u) {
    if (d == 0 || u.size() != d || rows.size() % d != 0)
        throw validation_error("project_rows: dimension mismatch");
    const std::size_t n = rows.size() / d;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        const double* row = rows.data() + i * d;
        for (std::size_t j = 0; j < d; ++j) s += row[j] * u[j];
        out[i] = s;
    }
    return out;
}

double fractile_value(std::span<const double> values, double beta) {
    if (values.empty()) throw validation_error("fractile_value: empty input");
    if (!(beta > 0.0 && beta < 1.0))
        throw validation_error("fractile_value: beta must lie in (0, 1)");
    const std::size_t n = values.size();
    // The 1e-9 nudge keeps exact integer products (e.g. 0.1 * 30) from being
    // rounded up a rank by floating-point representation error.
    auto rank = static_cast<std::size_t>(std::ceil(beta * static_cast<double>(n) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, n);
    std::vector<double> work(values.begin(), values.end());
    std::nth_element(work.begin(), work.begin() + (rank - 1), work.end());
    return work[rank - 1];
}

}  // namespace rpt
