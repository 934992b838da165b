#include "rpt/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rpt/error.hpp"
#include "rpt/linalg.hpp"

namespace rpt {

namespace {

constexpr double kPi = 3.14159265358979323846;

double ratio_or_one(double numer, double denom) {
    return denom == 0.0 ? 1.0 : numer / denom;
}

}  // namespace

NeighborOrdering neighbor_ordering(const Dataset& data, std::span<const double> q) {
    if (q.size() != data.dim())
        throw validation_error("neighbor_ordering: query dimension mismatch");
    const std::size_t n = data.size();
    NeighborOrdering out;
    out.indices.resize(n);
    out.distances.resize(n);
    std::iota(out.indices.begin(), out.indices.end(), std::uint64_t{0});
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) dist[i] = euclidean_distance(q, data.point(i));
    std::sort(out.indices.begin(), out.indices.end(),
              [&](std::uint64_t a, std::uint64_t b) {
                  if (dist[a] != dist[b]) return dist[a] < dist[b];
                  return a < b;
              });
    for (std::size_t r = 0; r < n; ++r) out.distances[r] = dist[out.indices[r]];
    return out;
}

double collinearity(std::span<const double> q, std::span<const double> x,
                    std::span<const double> y) {
    if (q.size() != x.size() || x.size() != y.size())
        throw validation_error("collinearity: dimension mismatch");
    const std::size_t d = q.size();
    std::vector<double> qx(d), yx(d);
    for (std::size_t i = 0; i < d; ++i) {
        qx[i] = q[i] - x[i];
        yx[i] = y[i] - x[i];
    }
    const double nqx = std::sqrt(dot(qx, qx));
    const double nyx = std::sqrt(dot(yx, yx));
    if (nqx == 0.0 || nyx == 0.0)
        throw validation_error("collinearity: degenerate configuration (x = q or y = x)");
    const double c = std::abs(dot(qx, yx)) / (nqx * nyx);
    return std::clamp(c, 0.0, 1.0);
}

double three_point_probability(std::span<const double> q, std::span<const double> x,
                               std::span<const double> y) {
    const double dqx = euclidean_distance(q, x);
    const double dqy = euclidean_distance(q, y);
    if (dqx == 0.0) throw validation_error("three_point_probability: x coincides with q");
    if (euclidean_distance(y, x) == 0.0)
        throw validation_error("three_point_probability: y coincides with x");
    if (dqx > dqy)
        throw validation_error(
            "three_point_probability: requires |q-x| <= |q-y| (x must be the nearer point)");
    const double c = collinearity(q, x, y);
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double arg = std::clamp((dqx / dqy) * s, -1.0, 1.0);
    return std::asin(arg) / kPi;
}

double phi(const NeighborOrdering& ordering, std::size_t m) {
    const std::size_t n = ordering.size();
    if (m < 2 || m > n)
        throw validation_error("phi: m must lie in [2, n], got m=" + std::to_string(m) +
                               ", n=" + std::to_string(n));
    const double d1 = ordering.distances[0];
    double sum = 0.0;
    for (std::size_t r = 1; r < m; ++r) sum += ratio_or_one(d1, ordering.distances[r]);
    return sum / static_cast<double>(m);
}

double phi_k(const NeighborOrdering& ordering, std::size_t k, std::size_t m) {
    const std::size_t n = ordering.size();
    if (k < 1) throw validation_error("phi_k: k must be >= 1");
    if (k >= m || m > n)
        throw validation_error("phi_k: requires 1 <= k < m <= n, got k=" +
                               std::to_string(k) + ", m=" + std::to_string(m) +
                               ", n=" + std::to_string(n));
    double near = 0.0;
    for (std::size_t r = 0; r < k; ++r) near += ordering.distances[r];
    near /= static_cast<double>(k);
    double sum = 0.0;
    for (std::size_t r = k; r < m; ++r) sum += ratio_or_one(near, ordering.distances[r]);
    return sum / static_cast<double>(m);
}

double separated_fraction_bound(const NeighborOrdering& ordering, std::size_t m) {
    return 0.5 * phi(ordering, m);
}

double separation_probability_bound(const NeighborOrdering& ordering, std::size_t m,
                                    double alpha, std::size_t k) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw validation_error("separation_probability_bound: alpha must lie in (0, 1)");
    if (k < 1) throw validation_error("separation_probability_bound: k must be >= 1");
    const double md = static_cast<double>(m);
    if (!(static_cast<double>(k) < alpha * md + 1.0))
        throw validation_error("separation_probability_bound: requires k < alpha*m + 1");
    double raw;
    if (k == 1) {
        raw = phi(ordering, m) / (2.0 * alpha);
    } else {
        const double denom = alpha - static_cast<double>(k - 1) / md;
        raw = static_cast<double>(k) / (2.0 * denom) * phi_k(ordering, k, m);
    }
    return std::min(1.0, raw);
}

PotentialProfile potential_profile(const NeighborOrdering& ordering,
                                   std::vector<std::size_t> m_grid, std::size_t k) {
    if (m_grid.empty()) throw validation_error("potential_profile: empty m grid");
    for (std::size_t i = 1; i < m_grid.size(); ++i)
        if (m_grid[i] <= m_grid[i - 1])
            throw validation_error("potential_profile: m grid must be strictly increasing");
    PotentialProfile profile;
    profile.k = k;
    profile.values.reserve(m_grid.size());
    for (std::size_t m : m_grid)
        profile.values.push_back(k == 1 ? phi(ordering, m) : phi_k(ordering, k, m));
    profile.m_grid = std::move(m_grid);
    return profile;
}

std::vector<std::size_t> level_m_grid(std::size_t n, std::size_t n_o, double beta) {
    if (n == 0) throw validation_error("level_m_grid: n must be >= 1");
    if (n_o == 0) throw validation_error("level_m_grid: n_o must be >= 1");
    if (!(beta > 0.0 && beta < 1.0))
        throw validation_error("level_m_grid: beta must lie in (0, 1)");
    std::vector<std::size_t> levels;
    double x = static_cast<double>(n);
    std::size_t m = n;
    levels.push_back(std::max<std::size_t>(2, m));
    while (m > n_o) {
        x *= beta;
        m = static_cast<std::size_t>(std::floor(x + 1e-9));
        levels.push_back(std::max<std::size_t>(2, m));
    }
    return levels;
}

PotentialProfile profile_for_levels(const NeighborOrdering& ordering, std::size_t n_o,
                                    double beta, std::size_t k) {
    std::vector<std::size_t> grid = level_m_grid(ordering.size(), n_o, beta);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    // phi_{k,m} needs m > k; drop grid entries the k-NN variant cannot evaluate.
    std::erase_if(grid, [&](std::size_t m) { return m <= k; });
    if (grid.empty())
        throw validation_error("profile_for_levels: every level is at or below k");
    return potential_profile(ordering, std::move(grid), k);
}

}  // namespace rpt
