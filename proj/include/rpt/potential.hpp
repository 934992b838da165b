#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rpt/dataset.hpp"

namespace rpt {

// Dataset indices reordered by increasing distance from a query, ties broken
// by index so the ordering is deterministic.
struct NeighborOrdering {
    std::vector<std::uint64_t> indices;
    std::vector<double> distances;  // nondecreasing, distances[r] = d(query, indices[r])

    std::size_t size() const { return indices.size(); }
};

NeighborOrdering neighbor_ordering(const Dataset& data, std::span<const double> q);

// coll(q, x, y) = |(q-x).(y-x)| / (|q-x| |y-x|), in [0, 1]. 1 iff the three
// points are collinear, 0 iff (q-x) is orthogonal to (y-x).
double collinearity(std::span<const double> q, std::span<const double> x,
                    std::span<const double> y);

// Exact probability, over a direction U uniform on the unit sphere, that
// y.U falls strictly between q.U and x.U. Requires |q-x| <= |q-y|, x != q,
// y != x. Always in [0, 1/2].
double three_point_probability(std::span<const double> q, std::span<const double> x,
                               std::span<const double> y);

// phi_m = (1/m) * sum_{i=2..m} d(q, x_(1)) / d(q, x_(i)). A zero distance at
// rank i >= 2 (a duplicate of the query beyond the nearest point) contributes
// ratio 1, its supremum. Requires 2 <= m <= n.
double phi(const NeighborOrdering& ordering, std::size_t m);

// phi_{k,m} = (1/m) * sum_{i=k+1..m} (mean of the k nearest distances) /
// d(q, x_(i)). Reduces to phi for k = 1. Requires 1 <= k < m <= n.
double phi_k(const NeighborOrdering& ordering, std::size_t k, std::size_t m);

// Upper bound on the expected fraction of the m nearest points whose
// projections fall between the query and its nearest neighbor: phi_m / 2.
double separated_fraction_bound(const NeighborOrdering& ordering, std::size_t m);

// Upper bound on the probability that, under a random projection, at least
// an alpha fraction of the m nearest points falls between the query and one
// of its k nearest neighbors. Clamped to <= 1. Requires k < alpha * m + 1.
double separation_probability_bound(const NeighborOrdering& ordering, std::size_t m,
                                    double alpha, std::size_t k);

// phi_m (or phi_{k,m}) evaluated over a grid of m values for one query.
struct PotentialProfile {
    std::size_t k = 1;
    std::vector<std::size_t> m_grid;  // strictly increasing, within [2, n]
    std::vector<double> values;       // each in [0, 1]
};

PotentialProfile potential_profile(const NeighborOrdering& ordering,
                                   std::vector<std::size_t> m_grid, std::size_t k = 1);

// Cell sizes along a root-to-leaf path when each level keeps a beta fraction
// of its parent: m_i = floor(beta^i * n) for i = 0..l, where l is the first
// level at or below the leaf capacity n_o. Values are clamped to >= 2.
std::vector<std::size_t> level_m_grid(std::size_t n, std::size_t n_o, double beta);

// Profile over the deduplicated level_m_grid, suitable for the failure-bound
// calculators.
PotentialProfile profile_for_levels(const NeighborOrdering& ordering, std::size_t n_o,
                                    double beta, std::size_t k = 1);

}  // namespace rpt
