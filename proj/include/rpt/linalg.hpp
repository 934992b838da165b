#pragma once

#include <span>
#include <vector>

#include "rpt/rng.hpp"

namespace rpt {

double dot(std::span<const double> a, std::span<const double> b);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

// Uniform direction on the unit sphere S^{d-1}: d independent standard
// normals, normalized to unit length.
std::vector<double> random_unit_direction(std::size_t d, SplitRng& rng);

// Dot product of each row of a row-major n x d matrix with u.
std::vector<double> project_rows(std::span<const double> rows, std::size_t d,
                                 std::span<const double> u);

// Order statistic at rank ceil(beta * n), 1-indexed. Never interpolates: the
// result is always one of the input values, and splitting the input by
// strict `< result` sends at most ceil(beta * n) values to the low side.
double fractile_value(std::span<const double> values, double beta);

}  // namespace rpt
