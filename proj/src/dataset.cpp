#include "rpt/dataset.hpp"

#include <cmath>

#include "rpt/error.hpp"
#include "rpt/linalg.hpp"

namespace rpt {

Dataset::Dataset(std::vector<double> points, std::size_t n, std::size_t d,
                 std::string kind_tag, std::string provenance)
    : points_(std::move(points)),
      n_(n),
      d_(d),
      kind_tag_(std::move(kind_tag)),
      provenance_(std::move(provenance)) {
    if (n_ == 0) throw validation_error("Dataset: need at least one point");
    if (d_ == 0) throw validation_error("Dataset: dimension must be >= 1");
    if (points_.size() != n_ * d_)
        throw validation_error("Dataset: expected " + std::to_string(n_ * d_) +
                               " entries, got " + std::to_string(points_.size()));
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i]))
            throw validation_error("Dataset: non-finite entry at row " +
                                   std::to_string(i / d_) + ", column " +
                                   std::to_string(i % d_));
    }
}

void Dataset::set_labels(std::vector<std::uint32_t> labels) {
    if (!labels.empty() && labels.size() != n_)
        throw validation_error("Dataset: label count does not match point count");
    labels_ = std::move(labels);
}

std::vector<double> Dataset::projections(std::span<const double> u) const {
    return project_rows(points_, d_, u);
}

}  // namespace rpt
