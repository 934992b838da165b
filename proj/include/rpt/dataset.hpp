#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rpt {

// Row-major n x d point matrix plus provenance metadata. Entries are
// validated to be finite at construction; binary (0/1) data is stored the
// same way with entries 0.0 and 1.0.
class Dataset {
public:
    Dataset(std::vector<double> points, std::size_t n, std::size_t d,
            std::string kind_tag = "external", std::string provenance = "external");

    std::size_t size() const { return n_; }
    std::size_t dim() const { return d_; }

    std::span<const double> point(std::size_t i) const {
        return {points_.data() + i * d_, d_};
    }
    std::span<const double> raw() const { return points_; }

    const std::string& kind_tag() const { return kind_tag_; }
    const std::string& provenance() const { return provenance_; }

    // Per-point generator labels (e.g. topic ids); empty unless a generator
    // recorded them.
    const std::vector<std::uint32_t>& labels() const { return labels_; }
    void set_labels(std::vector<std::uint32_t> labels);

    std::vector<double> projections(std::span<const double> u) const;

private:
    std::vector<double> points_;
    std::size_t n_ = 0;
    std::size_t d_ = 0;
    std::string kind_tag_;
    std::string provenance_;
    std::vector<std::uint32_t> labels_;
};

}  // namespace rpt
