#pragma once

#include <cstdint>
#include <vector>

namespace rpt {

// Result of a k-NN query plus the work accounting used by the evaluation
// drivers. Indices are distinct; distances are sorted ascending and ties are
// broken by index. If fewer than k candidates were available, everything
// found is returned and short_count is set; results are never padded.
struct QueryResult {
    std::vector<std::uint64_t> indices;
    std::vector<double> distances;
    std::size_t leaves_visited = 0;
    std::size_t points_scanned = 0;
    bool short_count = false;
};

}  // namespace rpt
