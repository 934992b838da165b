#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rpt/dataset.hpp"
#include "rpt/query_result.hpp"

namespace rpt {

enum class TreeKind : std::uint8_t { rp = 0, spill = 1, virtual_spill = 2 };

const char* tree_kind_name(TreeKind kind);
TreeKind tree_kind_from_name(const std::string& name);

// One node's split: a random unit direction plus the thresholds of the
// node's projected points. Spill-family nodes carry the median and the
// (1/2 - alpha) / (1/2 + alpha) fractile values (low <= median <= high);
// rp nodes carry the random beta-fractile value in `perturbed`.
struct SplitRule {
    std::vector<double> direction;
    double median = 0.0;
    double low = 0.0;
    double high = 0.0;
    std::optional<double> perturbed;
};

// Leaf iff left == nullptr; then `indices` holds the points stored there.
struct TreeNode {
    SplitRule rule;
    std::unique_ptr<TreeNode> left;
    std::unique_ptr<TreeNode> right;
    std::vector<std::uint64_t> indices;

    bool is_leaf() const { return left == nullptr; }
};

struct PartitionTree {
    TreeKind kind = TreeKind::rp;
    double alpha = 0.0;  // overlap fraction; 0 for rp trees
    std::uint32_t leaf_capacity = 1;
    std::uint64_t seed = 0;
    std::uint64_t n = 0;
    std::uint32_t d = 0;
    std::string dataset_ref;
    std::unique_ptr<TreeNode> root;
};

// Recursive construction until every leaf holds at most n_o points. Each
// node splits at a random fractile (beta uniform on [1/4, 3/4]) of the
// points projected onto a fresh random unit direction; points with
// projection strictly below the split value go left. Per-node randomness is
// derived from (seed, path from root), so rebuilding with the same seed
// reproduces the tree bit for bit.
PartitionTree build_rp_tree(const Dataset& data, std::uint32_t n_o, std::uint64_t seed);

// Overlapping splits for data: the left child receives projections strictly
// below the (1/2 + alpha) fractile value, the right child those at or above
// the (1/2 - alpha) fractile value, so a point may be stored in many leaves.
PartitionTree build_spill_tree(const Dataset& data, std::uint32_t n_o, double alpha,
                               std::uint64_t seed);

// Median splits for data (each point stored exactly once); every internal
// node also records the overlap thresholds used later to route queries into
// both children.
PartitionTree build_virtual_spill_tree(const Dataset& data, std::uint32_t n_o, double alpha,
                                       std::uint64_t seed);

// Defeatist search. rp: route by the perturbed split to one leaf. spill:
// route by the median to one leaf. virtual spill: descend into the left
// child iff q.U < high and into the right child iff q.U >= low (both when
// the projection falls in the overlap band), then scan the union of reached
// leaves. Returns the k nearest candidates found.
QueryResult query(const PartitionTree& tree, const Dataset& data, std::span<const double> q,
                  std::size_t k);

struct TreeStats {
    std::size_t depth = 0;
    std::size_t leaf_count = 0;
    std::size_t stored_indices = 0;
    std::size_t max_leaf_size = 0;
};

TreeStats tree_stats(const PartitionTree& tree);

}  // namespace rpt
