#include "rpt/tree.hpp"

#include <algorithm>
#include <cmath>

#include "rpt/error.hpp"
#include "rpt/linalg.hpp"
#include "rpt/rng.hpp"

namespace rpt {

const char* tree_kind_name(TreeKind kind) {
    switch (kind) {
        case TreeKind::rp: return "rp";
        case TreeKind::spill: return "spill";
        case TreeKind::virtual_spill: return "virtual-spill";
    }
    return "unknown";
}

TreeKind tree_kind_from_name(const std::string& name) {
    if (name == "rp") return TreeKind::rp;
    if (name == "spill") return TreeKind::spill;
    if (name == "virtual-spill" || name == "virtual_spill") return TreeKind::virtual_spill;
    throw validation_error("unknown tree kind: " + name);
}

namespace {

constexpr int kMaxSplitAttempts = 8;

struct Builder {
    const Dataset& data;
    TreeKind kind;
    std::uint32_t n_o;
    double alpha;

    std::unique_ptr<TreeNode> build(std::vector<std::uint64_t> idx, SplitRng rng) const {
        const std::size_t m = idx.size();
        if (m <= n_o) return make_leaf(std::move(idx));

        std::vector<double> proj(m);
        for (int attempt = 0; attempt < kMaxSplitAttempts; ++attempt) {
            SplitRule rule;
            rule.direction = random_unit_direction(data.dim(), rng);
            for (std::size_t i = 0; i < m; ++i)
                proj[i] = dot(data.point(idx[i]), rule.direction);

            std::vector<std::uint64_t> left_idx, right_idx;
            if (kind == TreeKind::rp) {
                const double beta = 0.25 + 0.5 * rng.next_double();
                const double v = fractile_value(proj, beta);
                rule.median = rule.low = rule.high = v;
                rule.perturbed = v;
                for (std::size_t i = 0; i < m; ++i)
                    (proj[i] < v ? left_idx : right_idx).push_back(idx[i]);
            } else {
                rule.median = fractile_value(proj, 0.5);
                rule.low = fractile_value(proj, 0.5 - alpha);
                rule.high = fractile_value(proj, 0.5 + alpha);
                if (kind == TreeKind::spill) {
                    for (std::size_t i = 0; i < m; ++i) {
                        if (proj[i] < rule.high) left_idx.push_back(idx[i]);
                        if (proj[i] >= rule.low) right_idx.push_back(idx[i]);
                    }
                } else {
                    for (std::size_t i = 0; i < m; ++i)
                        (proj[i] < rule.median ? left_idx : right_idx).push_back(idx[i]);
                }
            }

            // A split is usable only if both children are nonempty and
            // strictly smaller than the parent; otherwise (duplicate-heavy
            // projections) redraw the direction.
            if (left_idx.empty() || right_idx.empty() || left_idx.size() >= m ||
                right_idx.size() >= m)
                continue;

            auto node = std::make_unique<TreeNode>();
            node->rule = std::move(rule);
            node->left = build(std::move(left_idx), rng.child(0));
            node->right = build(std::move(right_idx), rng.child(1));
            return node;
        }
        // Separation is impossible (e.g. all points identical): keep the
        // node as an oversized leaf.
        return make_leaf(std::move(idx));
    }

    static std::unique_ptr<TreeNode> make_leaf(std::vector<std::uint64_t> idx) {
        auto node = std::make_unique<TreeNode>();
        node->indices = std::move(idx);
        return node;
    }
};

PartitionTree build_tree(const Dataset& data, TreeKind kind, std::uint32_t n_o, double alpha,
                         std::uint64_t seed) {
    if (n_o == 0) throw validation_error("build: leaf capacity n_o must be >= 1");
    if (kind != TreeKind::rp && !(alpha > 0.0 && alpha < 0.5))
        throw validation_error("build: alpha must lie in (0, 1/2)");

    PartitionTree tree;
    tree.kind = kind;
    tree.alpha = kind == TreeKind::rp ? 0.0 : alpha;
    tree.leaf_capacity = n_o;
    tree.seed = seed;
    tree.n = data.size();
    tree.d = static_cast<std::uint32_t>(data.dim());
    tree.dataset_ref = data.kind_tag();

    std::vector<std::uint64_t> all(data.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    Builder builder{data, kind, n_o, alpha};
    tree.root = builder.build(std::move(all), SplitRng(seed));
    return tree;
}

void collect_leaves(const TreeNode* node, std::span<const double> q,
                    std::vector<const TreeNode*>& out) {
    if (node->is_leaf()) {
        out.push_back(node);
        return;
    }
    const double p = dot(q, node->rule.direction);
    if (p < node->rule.high) collect_leaves(node->left.get(), q, out);
    if (p >= node->rule.low) collect_leaves(node->right.get(), q, out);
}

}  // namespace

PartitionTree build_rp_tree(const Dataset& data, std::uint32_t n_o, std::uint64_t seed) {
    return build_tree(data, TreeKind::rp, n_o, 0.0, seed);
}

PartitionTree build_spill_tree(const Dataset& data, std::uint32_t n_o, double alpha,
                               std::uint64_t seed) {
    return build_tree(data, TreeKind::spill, n_o, alpha, seed);
}

PartitionTree build_virtual_spill_tree(const Dataset& data, std::uint32_t n_o, double alpha,
                                       std::uint64_t seed) {
    return build_tree(data, TreeKind::virtual_spill, n_o, alpha, seed);
}

QueryResult query(const PartitionTree& tree, const Dataset& data, std::span<const double> q,
                  std::size_t k) {
    if (k == 0) throw validation_error("query: k must be >= 1");
    if (q.size() != tree.d) throw validation_error("query: query dimension mismatch");
    if (data.size() != tree.n || data.dim() != tree.d)
        throw validation_error("query: dataset does not match the indexed one");
    if (tree.root == nullptr) throw validation_error("query: empty tree");

    QueryResult result;
    std::vector<const TreeNode*> leaves;
    if (tree.kind == TreeKind::virtual_spill) {
        collect_leaves(tree.root.get(), q, leaves);
    } else {
        const TreeNode* node = tree.root.get();
        while (!node->is_leaf()) {
            const double p = dot(q, node->rule.direction);
            const double threshold =
                tree.kind == TreeKind::rp ? *node->rule.perturbed : node->rule.median;
            node = p < threshold ? node->left.get() : node->right.get();
        }
        leaves.push_back(node);
    }

    std::vector<std::pair<double, std::uint64_t>> candidates;
    for (const TreeNode* leaf : leaves) {
        for (std::uint64_t idx : leaf->indices)
            candidates.emplace_back(euclidean_distance(q, data.point(idx)), idx);
    }
    result.leaves_visited = leaves.size();
    result.points_scanned = candidates.size();

    const std::size_t take = std::min(k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + take, candidates.end());
    result.indices.reserve(take);
    result.distances.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        result.distances.push_back(candidates[i].first);
        result.indices.push_back(candidates[i].second);
    }
    result.short_count = take < k;
    return result;
}

TreeStats tree_stats(const PartitionTree& tree) {
    TreeStats stats;
    if (tree.root == nullptr) return stats;

    struct Walker {
        TreeStats& stats;
        void walk(const TreeNode* node, std::size_t depth) {
            if (node->is_leaf()) {
                stats.depth = std::max(stats.depth, depth);
                stats.leaf_count += 1;
                stats.stored_indices += node->indices.size();
                stats.max_leaf_size = std::max(stats.max_leaf_size, node->indices.size());
                return;
            }
            walk(node->left.get(), depth + 1);
            walk(node->right.get(), depth + 1);
        }
    } walker{stats};
    walker.walk(tree.root.get(), 0);
    return stats;
}

}  // namespace rpt
