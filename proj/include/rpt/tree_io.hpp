#pragma once

#include <string>

#include "rpt/tree.hpp"

namespace rpt {

// Versioned binary tree format ("PTRF"), little-endian throughout:
//
//   magic   4 bytes  "PTRF"
//   version u16      (currently 1)
//   kind    u8       0 = rp, 1 = spill, 2 = virtual-spill
//   n       u64      indexed point count
//   d       u32      dimension
//   n_o     u32      leaf capacity
//   alpha   f64      overlap fraction (0 for rp)
//   seed    u64      build seed
//
// followed by the node stream in preorder:
//
//   tag u8: 0 = internal, 1 = leaf
//   internal: direction d x f64, median f64, low f64, high f64,
//             has_perturbed u8, perturbed f64 (present iff has_perturbed = 1)
//   leaf:     count u64, then count x u64 point indices
//
// Serialization is deterministic; a round trip reproduces the bytes exactly.
std::string serialize_tree(const PartitionTree& tree);
PartitionTree deserialize_tree(std::string_view bytes);

void save_tree(const PartitionTree& tree, const std::string& path);
PartitionTree load_tree(const std::string& path);

}  // namespace rpt
