#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "planetgen/quadtree.hpp"

namespace testing_support {

/// Depth of the leaf that covers `node`'s region, or nullopt when the region
/// is split below `node`. Written against is_leaf only.
inline std::optional<int> cover_depth(const planetgen::QuadTree& tree, planetgen::NodeId node) {
  for (;;) {
    if (tree.is_leaf(node)) return node.depth;
    if (node.depth == 0) return std::nullopt;
    node = node.parent();
  }
}


/// First violation of the restricted property, or an empty string. For every
/// leaf and edge: the same-depth neighbor is a leaf, is covered by its
/// parent leaf, or is split once with leaf children along the shared edge.
inline std::string restriction_violation(const planetgen::QuadTree& tree) {
  using namespace planetgen;
  for (const NodeId& n : tree.leaves()) {
    for (Edge e : kEdges) {
      const NodeId m = neighbor(n, e);
      const auto cover = cover_depth(tree, m);
      if (cover) {
        if (*cover + 1 < n.depth) return "leaf " + to_string(n) + " borders a leaf two levels up";
        continue;
      }
      for (const NodeId& c : m.children()) {
        bool touches = false;
        for (Edge e2 : kEdges) touches = touches || neighbor(c, e2).parent() == n;
        if (touches && !tree.is_leaf(c))
          return "leaf " + to_string(n) + " borders leaves two levels down";
      }
    }
  }
  return {};
}

/// Leaves are disjoint and their solid angles add up to the sphere.
inline bool partitions_sphere(const planetgen::QuadTree& tree) {
  using namespace planetgen;
  double total = 0.0;
  for (const NodeId& n : tree.leaves()) {
    for (NodeId a = n; a.depth > 0;) {
      a = a.parent();
      if (tree.is_leaf(a)) return false;
    }
    total += solid_angle(n);
  }
  return std::abs(total - 4.0 * std::numbers::pi) < 1e-9;
}

/// Stitch bit set iff the neighbor region is covered by a leaf exactly one
/// level coarser.
inline bool masks_match_tree(const planetgen::QuadTree& tree,
                             const std::map<planetgen::NodeId, planetgen::StitchMask>& masks) {
  using namespace planetgen;
  if (masks.size() != tree.leaf_count()) return false;
  for (const auto& [n, mask] : masks) {
    if (!tree.is_leaf(n)) return false;
    for (Edge e : kEdges) {
      const auto cover = cover_depth(tree, neighbor(n, e));
      const bool coarser = cover && *cover + 1 == n.depth;
      if (coarser != ((mask & edge_bit(e)) != 0)) return false;
    }
  }
  return true;
}

}  // namespace testing_support
