#include "planetgen/quadtree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "planetgen/errors.hpp"

namespace planetgen {

void validate(const CameraState& camera) {
  if (!is_finite(camera.position)) throw DomainError("camera position is not finite");
  if (length(camera.position) == 0.0) throw DomainError("camera position is at the planet center");
}

void validate(const LodParams& p) {
  if (!(p.base_radius > 0.0) || !std::isfinite(p.base_radius)) throw ConfigError("base_radius > 0");
  if (!(p.max_relief >= 0.0) || !std::isfinite(p.max_relief)) throw ConfigError("max_relief ≥ 0");
  if (!(p.split_factor > 0.0)) throw ConfigError("split_factor > 0");
  if (!(p.hysteresis > 1.0)) throw ConfigError("hysteresis > 1");
  if (p.max_depth < 0 || p.max_depth > kMaxSupportedDepth) throw ConfigError("max_depth in [0, 28]");
}

QuadTree::QuadTree() {
  for (std::uint8_t f = 0; f < kFaceCount; ++f) leaves_.insert(NodeId{f, 0, 0, 0}.key());
}

QuadTree QuadTree::from_leaves(std::span<const NodeId> leaves) {
  QuadTree tree;
  tree.leaves_.clear();
  int deepest = 0;
  for (const NodeId& n : leaves) {
    if (!is_valid(n)) throw InvariantError("invalid leaf address " + to_string(n));
    if (!tree.leaves_.insert(n.key()).second) throw InvariantError("duplicate leaf " + to_string(n));
    deepest = std::max<int>(deepest, n.depth);
  }
  std::array<std::uint64_t, kFaceCount> area{};
  for (const NodeId& n : leaves) {
    for (NodeId a = n; a.depth > 0;) {
      a = a.parent();
      if (tree.is_leaf(a)) throw InvariantError("leaf " + to_string(n) + " overlaps " + to_string(a));
    }
    area[n.face] += std::uint64_t{1} << (2 * (deepest - n.depth));
  }
  for (int f = 0; f < kFaceCount; ++f) {
    if (area[f] != (std::uint64_t{1} << (2 * deepest)))
      throw InvariantError("leaves do not cover face " + std::to_string(f));
  }
  if (!tree.is_restricted()) throw InvariantError("tree is not restricted");
  return tree;
}

std::vector<NodeId> QuadTree::leaves() const {
  std::vector<NodeId> out;
  out.reserve(leaves_.size());
  for (std::uint64_t k : leaves_) out.push_back(NodeId::from_key(k));
  std::sort(out.begin(), out.end());
  return out;
}

int QuadTree::max_leaf_depth() const {
  int d = 0;
  for (std::uint64_t k : leaves_) d = std::max<int>(d, NodeId::from_key(k).depth);
  return d;
}

std::optional<NodeId> QuadTree::covering_leaf(const NodeId& node) const {
  NodeId a = node;
  while (true) {
    if (is_leaf(a)) return a;
    if (a.depth == 0) return std::nullopt;
    a = a.parent();
  }
}

StitchMask QuadTree::stitch_mask(const NodeId& leaf) const {
  StitchMask mask = 0;
  if (leaf.depth == 0) return mask;
  for (Edge e : kEdges) {
    const auto cover = covering_leaf(neighbor(leaf, e));
    if (cover && cover->depth + 1 == leaf.depth) mask |= edge_bit(e);
  }
  return mask;
}

std::map<NodeId, StitchMask> QuadTree::stitch_masks() const {
  std::map<NodeId, StitchMask> out;
  for (std::uint64_t k : leaves_) {
    const NodeId n = NodeId::from_key(k);
    out.emplace(n, stitch_mask(n));
  }
  return out;
}

bool QuadTree::is_restricted() const {
  for (std::uint64_t k : leaves_) {
    const NodeId n = NodeId::from_key(k);
    if (n.depth < 2) continue;
    for (Edge e : kEdges) {
      const auto cover = covering_leaf(neighbor(n, e));
      if (cover && cover->depth + 1 < n.depth) return false;
    }
  }
  return true;
}

void QuadTree::split(const NodeId& leaf) {
  if (!leaves_.erase(leaf.key())) throw InvariantError("split of non-leaf " + to_string(leaf));
  for (const NodeId& c : leaf.children()) leaves_.insert(c.key());
}

void QuadTree::merge(const NodeId& parent) {
  const auto kids = parent.children();
  for (const NodeId& c : kids)
    if (!is_leaf(c)) throw InvariantError("merge of " + to_string(parent) + " with non-leaf children");
  for (const NodeId& c : kids) leaves_.erase(c.key());
  leaves_.insert(parent.key());
}

double node_arc_length(const NodeId& node, const LodParams& params) {
  return angular_size(node) * params.base_radius;
}

double node_distance(const NodeId& node, const Vec3& camera, const LodParams& params) {
  const double theta = angular_size(node);
  const double relief = params.max_relief;
  const Vec3 center = center_direction(node) * (params.base_radius + relief / 2.0);
  const double radius = (params.base_radius + relief) * theta + relief / 2.0;
  return std::max(0.0, length(camera - center) - radius);
}

bool should_split(const NodeId& node, const Vec3& camera, const LodParams& params) {
  return node.depth < params.max_depth &&
         node_distance(node, camera, params) < params.split_factor * node_arc_length(node, params);
}

bool should_merge(const NodeId& parent, const Vec3& camera, const LodParams& params) {
  return node_distance(parent, camera, params) >
         params.hysteresis * params.split_factor * node_arc_length(parent, params);
}

LodUpdate update_tree(QuadTree& tree, const CameraState& camera, const LodParams& params) {
  validate(camera);
  validate(params);
  const Vec3& eye = camera.position;
  const std::vector<NodeId> before = tree.leaves();

  std::deque<NodeId> work(before.begin(), before.end());
  while (!work.empty()) {
    const NodeId n = work.front();
    work.pop_front();
    if (!tree.is_leaf(n) || !should_split(n, eye, params)) continue;
    tree.split(n);
    for (const NodeId& c : n.children()) work.push_back(c);
  }

  // Deepest first so whole subtrees collapse in one pass.
  std::vector<NodeId> parents;
  for (const NodeId& n : tree.leaves())
    if (n.depth > 0) parents.push_back(n.parent());
  std::sort(parents.begin(), parents.end(),
            [](const NodeId& a, const NodeId& b) { return a.depth != b.depth ? a.depth > b.depth : a < b; });
  parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
  std::deque<NodeId> merge_work(parents.begin(), parents.end());
  while (!merge_work.empty()) {
    const NodeId p = merge_work.front();
    merge_work.pop_front();
    if (tree.is_leaf(p)) continue;
    const auto kids = p.children();
    if (!std::all_of(kids.begin(), kids.end(), [&](const NodeId& c) { return tree.is_leaf(c); })) continue;
    if (!should_merge(p, eye, params)) continue;
    tree.merge(p);
    if (p.depth > 0) merge_work.push_back(p.parent());
  }

  std::deque<NodeId> restrict_work;
  for (const NodeId& n : tree.leaves()) restrict_work.push_back(n);
  while (!restrict_work.empty()) {
    const NodeId n = restrict_work.front();
    restrict_work.pop_front();
    if (!tree.is_leaf(n) || n.depth < 2) continue;
    for (Edge e : kEdges) {
      const auto cover = tree.covering_leaf(neighbor(n, e));
      if (cover && cover->depth + 1 < n.depth) {
        tree.split(*cover);
        for (const NodeId& c : cover->children()) restrict_work.push_back(c);
        restrict_work.push_back(n);
        break;
      }
    }
  }

  LodUpdate update;
  const std::vector<NodeId> after = tree.leaves();
  std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                      std::back_inserter(update.added));
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                      std::back_inserter(update.removed));
  update.stitch_masks = tree.stitch_masks();
  return update;
}

}  // namespace planetgen
