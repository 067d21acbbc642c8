#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "planetgen/quadsphere.hpp"
#include "planetgen/vec3.hpp"

namespace planetgen {

struct CameraState {
  Vec3 position;                        // planet-centered, meters
  Vec3 look_direction{0.0, 0.0, -1.0};  // informational
};

void validate(const CameraState& camera);

struct LodParams {
  double base_radius = 1.0e6;
  double max_relief = 0.0;  // upper bound on terrain displacement, meters
  double split_factor = 1.5;
  int max_depth = 12;
  double hysteresis = 1.2;

  bool operator==(const LodParams&) const = default;
};

void validate(const LodParams& params);

/// Stitch mask bit set for each edge whose neighbor leaf is one level coarser.
using StitchMask = std::uint8_t;

struct LodUpdate {
  std::vector<NodeId> added;
  std::vector<NodeId> removed;
  std::map<NodeId, StitchMask> stitch_masks;  // every current leaf

  bool empty() const { return added.empty() && removed.empty(); }
};

/// Leaf set of a quadtree forest over the six cube faces.
class QuadTree {
 public:
  /// The six face roots.
  QuadTree();

  /// Throws InvariantError unless the leaves partition the sphere and form a
  /// restricted tree.
  static QuadTree from_leaves(std::span<const NodeId> leaves);

  bool is_leaf(const NodeId& node) const { return leaves_.contains(node.key()); }
  std::size_t leaf_count() const { return leaves_.size(); }
  /// Sorted by address.
  std::vector<NodeId> leaves() const;
  int max_leaf_depth() const;

  /// The leaf equal to `node` or one of its ancestors; empty when the region
  /// of `node` is subdivided further.
  std::optional<NodeId> covering_leaf(const NodeId& node) const;

  StitchMask stitch_mask(const NodeId& leaf) const;
  std::map<NodeId, StitchMask> stitch_masks() const;

  /// Every pair of edge-adjacent leaves differs by at most one level.
  bool is_restricted() const;

  void split(const NodeId& leaf);
  void merge(const NodeId& parent);

 private:
  std::unordered_set<std::uint64_t> leaves_;
};

/// Distance from the camera to the nearest point of the node's bounding
/// sphere (zero inside). The sphere is centered at (R + relief/2) along the
/// node center and has radius (R + relief)·angular_size + relief/2, which
/// contains the displaced patch and every child's sphere.
double node_distance(const NodeId& node, const Vec3& camera, const LodParams& params);

/// angular_size · base_radius.
double node_arc_length(const NodeId& node, const LodParams& params);

bool should_split(const NodeId& node, const Vec3& camera, const LodParams& params);
bool should_merge(const NodeId& parent, const Vec3& camera, const LodParams& params);

/// Split to a fixed point, merge to a fixed point, then add the minimal
/// splits that restore the restricted property. Returns the leaf-set delta
/// and the stitch masks of every resulting leaf.
LodUpdate update_tree(QuadTree& tree, const CameraState& camera, const LodParams& params);

}  // namespace planetgen
