#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

#include "planetgen/vec3.hpp"

namespace planetgen {

// Face ids: 0 = +X, 1 = −X, 2 = +Y, 3 = −Y, 4 = +Z, 5 = −Z. On each face the
// (u, v) axes are chosen so that u_axis × v_axis is the outward face normal:
//   +X: (+Y, +Z)   −X: (+Z, +Y)
//   +Y: (+Z, +X)   −Y: (+X, +Z)
//   +Z: (+X, +Y)   −Z: (+Y, +X)
inline constexpr int kFaceCount = 6;

struct FaceAxes {
  Vec3 normal;
  Vec3 u_axis;
  Vec3 v_axis;
};

const FaceAxes& face_axes(int face);

/// Point on the cube surface for face-local coordinates s, t ∈ [−1, 1].
/// Components are assembled per axis, so the same surface point reached from
/// two faces has bit-identical coordinates.
Vec3 cube_point(int face, double s, double t);

Vec3 face_uv_to_sphere(int face, double u, double v);

struct FaceUv {
  int face = 0;
  double u = 0.0;
  double v = 0.0;
};

/// Inverse of face_uv_to_sphere. The face is the dominant |component|, ties
/// going to the lower face id. Throws DomainError for zero or non-unit input.
FaceUv sphere_to_face_uv(const Vec3& p);

/// Unit direction of lattice vertex (ku, kv) on a face split into n cells per
/// side. Used for tile vertices: coordinates are (2k − n) / n, which mirror
/// exactly across shared face edges.
Vec3 lattice_direction(int face, std::int64_t ku, std::int64_t kv, std::int64_t n);

/// Edge of a quad. North is +v (y + 1), East is +u (x + 1).
enum class Edge : int { north = 0, east = 1, south = 2, west = 3 };
inline constexpr std::array<Edge, 4> kEdges{Edge::north, Edge::east, Edge::south, Edge::west};

constexpr std::uint8_t edge_bit(Edge e) { return static_cast<std::uint8_t>(1u << static_cast<int>(e)); }

inline constexpr int kMaxSupportedDepth = 28;

struct NodeId {
  std::uint8_t face = 0;
  std::uint8_t depth = 0;
  std::uint32_t x = 0;
  std::uint32_t y = 0;

  constexpr auto operator<=>(const NodeId&) const = default;

  /// Dense key: face(3) | depth(5) | x(28) | y(28).
  constexpr std::uint64_t key() const {
    return (std::uint64_t{face} << 61) | (std::uint64_t{depth} << 56) |
           (std::uint64_t{x} << 28) | std::uint64_t{y};
  }
  static constexpr NodeId from_key(std::uint64_t k) {
    return NodeId{static_cast<std::uint8_t>(k >> 61), static_cast<std::uint8_t>((k >> 56) & 0x1f),
                  static_cast<std::uint32_t>((k >> 28) & 0xfffffff),
                  static_cast<std::uint32_t>(k & 0xfffffff)};
  }

  bool is_root() const { return depth == 0; }
  NodeId parent() const;
  NodeId child(int dx, int dy) const;
  std::array<NodeId, 4> children() const;
  std::uint32_t cells_per_side() const { return 1u << depth; }
};

struct NodeIdHash {
  std::size_t operator()(const NodeId& n) const noexcept { return static_cast<std::size_t>(n.key() * 0x9e3779b97f4a7c15ULL); }
};

bool is_valid(const NodeId& node);

/// Throws DomainError for an invalid address.
void require_valid(const NodeId& node);

/// "f{face}/d{depth}/{x}/{y}"
std::string to_string(const NodeId& node);
/// Inverse of to_string; throws DomainError on malformed input.
NodeId parse_node_id(const std::string& text);

/// (π/2) / 2^depth: angular extent of the node along a face axis.
double angular_size(const NodeId& node);

Vec3 center_direction(const NodeId& node);

/// Same-depth node across `edge`, possibly on an adjacent face.
NodeId neighbor(const NodeId& node, Edge edge);

/// Solid angle (steradians) covered by the node.
double solid_angle(const NodeId& node);

}  // namespace planetgen
