#include "planetgen/quadsphere.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "planetgen/errors.hpp"

namespace planetgen {
namespace {

struct IVec3 {
  std::int64_t x = 0, y = 0, z = 0;
  constexpr IVec3 operator+(const IVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr IVec3 operator-(const IVec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr IVec3 operator*(std::int64_t s) const { return {x * s, y * s, z * s}; }
  constexpr bool operator==(const IVec3&) const = default;
};

constexpr std::int64_t idot(const IVec3& a, const IVec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

struct IFace {
  IVec3 normal, u_axis, v_axis;
};

constexpr std::array<IFace, kFaceCount> kIFaces{{
    {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
    {{-1, 0, 0}, {0, 0, 1}, {0, 1, 0}},
    {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}},
    {{0, -1, 0}, {1, 0, 0}, {0, 0, 1}},
    {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}},
    {{0, 0, -1}, {0, 1, 0}, {1, 0, 0}},
}};

Vec3 to_vec(const IVec3& v) {
  return {static_cast<double>(v.x), static_cast<double>(v.y), static_cast<double>(v.z)};
}

const std::array<FaceAxes, kFaceCount> kFaces = [] {
  std::array<FaceAxes, kFaceCount> faces{};
  for (int f = 0; f < kFaceCount; ++f)
    faces[f] = {to_vec(kIFaces[f].normal), to_vec(kIFaces[f].u_axis), to_vec(kIFaces[f].v_axis)};
  return faces;
}();

int face_with_normal(const IVec3& n) {
  for (int f = 0; f < kFaceCount; ++f)
    if (kIFaces[f].normal == n) return f;
  throw InvariantError("no cube face with the requested normal");
}

// Each of n, a, b is a signed unit axis, so every output component is exactly
// one of ±1, ±s, ±t.
double axis_component(double n, double a, double b, double s, double t) {
  if (n != 0.0) return n;
  if (a != 0.0) return a * s;
  return b * t;
}

double face_patch_integral(double s, double t) { return std::atan(s * t / std::sqrt(1.0 + s * s + t * t)); }

}  // namespace

const FaceAxes& face_axes(int face) {
  if (face < 0 || face >= kFaceCount) throw DomainError("face id outside 0..5");
  return kFaces[face];
}

Vec3 cube_point(int face, double s, double t) {
  const FaceAxes& f = face_axes(face);
  return {axis_component(f.normal.x, f.u_axis.x, f.v_axis.x, s, t),
          axis_component(f.normal.y, f.u_axis.y, f.v_axis.y, s, t),
          axis_component(f.normal.z, f.u_axis.z, f.v_axis.z, s, t)};
}

Vec3 face_uv_to_sphere(int face, double u, double v) {
  if (face < 0 || face >= kFaceCount) throw DomainError("face id outside 0..5");
  if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) throw DomainError("face uv outside [0, 1]");
  return normalize(cube_point(face, 2.0 * u - 1.0, 2.0 * v - 1.0));
}

FaceUv sphere_to_face_uv(const Vec3& p) {
  if (!is_finite(p)) throw DomainError("sphere_to_face_uv: non-finite point");
  const double len = length(p);
  if (len == 0.0) throw DomainError("sphere_to_face_uv: zero vector");
  if (std::abs(len - 1.0) > 1e-9) throw DomainError("sphere_to_face_uv: point is not unit length");

  const double ax = std::abs(p.x), ay = std::abs(p.y), az = std::abs(p.z);
  int face;
  double major;
  if (ax >= ay && ax >= az) {
    face = p.x >= 0.0 ? 0 : 1;
    major = ax;
  } else if (ay >= az) {
    face = p.y >= 0.0 ? 2 : 3;
    major = ay;
  } else {
    face = p.z >= 0.0 ? 4 : 5;
    major = az;
  }
  const Vec3 c = p / major;
  const FaceAxes& axes = kFaces[face];
  const double s = dot(c, axes.u_axis);
  const double t = dot(c, axes.v_axis);
  return {face, std::clamp((s + 1.0) / 2.0, 0.0, 1.0), std::clamp((t + 1.0) / 2.0, 0.0, 1.0)};
}

Vec3 lattice_direction(int face, std::int64_t ku, std::int64_t kv, std::int64_t n) {
  const double dn = static_cast<double>(n);
  const double s = static_cast<double>(2 * ku - n) / dn;
  const double t = static_cast<double>(2 * kv - n) / dn;
  return normalize(cube_point(face, s, t));
}

NodeId NodeId::parent() const {
  if (depth == 0) throw DomainError("root node has no parent");
  return NodeId{face, static_cast<std::uint8_t>(depth - 1), x >> 1, y >> 1};
}

NodeId NodeId::child(int dx, int dy) const {
  return NodeId{face, static_cast<std::uint8_t>(depth + 1), 2 * x + static_cast<std::uint32_t>(dx),
                2 * y + static_cast<std::uint32_t>(dy)};
}

std::array<NodeId, 4> NodeId::children() const {
  return {child(0, 0), child(1, 0), child(0, 1), child(1, 1)};
}

bool is_valid(const NodeId& n) {
  if (n.face >= kFaceCount || n.depth > kMaxSupportedDepth) return false;
  const std::uint32_t cells = n.cells_per_side();
  return n.x < cells && n.y < cells;
}

void require_valid(const NodeId& node) {
  if (!is_valid(node)) throw DomainError("invalid quad node address " + to_string(node));
}

std::string to_string(const NodeId& n) {
  return "f" + std::to_string(n.face) + "/d" + std::to_string(n.depth) + "/" + std::to_string(n.x) +
         "/" + std::to_string(n.y);
}

NodeId parse_node_id(const std::string& text) {
  // f{face}/d{depth}/{x}/{y}
  std::array<std::uint32_t, 4> fields{};
  const char* p = text.data();
  const char* end = text.data() + text.size();
  auto expect = [&](char c) {
    if (p == end || *p != c) throw DomainError("malformed node address: " + text);
    ++p;
  };
  auto number = [&](std::uint32_t& out) {
    auto [next, ec] = std::from_chars(p, end, out);
    if (ec != std::errc{} || next == p) throw DomainError("malformed node address: " + text);
    p = next;
  };
  expect('f');
  number(fields[0]);
  expect('/');
  expect('d');
  number(fields[1]);
  expect('/');
  number(fields[2]);
  expect('/');
  number(fields[3]);
  if (p != end || fields[0] >= kFaceCount || fields[1] > kMaxSupportedDepth)
    throw DomainError("malformed node address: " + text);
  NodeId n{static_cast<std::uint8_t>(fields[0]), static_cast<std::uint8_t>(fields[1]), fields[2], fields[3]};
  require_valid(n);
  return n;
}

double angular_size(const NodeId& node) {
  return (std::numbers::pi / 2.0) / static_cast<double>(node.cells_per_side());
}

Vec3 center_direction(const NodeId& node) {
  const std::int64_t n = std::int64_t{2} << node.depth;
  return lattice_direction(node.face, 2 * std::int64_t{node.x} + 1, 2 * std::int64_t{node.y} + 1, n);
}

NodeId neighbor(const NodeId& node, Edge edge) {
  require_valid(node);
  const std::int64_t n = node.cells_per_side();
  std::int64_t x = node.x, y = node.y;
  switch (edge) {
    case Edge::north: ++y; break;
    case Edge::east: ++x; break;
    case Edge::south: --y; break;
    case Edge::west: --x; break;
  }
  if (x >= 0 && x < n && y >= 0 && y < n)
    return NodeId{node.face, node.depth, static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)};

  // Cell centers in half-cell units: the cube spans [−n, n] along every axis.
  // The stepped-off center lies one unit past the face; folding it over the
  // cube edge puts it one unit inside the adjacent face.
  const IFace& f = kIFaces[node.face];
  const std::int64_t s = 2 * x + 1 - n;
  const std::int64_t t = 2 * y + 1 - n;
  const IVec3 p = f.normal * n + f.u_axis * s + f.v_axis * t;
  const bool across_u = (x < 0 || x >= n);
  const IVec3& w = across_u ? f.u_axis : f.v_axis;
  const std::int64_t sign = (across_u ? s : t) > 0 ? 1 : -1;
  const IVec3 folded = p - w * sign - f.normal;
  const int g = face_with_normal(w * sign);
  const IFace& gf = kIFaces[g];
  const std::int64_t gx = (idot(folded, gf.u_axis) + n - 1) / 2;
  const std::int64_t gy = (idot(folded, gf.v_axis) + n - 1) / 2;
  return NodeId{static_cast<std::uint8_t>(g), node.depth, static_cast<std::uint32_t>(gx),
                static_cast<std::uint32_t>(gy)};
}

double solid_angle(const NodeId& node) {
  const double n = static_cast<double>(node.cells_per_side());
  const double s0 = 2.0 * node.x / n - 1.0, s1 = 2.0 * (node.x + 1) / n - 1.0;
  const double t0 = 2.0 * node.y / n - 1.0, t1 = 2.0 * (node.y + 1) / n - 1.0;
  return face_patch_integral(s1, t1) - face_patch_integral(s0, t1) - face_patch_integral(s1, t0) +
         face_patch_integral(s0, t0);
}

}  // namespace planetgen
