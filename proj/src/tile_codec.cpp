#include "planetgen/tile_codec.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "planetgen/errors.hpp"

namespace planetgen {
namespace {

constexpr std::uint8_t kMagic[4] = {'P', 'T', 'I', 'L'};

std::size_t padded(std::size_t n) { return (n + 3) & ~std::size_t{3}; }

class Writer {
 public:
  explicit Writer(std::size_t reserve) { bytes_.reserve(reserve); }

  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u32(std::uint32_t v) { le(v, 4); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  void pad_to_4() {
    while (bytes_.size() % 4 != 0) bytes_.push_back(0);
  }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  void le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(le(8)); }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n)
      throw TileDecodeError(TileDecodeErrorKind::truncated, "tile payload truncated");
  }
  std::uint64_t le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t encoded_tile_size(std::size_t vertex_count, std::size_t index_count) {
  return padded(kTileHeaderSize + 24 + 24 * vertex_count + vertex_count) + 4 * index_count;
}

std::vector<std::uint8_t> encode_tile(const TileMesh& tile) {
  const std::size_t v = tile.positions.size();
  if (tile.normals.size() != v || tile.biomes.size() != v)
    throw InvariantError("encode_tile: per-vertex arrays differ in length");
  for (std::uint32_t i : tile.indices)
    if (i >= v) throw InvariantError("encode_tile: index out of range");
  for (std::uint8_t b : tile.biomes)
    if (b >= kBiomeCount) throw InvariantError("encode_tile: unknown biome id");

  Writer w(encoded_tile_size(v, tile.indices.size()));
  for (std::uint8_t c : kMagic) w.u8(c);
  w.u32(kTileFormatVersion);
  w.u8(tile.node.face);
  w.u8(tile.node.depth);
  w.u16(0);
  w.u32(tile.node.x);
  w.u32(tile.node.y);
  w.u32(tile.resolution);
  w.u32(static_cast<std::uint32_t>(v));
  w.u32(static_cast<std::uint32_t>(tile.indices.size()));
  w.f64(tile.center.x);
  w.f64(tile.center.y);
  w.f64(tile.center.z);
  for (const Vec3f& p : tile.positions) {
    w.f32(p.x);
    w.f32(p.y);
    w.f32(p.z);
  }
  for (const Vec3f& n : tile.normals) {
    w.f32(n.x);
    w.f32(n.y);
    w.f32(n.z);
  }
  for (std::uint8_t b : tile.biomes) w.u8(b);
  w.pad_to_4();
  for (std::uint32_t i : tile.indices) w.u32(i);
  return w.take();
}

TileMesh decode_tile(std::span<const std::uint8_t> bytes) {
  const std::size_t head = std::min<std::size_t>(bytes.size(), 4);
  if (!std::equal(bytes.begin(), bytes.begin() + head, std::begin(kMagic)))
    throw TileDecodeError(TileDecodeErrorKind::bad_magic, "tile payload does not start with PTIL");
  if (bytes.size() < kTileHeaderSize)
    throw TileDecodeError(TileDecodeErrorKind::truncated, "tile payload truncated");
  Reader r(bytes);
  r.skip(4);
  const std::uint32_t version = r.u32();
  if (version != kTileFormatVersion)
    throw TileDecodeError(TileDecodeErrorKind::version_mismatch,
                          "unsupported tile format version " + std::to_string(version));

  TileMesh tile;
  tile.node.face = r.u8();
  tile.node.depth = r.u8();
  r.u16();
  tile.node.x = r.u32();
  tile.node.y = r.u32();
  tile.resolution = r.u32();
  const std::uint32_t v = r.u32();
  const std::uint32_t count = r.u32();
  if (!is_valid(tile.node))
    throw TileDecodeError(TileDecodeErrorKind::malformed, "tile header carries an invalid node address");
  if (bytes.size() < encoded_tile_size(v, count))
    throw TileDecodeError(TileDecodeErrorKind::truncated, "tile payload truncated");
  if (bytes.size() > encoded_tile_size(v, count))
    throw TileDecodeError(TileDecodeErrorKind::malformed, "trailing bytes after tile payload");

  tile.center.x = r.f64();
  tile.center.y = r.f64();
  tile.center.z = r.f64();
  tile.positions.resize(v);
  for (Vec3f& p : tile.positions) {
    p.x = r.f32();
    p.y = r.f32();
    p.z = r.f32();
  }
  tile.normals.resize(v);
  for (Vec3f& n : tile.normals) {
    n.x = r.f32();
    n.y = r.f32();
    n.z = r.f32();
  }
  tile.biomes.resize(v);
  for (std::uint8_t& b : tile.biomes) {
    b = r.u8();
    if (b >= kBiomeCount) throw TileDecodeError(TileDecodeErrorKind::malformed, "unknown biome id in tile");
  }
  r.skip(padded(r.position()) - r.position());
  tile.indices.resize(count);
  for (std::uint32_t& i : tile.indices) {
    i = r.u32();
    if (i >= v) throw TileDecodeError(TileDecodeErrorKind::index_out_of_range, "tile index out of range");
  }
  return tile;
}

}  // namespace planetgen
