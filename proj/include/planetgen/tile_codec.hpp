#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "planetgen/mesh.hpp"

namespace planetgen {

// Little-endian "PTIL" layout:
//   magic "PTIL"(4) | version u32 | face u8 | depth u8 | pad u16 | x u32 | y u32
//   | resolution u32 | vertex_count u32 | index_count u32      (32 bytes)
//   | center f64×3                                              (24 bytes)
//   | positions f32×3·V | normals f32×3·V | biomes u8×V | pad to 4 | indices u32×I
inline constexpr std::uint32_t kTileFormatVersion = 1;
inline constexpr std::size_t kTileHeaderSize = 32;

enum class TileDecodeErrorKind { bad_magic, version_mismatch, truncated, index_out_of_range, malformed };

class TileDecodeError : public std::runtime_error {
 public:
  TileDecodeError(TileDecodeErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  TileDecodeErrorKind kind() const { return kind_; }

 private:
  TileDecodeErrorKind kind_;
};

std::size_t encoded_tile_size(std::size_t vertex_count, std::size_t index_count);

std::vector<std::uint8_t> encode_tile(const TileMesh& tile);
TileMesh decode_tile(std::span<const std::uint8_t> bytes);

}  // namespace planetgen
