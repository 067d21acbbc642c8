#include <doctest.h>

#include <cstring>

#include "fields.hpp"
#include "planetgen/config.hpp"
#include "planetgen/errors.hpp"
#include "planetgen/tile_codec.hpp"
#include "random.hpp"

using namespace planetgen;

namespace {

template <typename T>
T read_le(const std::vector<std::uint8_t>& b, std::size_t at) {
  T v;
  std::memcpy(&v, b.data() + at, sizeof v);  // the build targets little-endian hosts
  return v;
}

std::size_t layout_size(std::size_t v, std::size_t i) {
  std::size_t n = 32 + 24 + 12 * v + 12 * v + v;
  n += (4 - n % 4) % 4;
  return n + 4 * i;
}

TileMesh random_mesh(Rng& rng) {
  TileMesh t;
  t.node = testing_support::random_node(rng, 0, 20);
  t.resolution = static_cast<std::uint32_t>(testing_support::random_int(rng, 1, 9));
  const std::size_t v = static_cast<std::size_t>(testing_support::random_int(rng, 1, 120));
  t.center = {rng.uniform(-1e7, 1e7), rng.uniform(-1e7, 1e7), rng.uniform(-1e7, 1e7)};
  for (std::size_t k = 0; k < v; ++k) {
    t.positions.push_back({static_cast<float>(rng.uniform(-1e5, 1e5)), static_cast<float>(rng.uniform(-1e5, 1e5)),
                           static_cast<float>(rng.uniform(-1e5, 1e5))});
    t.normals.push_back({static_cast<float>(rng.uniform(-1, 1)), static_cast<float>(rng.uniform(-1, 1)),
                         static_cast<float>(rng.uniform(-1, 1))});
    t.biomes.push_back(static_cast<std::uint8_t>(testing_support::random_int(rng, 0, 5)));
  }
  const int indices = 3 * testing_support::random_int(rng, 0, 50);
  for (int k = 0; k < indices; ++k)
    t.indices.push_back(static_cast<std::uint32_t>(testing_support::random_int(rng, 0, static_cast<int>(v) - 1)));
  return t;
}

TileMesh sample_tile() {
  const Terrain terrain = make_terrain(default_layered_config());
  return build_tile(NodeId{3, 2, 1, 2}, 0b0101, terrain, 4, 1e6);
}

TileDecodeErrorKind decode_error(const std::vector<std::uint8_t>& bytes) {
  try {
    decode_tile(bytes);
  } catch (const TileDecodeError& e) {
    return e.kind();
  }
  FAIL("decode succeeded");
  return TileDecodeErrorKind::malformed;
}

}  // namespace

TEST_SUITE("codec") {
  TEST_CASE("round trip on random tiles") {
    Rng rng(1);
    const Terrain terrain = make_terrain(default_simple_config());
    for (int i = 0; i < 100; ++i) {
      const TileMesh t = i % 2 ? random_mesh(rng)
                               : build_tile(testing_support::random_node(rng, 0, 16),
                                            static_cast<StitchMask>(testing_support::random_int(rng, 0, 15)),
                                            terrain, 2 * static_cast<std::uint32_t>(testing_support::random_int(rng, 1, 8)),
                                            1e6);
      const auto bytes = encode_tile(t);
      REQUIRE(bytes.size() == layout_size(t.vertex_count(), t.indices.size()));
      REQUIRE(bytes.size() == encoded_tile_size(t.vertex_count(), t.indices.size()));
      REQUIRE(decode_tile(bytes) == t);
    }
  }

  TEST_CASE("header layout") {
    const TileMesh t = sample_tile();
    const auto b = encode_tile(t);
    CHECK(std::memcmp(b.data(), "PTIL", 4) == 0);
    CHECK(read_le<std::uint32_t>(b, 4) == 1u);
    CHECK(b[8] == 3);
    CHECK(b[9] == 2);
    CHECK(read_le<std::uint16_t>(b, 10) == 0);
    CHECK(read_le<std::uint32_t>(b, 12) == 1u);
    CHECK(read_le<std::uint32_t>(b, 16) == 2u);
    CHECK(read_le<std::uint32_t>(b, 20) == 4u);
    CHECK(read_le<std::uint32_t>(b, 24) == 25u);
    CHECK(read_le<std::uint32_t>(b, 28) == 96u);
    CHECK(read_le<double>(b, 32) == t.center.x);
    CHECK(read_le<double>(b, 48) == t.center.z);
    CHECK(read_le<float>(b, 56) == t.positions[0].x);
    CHECK(read_le<float>(b, 56 + 12 * 25) == t.normals[0].x);
    CHECK(b[56 + 24 * 25] == t.biomes[0]);
    const std::size_t indices_at = 56 + 25 * 25 + 3;  // 681 padded to 684
    CHECK(indices_at % 4 == 0);
    CHECK(b[56 + 25 * 25] == 0);
    CHECK(read_le<std::uint32_t>(b, indices_at) == t.indices[0]);
    CHECK(b.size() == indices_at + 4 * 96);
  }

  TEST_CASE("size formula") {
    for (std::size_t v : {0u, 1u, 2u, 3u, 4u, 9u, 289u})
      for (std::size_t i : {0u, 3u, 1536u}) CHECK(encoded_tile_size(v, i) == layout_size(v, i));
  }

  TEST_CASE("distinct decode errors") {
    const auto good = encode_tile(sample_tile());

    auto magic = good;
    magic[0] = 'X';
    CHECK(decode_error(magic) == TileDecodeErrorKind::bad_magic);

    auto version = good;
    version[4] = 2;
    CHECK(decode_error(version) == TileDecodeErrorKind::version_mismatch);

    CHECK(decode_error({good.begin(), good.end() - 1}) == TileDecodeErrorKind::truncated);
    CHECK(decode_error({good.begin(), good.begin() + 20}) == TileDecodeErrorKind::truncated);
    CHECK(decode_error({}) == TileDecodeErrorKind::truncated);

    auto index = good;
    const std::uint32_t bad = 25;
    std::memcpy(index.data() + index.size() - 4, &bad, 4);
    CHECK(decode_error(index) == TileDecodeErrorKind::index_out_of_range);

    auto trailing = good;
    trailing.push_back(0);
    CHECK(decode_error(trailing) == TileDecodeErrorKind::malformed);

    auto node = good;
    node[8] = 9;  // face 9
    CHECK(decode_error(node) == TileDecodeErrorKind::malformed);

    auto biome = good;
    biome[56 + 24 * 25] = 6;  // first biome byte
    CHECK(decode_error(biome) == TileDecodeErrorKind::malformed);
  }

  TEST_CASE("encoder refuses inconsistent tiles") {
    TileMesh t = sample_tile();
    t.normals.pop_back();
    CHECK_THROWS_AS(encode_tile(t), InvariantError);
    t = sample_tile();
    t.indices.push_back(1000);
    CHECK_THROWS_AS(encode_tile(t), InvariantError);
    t = sample_tile();
    t.biomes[0] = 200;
    CHECK_THROWS_AS(encode_tile(t), InvariantError);
  }
}
