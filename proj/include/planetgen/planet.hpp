#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "planetgen/config.hpp"
#include "planetgen/mesh.hpp"

namespace planetgen {

/// Every node of a uniform subdivision, sorted by address: 6·4^depth nodes.
std::vector<NodeId> uniform_nodes(int depth);

struct GenerateSummary {
  std::size_t tiles = 0;
  std::size_t vertices = 0;
  std::size_t triangles = 0;
  std::array<std::size_t, kBiomeCount> biome_histogram{};  // per vertex

  /// Human-readable lines for the CLI.
  std::string text() const;
};

struct GeneratedPlanet {
  std::vector<TileMesh> tiles;
  GenerateSummary summary;
};

/// Builds the whole sphere at one depth with the configured resolution. All
/// tiles share a depth, so no stitching is needed.
GeneratedPlanet generate_planet(const PlanetConfig& config, int depth);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t probes = 0;
  std::size_t violations = 0;
  std::string first_violation;
};

/// Randomized invariant sweep driven by `samples`:
///   ocean_clamp        samples directions plus ceil(samples/100) unstitched tiles
///   formula_identity   samples directions, displacement recomputed from parts
///   seam_continuity    ceil(samples/100) same-depth pairs and as many
///                      one-level pairs with the fine edge stitched
///   restricted_tree    ceil(samples/1000) camera placements, each updated
///                      twice from a fresh tree
std::vector<CheckResult> verify_planet(const PlanetConfig& config, std::size_t samples,
                                       std::uint64_t probe_seed = 1);

}  // namespace planetgen
