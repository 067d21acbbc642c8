#include "planetgen/noise.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "planetgen/errors.hpp"
#include "planetgen/hash.hpp"

namespace planetgen {
namespace {

struct Gradient {
  double x, y, z;
};

// The twelve cube-edge directions, padded to sixteen with the usual repeats.
constexpr std::array<Gradient, 16> kGradients{{
    {1, 1, 0}, {-1, 1, 0}, {1, -1, 0}, {-1, -1, 0},
    {1, 0, 1}, {-1, 0, 1}, {1, 0, -1}, {-1, 0, -1},
    {0, 1, 1}, {0, -1, 1}, {0, 1, -1}, {0, -1, -1},
    {1, 1, 0}, {-1, 1, 0}, {0, -1, 1}, {0, -1, -1},
}};

// Gradients above have length sqrt(2); unit-gradient 3D Perlin noise is
// bounded by sqrt(3)/2. This rescales the sum onto [-1, 1].
const double kOutputScale = 2.0 / std::sqrt(6.0);

constexpr double kMaxCoordinate = 0x1.0p52;

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

double lerp(double a, double b, double t) { return a + t * (b - a); }

double dot_gradient(std::uint64_t h, double dx, double dy, double dz) {
  const Gradient& g = kGradients[h >> 60];
  return g.x * dx + g.y * dy + g.z * dz;
}

}  // namespace

void validate(const FbmParams& params) {
  if (params.octaves < 1) throw ConfigError("octaves ≥ 1");
  if (!(params.persistence > 0.0) || !std::isfinite(params.persistence))
    throw ConfigError("persistence > 0");
  if (!(params.lacunarity > 1.0) || !std::isfinite(params.lacunarity))
    throw ConfigError("lacunarity > 1");
  if (!(params.exponentiation > 0.0) || !std::isfinite(params.exponentiation))
    throw ConfigError("exponentiation > 0");
  if (!(params.base_frequency > 0.0) || !std::isfinite(params.base_frequency))
    throw ConfigError("base_frequency > 0");
}

double perlin3(const Vec3& p, NoiseSeed seed) {
  if (!is_finite(p)) throw DomainError("perlin3: non-finite sample point");
  if (std::abs(p.x) >= kMaxCoordinate || std::abs(p.y) >= kMaxCoordinate ||
      std::abs(p.z) >= kMaxCoordinate)
    throw DomainError("perlin3: sample point exceeds lattice range");

  const double fx0 = std::floor(p.x);
  const double fy0 = std::floor(p.y);
  const double fz0 = std::floor(p.z);
  const auto ix = static_cast<std::int64_t>(fx0);
  const auto iy = static_cast<std::int64_t>(fy0);
  const auto iz = static_cast<std::int64_t>(fz0);
  const double dx = p.x - fx0;
  const double dy = p.y - fy0;
  const double dz = p.z - fz0;

  // Corner hash is hash_values(seed, ix, iy, iz); the x and xy prefixes are
  // shared between corners.
  const std::uint64_t mx[2] = {mix64(static_cast<std::uint64_t>(ix)), mix64(static_cast<std::uint64_t>(ix + 1))};
  const std::uint64_t my[2] = {mix64(static_cast<std::uint64_t>(iy)), mix64(static_cast<std::uint64_t>(iy + 1))};
  const std::uint64_t mz[2] = {mix64(static_cast<std::uint64_t>(iz)), mix64(static_cast<std::uint64_t>(iz + 1))};
  double n[2][2][2];
  for (int a = 0; a < 2; ++a) {
    const std::uint64_t hx = mix64(seed.value ^ mx[a]);
    for (int b = 0; b < 2; ++b) {
      const std::uint64_t hxy = mix64(hx ^ my[b]);
      for (int c = 0; c < 2; ++c)
        n[a][b][c] = dot_gradient(mix64(hxy ^ mz[c]), dx - a, dy - b, dz - c);
    }
  }
  const double n000 = n[0][0][0], n100 = n[1][0][0], n010 = n[0][1][0], n110 = n[1][1][0];
  const double n001 = n[0][0][1], n101 = n[1][0][1], n011 = n[0][1][1], n111 = n[1][1][1];

  const double u = fade(dx);
  const double v = fade(dy);
  const double w = fade(dz);

  const double x00 = lerp(n000, n100, u);
  const double x10 = lerp(n010, n110, u);
  const double x01 = lerp(n001, n101, u);
  const double x11 = lerp(n011, n111, u);
  const double y0 = lerp(x00, x10, v);
  const double y1 = lerp(x01, x11, v);
  return std::clamp(lerp(y0, y1, w) * kOutputScale, -1.0, 1.0);
}

NoiseSeed octave_seed(NoiseSeed seed, int octave) {
  return NoiseSeed{hash_combine(seed.value, static_cast<std::uint64_t>(octave))};
}

double fbm(const Vec3& p, const FbmParams& params, NoiseSeed seed) {
  validate(params);
  double raw = 0.0;
  double amplitude_sum = 0.0;
  double amplitude = 1.0;
  double frequency = params.base_frequency;
  for (int i = 0; i < params.octaves; ++i) {
    raw += amplitude * perlin3(p * frequency, octave_seed(seed, i));
    amplitude_sum += amplitude;
    amplitude *= params.persistence;
    frequency *= params.lacunarity;
  }
  const double normalized = std::clamp((raw / amplitude_sum + 1.0) / 2.0, 0.0, 1.0);
  return std::pow(normalized, params.exponentiation);
}

}  // namespace planetgen
