#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "msdehaze/airlight.hpp"
#include "msdehaze/image.hpp"

namespace msdehaze {

// Counter-based generator: a splitmix64-style finalizer applied to
// (seed, counter), so every draw is addressable and runs reproduce
// bit-exactly regardless of evaluation order.
inline std::uint64_t hash_counter(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t x = seed + 0x9E3779B97F4A7C15ull * (counter + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>((hash_counter(seed, counter) >> 11) + 1) * 0x1.0p-53;  // (0,1]
}

// Box-Muller on two counter draws.
inline double gaussian01(std::uint64_t seed, std::uint64_t counter) {
  const double u1 = uniform01(seed, 2 * counter);
  const double u2 = uniform01(seed, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Ground-truth scene: haze-free radiance plus a per-pixel depth field.
// The synthesized observation is I*t + A*(1-t) + n with t = exp(-alpha*depth).
struct HazeScene {
  Image clean;
  std::vector<double> depth;  // per pixel, raster order
  double alpha = 1.0;
  Airlight airlight;
  double noise_std = 0.0;
  std::uint64_t seed = 0;
};

inline Image transmission_of(const HazeScene& scene) {
  Image t(scene.clean.width(), scene.clean.height(), 1);
  for (std::size_t k = 0; k < t.size(); ++k)
    t.data()[k] = std::exp(-scene.alpha * scene.depth[k]);
  return t;
}

inline Image sky_mask_of(const HazeScene& scene, double threshold = 0.02) {
  Image mask(scene.clean.width(), scene.clean.height(), 1);
  for (std::size_t k = 0; k < mask.size(); ++k)
    mask.data()[k] =
        std::exp(-scene.alpha * scene.depth[k]) < threshold ? 1.0 : 0.0;
  return mask;
}

inline Image synthesize(const HazeScene& scene) {
  const Image& clean = scene.clean;
  if (scene.depth.size() != clean.plane_size())
    throw std::invalid_argument("synthesize: depth size mismatch");
  if (!(scene.alpha > 0.0))
    throw std::invalid_argument("synthesize: alpha must be positive");
  Image out(clean.width(), clean.height(), clean.channels());
  for (int c = 0; c < clean.channels(); ++c) {
    const double* ip = clean.plane(c);
    double* op = out.plane(c);
    const double ac = scene.airlight[c];
    const std::size_t base = c * clean.plane_size();
    for (std::size_t k = 0; k < clean.plane_size(); ++k) {
      const double t = std::exp(-scene.alpha * scene.depth[k]);
      double v = ip[k] * t + ac * (1.0 - t);
      if (scene.noise_std > 0.0)
        v += scene.noise_std * gaussian01(scene.seed, base + k);
      op[k] = clamp01(v);
    }
  }
  return out;
}

namespace detail {

// Small per-band palette of saturated colors. Every color keeps one channel
// near zero (so windowed dark channels stay dark) and bands do not share
// colors (so a haze line never spans two depths unless the depth itself
// varies inside the band).
inline void palette_color(std::uint64_t seed, int band, int slot, double rgb[3]) {
  const std::uint64_t h = hash_counter(seed ^ 0x5D5846ull, (static_cast<std::uint64_t>(band) << 16) + slot);
  const int dark = static_cast<int>(h % 3);
  const int bright = (dark + 1 + static_cast<int>((h >> 8) % 2)) % 3;
  const int mid = 3 - dark - bright;
  const double u1 = uniform01(seed ^ 0xA1ull, h);
  const double u2 = uniform01(seed ^ 0xB2ull, h);
  const double u3 = uniform01(seed ^ 0xC3ull, h);
  rgb[dark] = 0.01 + 0.02 * u1;
  rgb[bright] = 0.55 + 0.40 * u2;
  rgb[mid] = 0.15 + 0.45 * u3;
}

}  // namespace detail

// Deterministic flat-cell texture: a grid of cell-sized patches, each filled
// with one color from the band's palette. Bands are horizontal stripes
// (index = i * bands / height).
inline Image make_cell_texture(int width, int height, int cell,
                               std::uint64_t seed, int bands = 1) {
  if (width < 2 || height < 2)
    throw std::invalid_argument("make_cell_texture: degenerate dimensions");
  if (cell < 1 || bands < 1)
    throw std::invalid_argument("make_cell_texture: bad cell or band count");
  constexpr int kPaletteSize = 6;
  Image img(width, height, 3);
  for (int i = 0; i < height; ++i) {
    const int band = static_cast<int>(static_cast<long long>(i) * bands / height);
    for (int j = 0; j < width; ++j) {
      const std::uint64_t cell_id =
          (static_cast<std::uint64_t>(i / cell) << 24) + static_cast<std::uint64_t>(j / cell);
      const int slot = static_cast<int>(hash_counter(seed ^ 0x7E77ull, cell_id) % kPaletteSize);
      double rgb[3];
      detail::palette_color(seed, band, slot, rgb);
      for (int c = 0; c < 3; ++c) img.at(i, j, c) = rgb[c];
    }
  }
  return img;
}

// Layered test scene: n horizontal depth bands from depth 0 (nearest) to a
// far band whose transmission exp(-4) ~ 0.018 sits below the sky threshold.
inline HazeScene make_layered_scene(int width, int height, int n_layers,
                                    double alpha, const Airlight& a,
                                    std::uint64_t seed) {
  if (n_layers < 2)
    throw std::invalid_argument("make_layered_scene: at least 2 layers required");
  if (!(alpha > 0.0))
    throw std::invalid_argument("make_layered_scene: alpha must be positive");
  HazeScene scene;
  scene.clean = make_cell_texture(width, height, 16, seed, n_layers);
  scene.depth.resize(scene.clean.plane_size());
  const double depth_far = 4.0 / alpha;
  for (int i = 0; i < height; ++i) {
    const int band = static_cast<int>(static_cast<long long>(i) * n_layers / height);
    const double d = depth_far * band / (n_layers - 1);
    for (int j = 0; j < width; ++j)
      scene.depth[static_cast<std::size_t>(i) * width + j] = d;
  }
  scene.alpha = alpha;
  scene.airlight = a;
  scene.seed = seed;
  return scene;
}

}  // namespace msdehaze
