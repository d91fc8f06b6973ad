#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "msdehaze/image.hpp"

namespace msdehaze {

// Global atmospheric light, one value per color channel, strictly positive
// (every restoration stage divides by it).
struct Airlight {
  std::array<double, 3> rgb{1.0, 1.0, 1.0};
  double operator[](int c) const { return rgb[c]; }
};

inline constexpr double kAirlightFloor = 1.0 / 255.0;
inline constexpr long long kAirlightTerminalArea = 1024;

// Quad-tree search for the brightest low-variance region: recursively keep
// the quadrant maximizing mean(gray) - std(gray), stop below the terminal
// area, pick the pixel nearest to white there and return its 3x3 mean color.
// Ties go to the first candidate in raster order.
inline Airlight estimate_airlight(const Image& img) {
  if (img.channels() != 3)
    throw std::invalid_argument("estimate_airlight: 3-channel image required");

  struct Block {
    int x, y, w, h;
  };
  const auto score = [&](const Block& b) {
    double sum = 0.0, sum2 = 0.0;
    for (int i = b.y; i < b.y + b.h; ++i) {
      for (int j = b.x; j < b.x + b.w; ++j) {
        const double g = (img.at(i, j, 0) + img.at(i, j, 1) + img.at(i, j, 2)) / 3.0;
        sum += g;
        sum2 += g * g;
      }
    }
    const double n = static_cast<double>(b.w) * b.h;
    const double mean = sum / n;
    const double var = std::max(0.0, sum2 / n - mean * mean);
    return mean - std::sqrt(var);
  };

  Block cur{0, 0, img.width(), img.height()};
  while (static_cast<long long>(cur.w) * cur.h >= kAirlightTerminalArea &&
         cur.w >= 2 && cur.h >= 2) {
    const int hw = cur.w / 2, hh = cur.h / 2;
    const Block quads[4] = {{cur.x, cur.y, hw, hh},
                            {cur.x + hw, cur.y, cur.w - hw, hh},
                            {cur.x, cur.y + hh, hw, cur.h - hh},
                            {cur.x + hw, cur.y + hh, cur.w - hw, cur.h - hh}};
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int q = 0; q < 4; ++q) {
      const double s = score(quads[q]);
      if (s > best_score) {
        best_score = s;
        best = q;
      }
    }
    cur = quads[best];
  }

  int bi = cur.y, bj = cur.x;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int i = cur.y; i < cur.y + cur.h; ++i) {
    for (int j = cur.x; j < cur.x + cur.w; ++j) {
      double d = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double e = 1.0 - img.at(i, j, c);
        d += e * e;
      }
      if (d < best_dist) {
        best_dist = d;
        bi = i;
        bj = j;
      }
    }
  }

  Airlight a;
  for (int c = 0; c < 3; ++c) {
    double sum = 0.0;
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj)
        sum += sample_mirror(img, bi + di, bj + dj, c);
    a.rgb[c] = std::max(sum / 9.0, kAirlightFloor);
  }
  return a;
}

}  // namespace msdehaze
