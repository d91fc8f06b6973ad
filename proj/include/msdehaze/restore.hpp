#pragma once

#include <cmath>
#include <stdexcept>

#include "msdehaze/airlight.hpp"
#include "msdehaze/image.hpp"
#include "msdehaze/parallel.hpp"

namespace msdehaze {

inline constexpr double kSigmoidSlope = 32.0;
inline constexpr double kDefaultEta = 0.25;       // 1/8 for heavy haze
inline constexpr double kDefaultSingleScaleFloor = 0.1;  // t_L

// Blend weight between the 1/t amplification and unit gain: ~1 deep in the
// haze (t << eta), ~0 near the camera (t >> eta), exactly 1/2 at t = eta.
inline double phi(double t, double eta) {
  return 1.0 / (1.0 + std::exp(kSigmoidSlope * (t / eta - 1.0)));
}

inline double psi_amp(double t, double eta) { return t / eta + 1.0; }

// Coarsest-level Koschmieder inversion, (z - A)/max(t, eta) + A, unclamped.
inline Image restore_base(const Image& zg, const Image& tg, const Airlight& a,
                          double eta) {
  if (!zg.same_size(tg) || tg.channels() != 1)
    throw std::invalid_argument("restore_base: size mismatch");
  Image out(zg.width(), zg.height(), zg.channels());
  const double* tp = tg.data();
  for (int c = 0; c < zg.channels(); ++c) {
    const double* zp = zg.plane(c);
    double* op = out.plane(c);
    const double ac = a[c];
    parallel_for(zg.height(), [&](int i) {
      const std::size_t row = static_cast<std::size_t>(i) * zg.width();
      for (int j = 0; j < zg.width(); ++j) {
        const std::size_t k = row + j;
        op[k] = (zp[k] - ac) / std::max(tp[k], eta) + ac;
      }
    });
  }
  return out;
}

// Laplacian-level restoration: a per-pixel blend of the transmission
// division and a bounded psi gain, with the blend weight halved per level so
// the finest (noisiest) level keeps near-unit gain in the sky.
inline Image restore_laplacian(const Image& zl, const Image& tg, int level,
                               double eta) {
  if (!zl.same_size(tg) || tg.channels() != 1)
    throw std::invalid_argument("restore_laplacian: size mismatch");
  if (level < 0) throw std::invalid_argument("restore_laplacian: bad level");
  Image out(zl.width(), zl.height(), zl.channels());
  const double* tp = tg.data();
  const double level_scale = std::ldexp(1.0, -level);  // 1 / 2^l
  parallel_for(zl.height(), [&](int i) {
    const std::size_t row = static_cast<std::size_t>(i) * zl.width();
    for (int j = 0; j < zl.width(); ++j) {
      const std::size_t k = row + j;
      const double t = tp[k];
      const double blend = phi(t, eta) * level_scale;
      const double inv_t = 1.0 / std::max(t, eta);
      const double gain = (1.0 - blend) * inv_t + blend * psi_amp(t, eta);
      for (int c = 0; c < zl.channels(); ++c)
        out.plane(c)[k] = gain * zl.plane(c)[k];
    }
  });
  return out;
}

// Single-scale baseline, (Z - A)/max(t, t_floor) + A, clamped. Divides sensor
// noise by t_floor in the sky; kept for comparison against the pyramid path.
inline Image restore_single_scale(const Image& z, const Image& t,
                                  const Airlight& a, double t_floor) {
  if (!z.same_size(t) || t.channels() != 1)
    throw std::invalid_argument("restore_single_scale: size mismatch");
  if (t_floor <= 0.0)
    throw std::invalid_argument("restore_single_scale: t_floor must be positive");
  Image out(z.width(), z.height(), z.channels());
  const double* tp = t.data();
  for (int c = 0; c < z.channels(); ++c) {
    const double* zp = z.plane(c);
    double* op = out.plane(c);
    const double ac = a[c];
    parallel_for(z.height(), [&](int i) {
      const std::size_t row = static_cast<std::size_t>(i) * z.width();
      for (int j = 0; j < z.width(); ++j) {
        const std::size_t k = row + j;
        op[k] = clamp01((zp[k] - ac) / std::max(tp[k], t_floor) + ac);
      }
    });
  }
  return out;
}

}  // namespace msdehaze
