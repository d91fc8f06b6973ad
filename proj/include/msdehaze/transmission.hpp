#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "msdehaze/airlight.hpp"
#include "msdehaze/image.hpp"
#include "msdehaze/pyramid.hpp"
#include "msdehaze/window_ops.hpp"

namespace msdehaze {

inline constexpr double kDarkChannelWeight = 31.0 / 32.0;
inline constexpr double kTransmissionFloor = 1.0 / 255.0;
inline constexpr double kDefaultBinStep = std::numbers::pi / 720.0;
inline constexpr double kDefaultMinRadius = 0.02;
inline constexpr double kEdgeWeightEpsilon = 1e-6;  // (0.001)^2

enum class TransmissionStage { kInitial, kAveraged, kRefined };

struct TransmissionMap {
  Image map;  // single channel
  TransmissionStage stage = TransmissionStage::kInitial;
};

// Windowed minimum over space and color channels.
inline Image dark_channel(const Image& img, int radius) {
  if (radius < 0) throw std::invalid_argument("dark_channel: radius must be >= 0");
  return window_min(channel_min(img), radius);
}

// t0 = 1 - (31/32) * darkchannel(Z/A); the per-channel ratio is clamped to
// [0,1] before the minimum, so t0 lands in [1/32, 1] exactly.
inline TransmissionMap initial_transmission(const Image& img, const Airlight& a,
                                            int radius) {
  Image ratio(img.width(), img.height(), img.channels());
  for (int c = 0; c < img.channels(); ++c) {
    const double* sp = img.plane(c);
    double* rp = ratio.plane(c);
    const double ac = a[c];
    for (std::size_t k = 0; k < img.plane_size(); ++k)
      rp[k] = clamp01(sp[k] / ac);  // division keeps Z == A at ratio 1 exactly
  }
  Image dark = dark_channel(ratio, radius);
  TransmissionMap t{Image(img.width(), img.height(), 1), TransmissionStage::kInitial};
  for (std::size_t k = 0; k < dark.size(); ++k)
    t.map.data()[k] = 1.0 - kDarkChannelWeight * dark.data()[k];
  return t;
}

// G = 1 - min_c(Z_c / A_c), clamped to [0,1].
inline Image guidance(const Image& img, const Airlight& a) {
  if (img.channels() != 3)
    throw std::invalid_argument("guidance: 3-channel image required");
  Image g(img.width(), img.height(), 1);
  const double* r = img.plane(0);
  const double* gr = img.plane(1);
  const double* b = img.plane(2);
  double* out = g.data();
  for (std::size_t k = 0; k < img.plane_size(); ++k) {
    const double m = std::min({r[k] / a[0], gr[k] / a[1], b[k] / a[2]});
    out[k] = clamp01(1.0 - m);
  }
  return g;
}

// Spherical coordinates of the airlight-shifted color Z - A:
// B = r cos(psi), (R,G) plane gives the longitude theta in [0, 2pi).
struct SphericalShift {
  double radius;
  double longitude;  // theta
  double latitude;   // psi in [0, pi]
};

inline SphericalShift spherical_of(double zr, double zg, double zb) {
  const double r = std::sqrt(zr * zr + zg * zg + zb * zb);
  if (r == 0.0) return {0.0, 0.0, 0.0};
  double theta = std::atan2(zg, zr);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  double cos_psi = zb / r;
  cos_psi = cos_psi < -1.0 ? -1.0 : (cos_psi > 1.0 ? 1.0 : cos_psi);
  return {r, theta, std::acos(cos_psi)};
}

// Pixel grouping by the (theta, psi) histogram. Over-full bins are split in
// raster order into subsets whose sizes differ by at most one, capped at the
// subset bound. Pixels closer to the airlight than min_radius bypass
// clustering entirely (their angles are numerically meaningless) and keep
// their initial transmission during averaging.
struct HazeLineClusters {
  static constexpr std::int32_t kUnclustered = -1;
  std::vector<std::int32_t> subset;  // per pixel, raster order
  std::vector<double> radius;        // per pixel ||Z - A||
  std::int32_t subset_count = 0;
};

inline HazeLineClusters cluster_haze_lines(const Image& img, const Airlight& a,
                                           double bin_step, int max_subset_size,
                                           double min_radius = kDefaultMinRadius) {
  if (img.channels() != 3)
    throw std::invalid_argument("cluster_haze_lines: 3-channel image required");
  if (bin_step <= 0.0)
    throw std::invalid_argument("cluster_haze_lines: bin step must be positive");
  if (max_subset_size < 1)
    throw std::invalid_argument("cluster_haze_lines: subset bound must be >= 1");

  const std::size_t n = img.plane_size();
  const int n_theta =
      std::max(1, static_cast<int>(std::lround(2.0 * std::numbers::pi / bin_step)));
  const int n_psi =
      std::max(1, static_cast<int>(std::lround(std::numbers::pi / bin_step)));

  HazeLineClusters cl;
  cl.subset.assign(n, HazeLineClusters::kUnclustered);
  cl.radius.assign(n, 0.0);

  std::vector<std::int32_t> bin_of(n, -1);
  std::unordered_map<std::int32_t, std::int32_t> bin_size;
  std::vector<std::int32_t> bin_order;  // first-touch raster order
  bin_size.reserve(1024);

  const double* pr = img.plane(0);
  const double* pg = img.plane(1);
  const double* pb = img.plane(2);
  for (std::size_t k = 0; k < n; ++k) {
    const SphericalShift s =
        spherical_of(pr[k] - a[0], pg[k] - a[1], pb[k] - a[2]);
    cl.radius[k] = s.radius;
    if (s.radius < min_radius) continue;
    int bt = static_cast<int>(s.longitude / bin_step);
    int bp = static_cast<int>(s.latitude / bin_step);
    bt = std::min(bt, n_theta - 1);
    bp = std::min(bp, n_psi - 1);
    const std::int32_t bin = static_cast<std::int32_t>(bt) * n_psi + bp;
    bin_of[k] = bin;
    auto [it, inserted] = bin_size.try_emplace(bin, 0);
    if (inserted) bin_order.push_back(bin);
    ++it->second;
  }

  struct BinLayout {
    std::int32_t first_subset;
    std::int32_t seen;
    std::int32_t base;  // members per subset; the first `extra` get one more
    std::int32_t extra;
  };
  std::unordered_map<std::int32_t, BinLayout> layout;
  layout.reserve(bin_size.size());
  std::int32_t next_subset = 0;
  for (const std::int32_t bin : bin_order) {
    const std::int32_t members = bin_size[bin];
    const std::int32_t subsets = (members + max_subset_size - 1) / max_subset_size;
    layout[bin] = {next_subset, 0, members / subsets, members % subsets};
    next_subset += subsets;
  }
  cl.subset_count = next_subset;

  for (std::size_t k = 0; k < n; ++k) {
    if (bin_of[k] < 0) continue;
    BinLayout& b = layout[bin_of[k]];
    const std::int32_t m = b.seen++;
    const std::int32_t threshold = b.extra * (b.base + 1);
    const std::int32_t local =
        m < threshold ? m / (b.base + 1) : b.extra + (m - threshold) / b.base;
    cl.subset[k] = b.first_subset + local;
  }
  return cl;
}

// Non-local haze line averaging: within each subset the ratio t/||Z - A||
// collapses to the shared estimate sum(t0)/sum(||Z - A||), so t becomes
// proportional to the pixel's own radius. Bypassed pixels keep t0. The
// result is clamped to [1/255, 1].
inline TransmissionMap haze_line_average(const TransmissionMap& initial,
                                         const HazeLineClusters& clusters) {
  const Image& t0 = initial.map;
  if (clusters.subset.size() != t0.plane_size())
    throw std::invalid_argument("haze_line_average: cluster size mismatch");
  std::vector<double> sum_t(clusters.subset_count, 0.0);
  std::vector<double> sum_r(clusters.subset_count, 0.0);
  const double* t0p = t0.data();
  for (std::size_t k = 0; k < clusters.subset.size(); ++k) {
    const std::int32_t s = clusters.subset[k];
    if (s < 0) continue;
    sum_t[s] += t0p[k];
    sum_r[s] += clusters.radius[k];
  }
  TransmissionMap out{Image(t0.width(), t0.height(), 1), TransmissionStage::kAveraged};
  double* op = out.map.data();
  for (std::size_t k = 0; k < clusters.subset.size(); ++k) {
    const std::int32_t s = clusters.subset[k];
    double t = (s < 0 || sum_r[s] <= 0.0) ? t0p[k]
                                          : clusters.radius[k] * (sum_t[s] / sum_r[s]);
    op[k] = std::min(1.0, std::max(kTransmissionFloor, t));
  }
  return out;
}

// Weighted guided image filter. Per window: a = cov(G,t) / (var(G) + l/Gamma),
// b = mean(t) - a mean(G); the output blends the window-averaged coefficients,
// t* = mean(a) G + mean(b). Gamma is the usual edge-aware weight built from
// the 3x3 variance of the guidance, so the ridge penalty relaxes on edges.
inline TransmissionMap wgif_refine(const TransmissionMap& t, const Image& guide,
                                   int radius, double lambda) {
  const Image& tm = t.map;
  if (!tm.same_size(guide) || guide.channels() != 1)
    throw std::invalid_argument("wgif_refine: guidance/transmission size mismatch");
  if (radius < 0 || lambda < 0.0)
    throw std::invalid_argument("wgif_refine: bad radius or regularizer");

  const std::size_t n = tm.plane_size();
  const int w = tm.width(), h = tm.height();

  Image gg(w, h, 1), gt(w, h, 1);
  for (std::size_t k = 0; k < n; ++k) {
    gg.data()[k] = guide.data()[k] * guide.data()[k];
    gt.data()[k] = guide.data()[k] * tm.data()[k];
  }

  // Edge-aware weight from the 3x3 local variance of the guidance.
  Image m3 = box_mean(guide, 1), m3sq = box_mean(gg, 1);
  std::vector<double> sigma2(n);
  double inv_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sigma2[k] = std::max(0.0, m3sq.data()[k] - m3.data()[k] * m3.data()[k]);
    inv_sum += 1.0 / (sigma2[k] + kEdgeWeightEpsilon);
  }
  const double inv_mean = inv_sum / static_cast<double>(n);

  Image mg = box_mean(guide, radius);
  Image mt = box_mean(tm, radius);
  Image mgg = box_mean(gg, radius);
  Image mgt = box_mean(gt, radius);

  Image a(w, h, 1), b(w, h, 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double cov = mgt.data()[k] - mg.data()[k] * mt.data()[k];
    const double var = mgg.data()[k] - mg.data()[k] * mg.data()[k];
    const double gamma = (sigma2[k] + kEdgeWeightEpsilon) * inv_mean;
    const double denom = var + lambda / gamma;
    const double ak = denom > 0.0 ? cov / denom : 0.0;
    a.data()[k] = ak;
    b.data()[k] = mt.data()[k] - ak * mg.data()[k];
  }
  Image ma = box_mean(a, radius), mb = box_mean(b, radius);

  TransmissionMap out{Image(w, h, 1), TransmissionStage::kRefined};
  for (std::size_t k = 0; k < n; ++k) {
    const double v = ma.data()[k] * guide.data()[k] + mb.data()[k];
    out.map.data()[k] = std::min(1.0, std::max(kTransmissionFloor, v));
  }
  return out;
}

// Gaussian pyramid of the refined map, levels 0..L.
inline std::vector<Image> transmission_pyramid(const TransmissionMap& refined,
                                               int levels) {
  if (refined.stage != TransmissionStage::kRefined)
    throw std::invalid_argument("transmission_pyramid: refined stage required");
  std::vector<Image> out;
  out.reserve(levels + 1);
  out.push_back(refined.map);
  for (int l = 0; l < levels; ++l) out.push_back(reduce(out.back()));
  return out;
}

}  // namespace msdehaze
