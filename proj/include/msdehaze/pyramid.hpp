#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "msdehaze/image.hpp"
#include "msdehaze/parallel.hpp"

namespace msdehaze {

// Separable Burt kernel over offsets {-1, 0, 1}; w(m,n) = taps[m] * taps[n]
// sums to 1 exactly.
inline constexpr std::array<double, 3> kPyramidTaps = {0.25, 0.5, 0.25};

// 2x decimation with the separable kernel, mirror-extended. Output is
// ceil(n/2) per axis, so odd sizes round up and expand() can restore them.
inline Image reduce(const Image& src) {
  const int w = src.width(), h = src.height();
  const int ow = (w + 1) / 2, oh = (h + 1) / 2;
  Image out(ow, oh, src.channels());
  for (int c = 0; c < src.channels(); ++c) {
    const double* sp = src.plane(c);
    double* op = out.plane(c);
    parallel_for(oh, [&](int i) {
      // Vertical taps at fine horizontal resolution, then horizontal taps.
      std::vector<double> row(w);
      const double* r0 = sp + static_cast<std::size_t>(mirror_index(2 * i - 1, h)) * w;
      const double* r1 = sp + static_cast<std::size_t>(2 * i) * w;
      const double* r2 = sp + static_cast<std::size_t>(mirror_index(2 * i + 1, h)) * w;
      for (int j = 0; j < w; ++j)
        row[j] = 0.25 * r0[j] + 0.5 * r1[j] + 0.25 * r2[j];
      double* orow = op + static_cast<std::size_t>(i) * ow;
      for (int j = 0; j < ow; ++j) {
        orow[j] = 0.25 * row[mirror_index(2 * j - 1, w)] + 0.5 * row[2 * j] +
                  0.25 * row[mirror_index(2 * j + 1, w)];
      }
    });
  }
  return out;
}

namespace detail {

// Coarse-grid taps contributing to fine index i: only offsets m with
// (i - m) even survive, i.e. one center tap on even indices and the two
// quarter taps on odd ones.
struct ExpandTaps {
  int idx[2];
  double weight[2];
  int count;
};

inline ExpandTaps expand_taps(int i, int coarse_n) {
  if (i % 2 == 0) return {{mirror_index(i / 2, coarse_n), 0}, {0.5, 0.0}, 1};
  return {{mirror_index((i - 1) / 2, coarse_n), mirror_index((i + 1) / 2, coarse_n)},
          {0.25, 0.25},
          2};
}

}  // namespace detail

// Parity-restricted upsampling (factor 4 compensates the skipped taps).
// Target dimensions are explicit so reconstruction is exact for odd sizes.
inline Image expand(const Image& src, int target_height, int target_width) {
  if ((target_height + 1) / 2 != src.height() ||
      (target_width + 1) / 2 != src.width())
    throw std::invalid_argument("expand: target is not the parent size of the source");
  Image out(target_width, target_height, src.channels());
  const int cw = src.width(), ch = src.height();
  std::vector<detail::ExpandTaps> col_taps(target_width);
  for (int j = 0; j < target_width; ++j) col_taps[j] = detail::expand_taps(j, cw);
  for (int c = 0; c < src.channels(); ++c) {
    const double* sp = src.plane(c);
    double* op = out.plane(c);
    parallel_for(target_height, [&](int i) {
      const detail::ExpandTaps rt = detail::expand_taps(i, ch);
      double* orow = op + static_cast<std::size_t>(i) * target_width;
      for (int j = 0; j < target_width; ++j) {
        const detail::ExpandTaps& ct = col_taps[j];
        double acc = 0.0;
        for (int a = 0; a < rt.count; ++a) {
          const double* srow = sp + static_cast<std::size_t>(rt.idx[a]) * cw;
          double h = 0.0;
          for (int b = 0; b < ct.count; ++b) h += ct.weight[b] * srow[ct.idx[b]];
          acc += rt.weight[a] * h;
        }
        orow[j] = 4.0 * acc;
      }
    });
  }
  return out;
}

// Gaussian levels 0..L (level 0 is the input) plus signed Laplacian
// residuals 0..L-1. Residuals stay unclamped; clamping happens once, at
// final collapse.
struct ImagePyramid {
  std::vector<Image> gaussian;
  std::vector<Image> laplacian;
  int levels() const { return static_cast<int>(laplacian.size()); }
};

inline void validate_pyramid(const ImagePyramid& p) {
  if (p.gaussian.empty() || p.laplacian.size() + 1 != p.gaussian.size())
    throw std::invalid_argument("pyramid: level count mismatch");
  for (std::size_t l = 0; l + 1 < p.gaussian.size(); ++l) {
    const Image& fine = p.gaussian[l];
    const Image& coarse = p.gaussian[l + 1];
    if (coarse.width() != (fine.width() + 1) / 2 ||
        coarse.height() != (fine.height() + 1) / 2 ||
        !p.laplacian[l].same_shape(fine))
      throw std::invalid_argument("pyramid: inconsistent level sizes");
  }
}

inline ImagePyramid build_pyramid(const Image& img, int levels) {
  if (levels < 1) throw std::invalid_argument("build_pyramid: levels must be >= 1");
  if (std::min(img.width(), img.height()) < (1 << levels))
    throw std::invalid_argument("build_pyramid: image too small for the level count");
  ImagePyramid p;
  p.gaussian.push_back(img);
  for (int l = 0; l < levels; ++l) p.gaussian.push_back(reduce(p.gaussian.back()));
  for (int l = 0; l < levels; ++l) {
    const Image& fine = p.gaussian[l];
    Image up = expand(p.gaussian[l + 1], fine.height(), fine.width());
    Image residual(fine.width(), fine.height(), fine.channels());
    for (std::size_t k = 0; k < residual.size(); ++k)
      residual.data()[k] = fine.data()[k] - up.data()[k];
    p.laplacian.push_back(std::move(residual));
  }
  return p;
}

// Fold from the coarsest level: acc <- expand(acc) + laplacian[l].
inline Image collapse_raw(const ImagePyramid& p) {
  validate_pyramid(p);
  Image acc = p.gaussian.back();
  for (int l = p.levels() - 1; l >= 0; --l) {
    const Image& residual = p.laplacian[l];
    acc = expand(acc, residual.height(), residual.width());
    for (std::size_t k = 0; k < acc.size(); ++k)
      acc.data()[k] += residual.data()[k];
  }
  return acc;
}

inline Image collapse(const ImagePyramid& p) { return clamped01(collapse_raw(p)); }

}  // namespace msdehaze
