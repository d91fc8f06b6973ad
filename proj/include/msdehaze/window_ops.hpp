#pragma once

#include <utility>
#include <vector>

#include "msdehaze/image.hpp"
#include "msdehaze/parallel.hpp"

namespace msdehaze {

namespace detail {

// out[j] = sum of in[mirror(j-r) .. mirror(j+r)], running-window update.
inline void window_sum_1d(const double* in, double* out, int n, int r) {
  double s = 0.0;
  for (int d = -r; d <= r; ++d) s += in[mirror_index(d, n)];
  out[0] = s;
  for (int j = 1; j < n; ++j) {
    s += in[mirror_index(j + r, n)] - in[mirror_index(j - 1 - r, n)];
    out[j] = s;
  }
}

// Monotonic-deque sliding minimum over the mirror-extended sequence.
inline void window_min_1d(const double* in, double* out, int n, int r) {
  std::vector<double> val(static_cast<std::size_t>(n) + 2 * r);
  std::vector<int> pos(val.size());
  int head = 0, tail = 0;
  for (int x = -r; x <= n - 1 + r; ++x) {
    const double v = in[mirror_index(x, n)];
    while (tail > head && val[tail - 1] >= v) --tail;
    val[tail] = v;
    pos[tail] = x;
    ++tail;
    const int j = x - r;  // window [j-r, j+r] is complete at x = j+r
    if (j >= 0) {
      while (pos[head] < j - r) ++head;
      out[j] = val[head];
    }
  }
}

}  // namespace detail

// Mean over the (2r+1)^2 mirror-extended window, O(1) amortized per pixel.
// Applied per channel.
inline Image box_mean(const Image& src, int radius) {
  const int w = src.width(), h = src.height();
  Image out(w, h, src.channels());
  const double inv_area = 1.0 / (static_cast<double>(2 * radius + 1) * (2 * radius + 1));
  for (int c = 0; c < src.channels(); ++c) {
    const double* sp = src.plane(c);
    double* op = out.plane(c);
    std::vector<double> tmp(src.plane_size());
    parallel_for(h, [&](int i) {
      detail::window_sum_1d(sp + static_cast<std::size_t>(i) * w,
                            tmp.data() + static_cast<std::size_t>(i) * w, w, radius);
    });
    parallel_for(w, [&](int j) {
      std::vector<double> col(h), sums(h);
      for (int i = 0; i < h; ++i) col[i] = tmp[static_cast<std::size_t>(i) * w + j];
      detail::window_sum_1d(col.data(), sums.data(), h, radius);
      for (int i = 0; i < h; ++i)
        op[static_cast<std::size_t>(i) * w + j] = sums[i] * inv_area;
    });
  }
  return out;
}

// Minimum over the (2r+1)^2 mirror-extended window of a single-channel map.
// Separable: row minima feed column minima.
inline Image window_min(const Image& src, int radius) {
  if (src.channels() != 1)
    throw std::invalid_argument("window_min: single-channel map required");
  const int w = src.width(), h = src.height();
  Image rows(w, h, 1), out(w, h, 1);
  parallel_for(h, [&](int i) {
    detail::window_min_1d(src.plane(0) + static_cast<std::size_t>(i) * w,
                          rows.plane(0) + static_cast<std::size_t>(i) * w, w, radius);
  });
  parallel_for(w, [&](int j) {
    std::vector<double> col(h), mins(h);
    for (int i = 0; i < h; ++i) col[i] = rows.at(i, j);
    detail::window_min_1d(col.data(), mins.data(), h, radius);
    for (int i = 0; i < h; ++i) out.at(i, j) = mins[i];
  });
  return out;
}

}  // namespace msdehaze
