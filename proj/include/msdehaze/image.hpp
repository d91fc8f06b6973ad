#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace msdehaze {

// Raster container used throughout the pipeline. Channel-planar layout,
// double precision. Scene images live in [0,1]; Laplacian residuals and
// airlight-shifted images reuse the container with signed values and
// quantize only when written to disk.
class Image {
 public:
  Image() = default;

  Image(int width, int height, int channels, double fill = 0.0)
      : width_(width),
        height_(height),
        channels_(channels),
        data_(checked_size(width, height, channels), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }
  std::size_t size() const { return data_.size(); }
  std::size_t plane_size() const {
    return static_cast<std::size_t>(width_) * height_;
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* plane(int c) { return data_.data() + c * plane_size(); }
  const double* plane(int c) const { return data_.data() + c * plane_size(); }

  double& at(int i, int j, int c = 0) { return data_[index(i, j, c)]; }
  double at(int i, int j, int c = 0) const { return data_[index(i, j, c)]; }

  bool same_size(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool same_shape(const Image& other) const {
    return same_size(other) && channels_ == other.channels_;
  }

 private:
  static std::size_t checked_size(int width, int height, int channels) {
    if (width < 1 || height < 1)
      throw std::invalid_argument("Image: width and height must be positive");
    if (channels != 1 && channels != 3)
      throw std::invalid_argument("Image: channels must be 1 or 3");
    return static_cast<std::size_t>(width) * height * channels;
  }

  std::size_t index(int i, int j, int c) const {
    return (c * static_cast<std::size_t>(height_) + i) * width_ + j;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

// Half-sample symmetric reflection: ... 2 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
// Total for any i, so window filters may overhang small images by more than
// one period.
inline int mirror_index(int i, int n) {
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

inline double sample_mirror(const Image& img, int i, int j, int c = 0) {
  return img.at(mirror_index(i, img.height()), mirror_index(j, img.width()), c);
}

inline double clamp01(double v) {
  return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

inline Image clamped01(Image img) {
  for (std::size_t k = 0; k < img.size(); ++k)
    img.data()[k] = clamp01(img.data()[k]);
  return img;
}

// Per-pixel minimum over channels; identity layout for 1-channel input.
inline Image channel_min(const Image& img) {
  Image out(img.width(), img.height(), 1);
  const std::size_t n = img.plane_size();
  const double* p0 = img.plane(0);
  std::copy(p0, p0 + n, out.data());
  for (int c = 1; c < img.channels(); ++c) {
    const double* pc = img.plane(c);
    double* o = out.data();
    for (std::size_t k = 0; k < n; ++k) o[k] = std::min(o[k], pc[k]);
  }
  return out;
}

}  // namespace msdehaze
