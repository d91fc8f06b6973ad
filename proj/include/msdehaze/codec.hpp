#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "msdehaze/image.hpp"

namespace msdehaze {

enum class IoStatus {
  kUnreadable,        // file missing or not readable
  kBadMagic,          // not a binary PPM/PGM
  kUnsupportedDepth,  // maxval other than 255
  kZeroSized,         // header declares an empty raster
  kTruncated,         // pixel payload shorter than the header promises
  kUnwritable,
};

class IoError : public std::runtime_error {
 public:
  IoError(IoStatus status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  IoStatus status() const { return status_; }

 private:
  IoStatus status_;
};

namespace detail {

inline long pnm_value(std::istream& in, const std::string& path) {
  // Whitespace and '#' comments may appear between header fields.
  int ch = in.get();
  while (ch != EOF) {
    if (ch == '#') {
      while (ch != EOF && ch != '\n') ch = in.get();
    } else if (!std::isspace(ch)) {
      break;
    }
    ch = in.get();
  }
  if (ch == EOF || !std::isdigit(ch))
    throw IoError(IoStatus::kBadMagic, path + ": malformed header");
  long value = 0;
  while (ch != EOF && std::isdigit(ch)) {
    value = value * 10 + (ch - '0');
    if (value > 1000000)
      throw IoError(IoStatus::kBadMagic, path + ": header value out of range");
    ch = in.get();
  }
  if (ch != EOF) in.unget();
  return value;
}

}  // namespace detail

// Binary PPM (P6) and PGM (P5), maxval 255. Byte u maps to u/255 exactly.
inline Image load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoStatus::kUnreadable, path + ": cannot open file");

  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (!in || m0 != 'P' || (m1 != '5' && m1 != '6'))
    throw IoError(IoStatus::kBadMagic, path + ": not a binary PPM/PGM file");
  const int channels = (m1 == '6') ? 3 : 1;

  const long width = detail::pnm_value(in, path);
  const long height = detail::pnm_value(in, path);
  const long maxval = detail::pnm_value(in, path);
  if (width < 1 || height < 1)
    throw IoError(IoStatus::kZeroSized, path + ": zero-sized image");
  if (maxval != 255)
    throw IoError(IoStatus::kUnsupportedDepth,
                  path + ": only 8-bit rasters are supported");
  in.get();  // single whitespace byte before the payload

  const std::size_t count =
      static_cast<std::size_t>(width) * height * channels;
  std::vector<std::uint8_t> bytes(count);
  in.read(reinterpret_cast<char*>(bytes.data()),
          static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in.gcount()) != count)
    throw IoError(IoStatus::kTruncated, path + ": truncated pixel data");

  Image img(static_cast<int>(width), static_cast<int>(height), channels);
  // Interleaved on disk, planar in memory.
  for (int c = 0; c < channels; ++c) {
    double* plane = img.plane(c);
    const std::uint8_t* src = bytes.data() + c;
    for (std::size_t k = 0; k < img.plane_size(); ++k)
      plane[k] = src[k * channels] / 255.0;
  }
  return img;
}

inline std::uint8_t quantize255(double v) {
  const double r = std::floor(v * 255.0 + 0.5);  // round half up
  return static_cast<std::uint8_t>(r < 0.0 ? 0.0 : (r > 255.0 ? 255.0 : r));
}

inline void save_image(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(IoStatus::kUnwritable, path + ": cannot open for writing");
  out << (img.channels() == 3 ? "P6\n" : "P5\n")
      << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<std::uint8_t> bytes(img.size());
  for (int c = 0; c < img.channels(); ++c) {
    const double* plane = img.plane(c);
    std::uint8_t* dst = bytes.data() + c;
    for (std::size_t k = 0; k < img.plane_size(); ++k)
      dst[k * img.channels()] = quantize255(plane[k]);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(IoStatus::kUnwritable, path + ": write failed");
}

}  // namespace msdehaze
