#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace simdeck {

/// Row-major, interleaved-channel raster. Row 0 is the top row.
template <class T>
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<T> data;

  Image() = default;
  Image(int w, int h, int c = 1, T fill = T{})
      : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, fill) {}

  std::size_t index(int x, int y, int c = 0) const {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  T& at(int x, int y, int c = 0) { return data[index(x, y, c)]; }
  const T& at(int x, int y, int c = 0) const { return data[index(x, y, c)]; }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
  bool empty() const { return data.empty(); }

  bool operator==(const Image&) const = default;
};

/// Simulation-side pixel values (any real range).
using ImageBuffer = Image<double>;
/// Display-ready 8-bit pixels (1 = gray, 3 = RGB).
using Image8 = Image<std::uint8_t>;

}  // namespace simdeck
