#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "vjface/error.hpp"
#include "vjface/probe.hpp"

namespace vjface {

// Coordinates: x = column, y = row, origin at the top-left pixel.

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Rect {
  int x = 0;
  int y = 0;
  int w = 1;
  int h = 1;

  long long area() const { return static_cast<long long>(w) * h; }
  int right() const { return x + w; }    // exclusive
  int bottom() const { return y + h; }   // exclusive
  bool inside(int width, int height) const {
    return w >= 1 && h >= 1 && x >= 0 && y >= 0 && x + w <= width && y + h <= height;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
};

class RgbImage {
 public:
  RgbImage(int width, int height, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const std::uint8_t> data() const { return data_; }
  Rgb at(int x, int y) const {
    const auto i = 3 * (static_cast<std::size_t>(y) * width_ + x);
    return {data_[i], data_[i + 1], data_[i + 2]};
  }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

enum class PixelKind { gray, binary };

/// Single-channel 8-bit raster. Binary planes hold only 0 and 1.
template <PixelKind Kind>
class Plane {
 public:
  Plane(int width, int height, std::vector<std::uint8_t> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 1 || height < 1) throw DimensionError("image dimensions must be >= 1");
    if (data_.size() != static_cast<std::size_t>(width) * height) {
      throw DimensionError("pixel buffer length does not match width x height");
    }
    if constexpr (Kind == PixelKind::binary) {
      for (auto v : data_) {
        if (v > 1) throw DimensionError("binary image pixels must be 0 or 1");
      }
    }
  }

  static Plane filled(int width, int height, std::uint8_t value) {
    return Plane(width, height,
                 std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, value));
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const std::uint8_t> data() const { return data_; }
  std::uint8_t at(int x, int y) const {
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

using GrayImage = Plane<PixelKind::gray>;
using BinaryImage = Plane<PixelKind::binary>;

struct Histogram {
  std::vector<std::uint64_t> bins;
  std::uint64_t total = 0;
};

/// Summed-area table. Stored with a zero row and column in front so that
/// out-of-range (-1) terms read as 0 without branching.
class IntegralImage {
 public:
  explicit IntegralImage(const GrayImage& img);

  int width() const { return width_; }
  int height() const { return height_; }

  /// ii(x, y) for x in [-1, width), y in [-1, height); -1 reads as 0.
  std::int64_t at(int x, int y) const {
    ++probe::table_lookups();
    return table_[static_cast<std::size_t>(y + 1) * (width_ + 1) + (x + 1)];
  }

 private:
  int width_;
  int height_;
  std::vector<std::int64_t> table_;
};

GrayImage rgb_to_gray(const RgbImage& img);

struct AutoThreshold {};
inline constexpr AutoThreshold auto_threshold{};

inline constexpr int default_binary_threshold = 128;

/// Otsu threshold over the 256-bin histogram: the smallest t in [1, 255]
/// maximizing between-class variance of {v < t} vs {v >= t}. Single-valued
/// images fall back to the default threshold.
int otsu_threshold(const GrayImage& img);

BinaryImage gray_to_binary(const GrayImage& img, int threshold = default_binary_threshold);
BinaryImage gray_to_binary(const GrayImage& img, AutoThreshold);

Histogram histogram(const GrayImage& img);
Histogram histogram(const BinaryImage& img);

/// rows x cols tiles in row-major order; boundaries at round(i*h/rows),
/// round(j*w/cols).
std::vector<GrayImage> segment_grid(const GrayImage& img, int rows, int cols);
std::vector<BinaryImage> segment_grid(const BinaryImage& img, int rows, int cols);

/// Tile boundary offsets 0 = b0 < b1 < ... < bn = extent.
std::vector<int> grid_boundaries(int extent, int parts);

GrayImage crop(const GrayImage& img, Rect r);
GrayImage resize_nearest(const GrayImage& img, int width, int height);

IntegralImage integral_image(const GrayImage& img);

/// Sum of pixels inside r using four table reads.
std::int64_t rect_sum(const IntegralImage& ii, Rect r);

}  // namespace vjface
