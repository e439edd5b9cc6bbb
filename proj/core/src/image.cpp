#include "vjface/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vjface {

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1) throw DimensionError("image dimensions must be >= 1");
  if (data_.size() != 3 * static_cast<std::size_t>(width) * height) {
    throw DimensionError("RGB buffer length does not match width x height x 3");
  }
}

IntegralImage::IntegralImage(const GrayImage& img)
    : width_(img.width()),
      height_(img.height()),
      table_(static_cast<std::size_t>(img.width() + 1) * (img.height() + 1), 0) {
  const std::size_t stride = static_cast<std::size_t>(width_) + 1;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const std::size_t i = static_cast<std::size_t>(y + 1) * stride + (x + 1);
      table_[i] = img.at(x, y) + table_[i - 1] + table_[i - stride] - table_[i - stride - 1];
    }
  }
}

GrayImage rgb_to_gray(const RgbImage& img) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(img.width()) * img.height());
  const auto src = img.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double luma = 0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2];
    out[i] = static_cast<std::uint8_t>(std::clamp(std::lround(luma), 0L, 255L));
  }
  return GrayImage(img.width(), img.height(), std::move(out));
}

namespace {

__extension__ typedef unsigned __int128 u128;

// a/b < c/d for b, d > 0, exact, via continued-fraction expansion.
bool fraction_less(u128 a, u128 b, u128 c, u128 d) {
  for (;;) {
    const u128 qa = a / b, qc = c / d;
    if (qa != qc) return qa < qc;
    const u128 ra = a % b, rc = c % d;
    if (ra == 0 || rc == 0) return ra == 0 && rc != 0;
    // ra/b < rc/d  <=>  d/rc < b/ra
    a = d;
    c = b;
    b = rc;
    d = ra;
  }
}

}  // namespace

int otsu_threshold(const GrayImage& img) {
  const Histogram hist = histogram(img);
  const u128 total = hist.total;
  u128 weighted_total = 0;
  for (int v = 0; v < 256; ++v) weighted_total += static_cast<u128>(v) * hist.bins[v];

  // Between-class variance up to a constant: (s0*n1 - s1*n0)^2 / (n0*n1).
  int best_t = -1;
  u128 best_num = 0, best_den = 1;
  u128 n0 = 0, s0 = 0;
  for (int t = 1; t < 256; ++t) {
    n0 += hist.bins[t - 1];
    s0 += static_cast<u128>(t - 1) * hist.bins[t - 1];
    const u128 n1 = total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const u128 s1 = weighted_total - s0;
    // s0/n0 <= s1/n1 always, so the difference is s1*n0 - s0*n1 >= 0.
    const u128 diff = s1 * n0 - s0 * n1;
    const u128 den = n0 * n1;
    // diff < 2^64 for images under 2^28 pixels, so diff^2 fits.
    const u128 num = diff * diff;
    if (best_t < 0 || fraction_less(best_num, best_den, num, den)) {
      best_t = t;
      best_num = num;
      best_den = den;
    }
  }
  return best_t < 0 ? default_binary_threshold : best_t;
}

BinaryImage gray_to_binary(const GrayImage& img, int threshold) {
  if (threshold < 0 || threshold > 255) throw DimensionError("threshold must lie in [0, 255]");
  std::vector<std::uint8_t> out(img.data().size());
  std::transform(img.data().begin(), img.data().end(), out.begin(),
                 [threshold](std::uint8_t v) { return static_cast<std::uint8_t>(v >= threshold); });
  return BinaryImage(img.width(), img.height(), std::move(out));
}

BinaryImage gray_to_binary(const GrayImage& img, AutoThreshold) {
  return gray_to_binary(img, otsu_threshold(img));
}

namespace {

template <PixelKind K>
Histogram count_levels(const Plane<K>& img, std::size_t levels) {
  Histogram h{std::vector<std::uint64_t>(levels, 0), 0};
  for (auto v : img.data()) ++h.bins[v];
  h.total = img.data().size();
  return h;
}

template <PixelKind K>
Plane<K> crop_plane(const Plane<K>& img, Rect r) {
  if (!r.inside(img.width(), img.height())) {
    throw BoundsError("crop rectangle exceeds image extent");
  }
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(r.area()));
  for (int y = r.y; y < r.bottom(); ++y) {
    const auto row = img.data().subspan(static_cast<std::size_t>(y) * img.width() + r.x, r.w);
    out.insert(out.end(), row.begin(), row.end());
  }
  return Plane<K>(r.w, r.h, std::move(out));
}

template <PixelKind K>
std::vector<Plane<K>> split_grid(const Plane<K>& img, int rows, int cols) {
  if (rows < 1 || cols < 1) throw DimensionError("grid rows and cols must be >= 1");
  if (rows > img.height() || cols > img.width()) {
    throw DimensionError("grid of " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " exceeds image of " + std::to_string(img.width()) + "x" +
                         std::to_string(img.height()));
  }
  const auto ys = grid_boundaries(img.height(), rows);
  const auto xs = grid_boundaries(img.width(), cols);
  std::vector<Plane<K>> tiles;
  tiles.reserve(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      tiles.push_back(crop_plane(img, Rect{xs[j], ys[i], xs[j + 1] - xs[j], ys[i + 1] - ys[i]}));
    }
  }
  return tiles;
}

}  // namespace

Histogram histogram(const GrayImage& img) { return count_levels(img, 256); }
Histogram histogram(const BinaryImage& img) { return count_levels(img, 2); }

std::vector<int> grid_boundaries(int extent, int parts) {
  std::vector<int> b(static_cast<std::size_t>(parts) + 1);
  for (int i = 0; i <= parts; ++i) {
    // round(i * extent / parts), halves rounded up
    const long long num = 2LL * i * extent + parts;
    b[i] = static_cast<int>(num / (2LL * parts));
  }
  return b;
}

std::vector<GrayImage> segment_grid(const GrayImage& img, int rows, int cols) {
  return split_grid(img, rows, cols);
}

std::vector<BinaryImage> segment_grid(const BinaryImage& img, int rows, int cols) {
  return split_grid(img, rows, cols);
}

GrayImage crop(const GrayImage& img, Rect r) { return crop_plane(img, r); }

GrayImage resize_nearest(const GrayImage& img, int width, int height) {
  if (width < 1 || height < 1) throw DimensionError("resize target must be >= 1x1");
  std::vector<std::uint8_t> out(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    // source sample at the destination pixel centre
    const int sy = static_cast<int>((2LL * y + 1) * img.height() / (2LL * height));
    for (int x = 0; x < width; ++x) {
      const int sx = static_cast<int>((2LL * x + 1) * img.width() / (2LL * width));
      out[static_cast<std::size_t>(y) * width + x] = img.at(sx, sy);
    }
  }
  return GrayImage(width, height, std::move(out));
}

IntegralImage integral_image(const GrayImage& img) { return IntegralImage(img); }

std::int64_t rect_sum(const IntegralImage& ii, Rect r) {
  if (!r.inside(ii.width(), ii.height())) {
    throw BoundsError("rectangle (" + std::to_string(r.x) + "," + std::to_string(r.y) + "," +
                      std::to_string(r.w) + "," + std::to_string(r.h) +
                      ") exceeds integral image extent");
  }
  const int x1 = r.x + r.w - 1;
  const int y1 = r.y + r.h - 1;
  return ii.at(x1, y1) - ii.at(r.x - 1, y1) - ii.at(x1, r.y - 1) + ii.at(r.x - 1, r.y - 1);
}

}  // namespace vjface
