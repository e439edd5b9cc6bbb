#include "vjface/haar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "vjface/rng.hpp"

namespace vjface {

std::string_view to_string(HaarKind kind) {
  switch (kind) {
    case HaarKind::two_horizontal: return "two_h";
    case HaarKind::two_vertical: return "two_v";
    case HaarKind::three_horizontal: return "three_h";
    case HaarKind::three_vertical: return "three_v";
    case HaarKind::four: return "four";
  }
  return "?";
}

HaarKind parse_haar_kind(std::string_view name) {
  for (int k = 0; k < haar_kind_count; ++k) {
    const auto kind = static_cast<HaarKind>(k);
    if (to_string(kind) == name) return kind;
  }
  throw FormatError(0, "unknown Haar feature kind '" + std::string(name) + "'");
}

int cells_wide(HaarKind kind) {
  switch (kind) {
    case HaarKind::two_horizontal: return 2;
    case HaarKind::three_horizontal: return 3;
    case HaarKind::four: return 2;
    default: return 1;
  }
}

int cells_high(HaarKind kind) {
  switch (kind) {
    case HaarKind::two_vertical: return 2;
    case HaarKind::three_vertical: return 3;
    case HaarKind::four: return 2;
    default: return 1;
  }
}

void validate(const WindowSpec& win) {
  if (win.base_size < 8) throw DimensionError("window base_size must be >= 8");
}

bool fits(const HaarFeature& f, const WindowSpec& win) {
  return f.unit_w >= 1 && f.unit_h >= 1 && f.x >= 0 && f.y >= 0 &&
         f.x + f.footprint_w() <= win.base_size && f.y + f.footprint_h() <= win.base_size;
}

std::vector<HaarFeature> enumerate_features(WindowSpec win) {
  validate(win);
  const int n = win.base_size;
  std::vector<HaarFeature> out;
  for (int k = 0; k < haar_kind_count; ++k) {
    const auto kind = static_cast<HaarKind>(k);
    const int cw = cells_wide(kind);
    const int ch = cells_high(kind);
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        for (int uh = 1; y + ch * uh <= n; ++uh) {
          for (int uw = 1; x + cw * uw <= n; ++uw) {
            out.push_back(HaarFeature{kind, x, y, uw, uh});
          }
        }
      }
    }
  }
  return out;
}

std::vector<HaarFeature> sample_features(std::span<const HaarFeature> features,
                                         std::size_t count, std::uint64_t seed) {
  if (count >= features.size()) return {features.begin(), features.end()};
  std::vector<std::size_t> idx(features.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  std::vector<HaarFeature> out;
  out.reserve(count);
  for (auto i : idx) out.push_back(features[i]);
  return out;
}

namespace {

inline int scaled(int offset, double scale) {
  return static_cast<int>(std::lround(offset * scale));
}

inline std::int64_t cell(const IntegralImage& ii, int x0, int x1, int y0, int y1) {
  return rect_sum(ii, Rect{x0, y0, x1 - x0, y1 - y0});
}

}  // namespace

double evaluate_feature(const IntegralImage& ii, const HaarFeature& f, WindowSpec win,
                        Point origin, double scale) {
  if (!(scale > 0.0)) throw DimensionError("feature scale must be positive");
  const int cw = cells_wide(f.kind);
  const int ch = cells_high(f.kind);

  std::array<int, 4> xs{};
  std::array<int, 4> ys{};
  for (int i = 0; i <= cw; ++i) xs[i] = origin.x + scaled(f.x + i * f.unit_w, scale);
  for (int j = 0; j <= ch; ++j) ys[j] = origin.y + scaled(f.y + j * f.unit_h, scale);
  for (int i = 0; i < cw; ++i) {
    if (xs[i + 1] - xs[i] < 1) throw DimensionError("scaled feature cell narrower than 1 px");
  }
  for (int j = 0; j < ch; ++j) {
    if (ys[j + 1] - ys[j] < 1) throw DimensionError("scaled feature cell shorter than 1 px");
  }
  if (xs[0] < 0 || ys[0] < 0 || xs[cw] > ii.width() || ys[ch] > ii.height()) {
    throw BoundsError("feature footprint exits the image");
  }

  // Cell sums are rescaled to the cell's nominal area so rounding at
  // non-integer scales keeps the zero response on flat regions. At integer
  // scales every factor is exactly 1.
  const double nominal = static_cast<double>(f.unit_w) * f.unit_h * scale * scale;
  auto cell_at = [&](int i, int j) {
    const std::int64_t sum = cell(ii, xs[i], xs[i + 1], ys[j], ys[j + 1]);
    const std::int64_t area = static_cast<std::int64_t>(xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
    return static_cast<double>(area) == nominal ? static_cast<double>(sum)
                                                 : static_cast<double>(sum) * nominal / static_cast<double>(area);
  };

  double value = 0.0;
  switch (f.kind) {
    case HaarKind::two_horizontal:
      value = cell_at(0, 0) - cell_at(1, 0);
      break;
    case HaarKind::two_vertical:
      value = cell_at(0, 0) - cell_at(0, 1);
      break;
    case HaarKind::three_horizontal:
      value = 2 * cell_at(1, 0) - cell_at(0, 0) - cell_at(2, 0);
      break;
    case HaarKind::three_vertical:
      value = 2 * cell_at(0, 1) - cell_at(0, 0) - cell_at(0, 2);
      break;
    case HaarKind::four:
      value = cell_at(0, 0) + cell_at(1, 1) - cell_at(1, 0) - cell_at(0, 1);
      break;
  }
  const double side = win.base_size * scale;
  return value / (side * side);
}

}  // namespace vjface
