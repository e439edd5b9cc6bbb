#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "vjface/image.hpp"

namespace vjface {

enum class HaarKind : std::uint8_t {
  two_horizontal,    // [dark | light]
  two_vertical,      // dark over light
  three_horizontal,  // [light | dark | light], dark weighted x2
  three_vertical,
  four,              // dark on the main diagonal
};

inline constexpr int haar_kind_count = 5;

std::string_view to_string(HaarKind kind);
HaarKind parse_haar_kind(std::string_view name);

/// Number of unit cells a kind spans horizontally / vertically.
int cells_wide(HaarKind kind);
int cells_high(HaarKind kind);

struct HaarFeature {
  HaarKind kind = HaarKind::two_horizontal;
  int x = 0;
  int y = 0;
  int unit_w = 1;
  int unit_h = 1;

  int footprint_w() const { return cells_wide(kind) * unit_w; }
  int footprint_h() const { return cells_high(kind) * unit_h; }

  friend bool operator==(const HaarFeature&, const HaarFeature&) = default;
  /// Enumeration order: kind, then y, x, unit_h, unit_w.
  friend std::strong_ordering operator<=>(const HaarFeature& a, const HaarFeature& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.y <=> b.y; c != 0) return c;
    if (auto c = a.x <=> b.x; c != 0) return c;
    if (auto c = a.unit_h <=> b.unit_h; c != 0) return c;
    return a.unit_w <=> b.unit_w;
  }
};

struct WindowSpec {
  int base_size = 24;
  friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

void validate(const WindowSpec& win);
bool fits(const HaarFeature& f, const WindowSpec& win);

/// Every placement and unit size of the five kinds that fits the window,
/// strictly ascending under HaarFeature's ordering.
std::vector<HaarFeature> enumerate_features(WindowSpec win);

/// Deterministic subset of `count` features (seeded draw without
/// replacement), returned in enumeration order.
std::vector<HaarFeature> sample_features(std::span<const HaarFeature> features,
                                         std::size_t count, std::uint64_t seed);

/// Dark-minus-light response of `f` for the window at `origin` scaled by
/// `scale`, divided by the scaled window area (base_size * scale)^2.
/// Sub-rectangle edges are placed at origin + round(offset * scale) so
/// siblings share edges exactly; when rounding leaves a cell with an area
/// other than unit_w * unit_h * scale^2, its sum is rescaled to that
/// nominal area. Scale 1 and integer scales are plain rectangle sums.
double evaluate_feature(const IntegralImage& ii, const HaarFeature& f, WindowSpec win,
                        Point origin, double scale);

}  // namespace vjface
