#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vjface/cascade.hpp"
#include "vjface/image.hpp"

namespace vjface {

enum class Part { face, eye, nose, mouth };

std::string_view to_string(Part part);
Part parse_part(std::string_view name);

struct Detection {
  Rect rect;
  double score = 0.0;  // final-stage margin
  double scale = 1.0;
  Part part = Part::face;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct ScanConfig {
  double scale_start = 1.0;
  double scale_factor = 1.25;
  double stride_fraction = 1.0 / 12.0;
  double nms_iou = 0.3;
};

void validate(const ScanConfig& cfg);

/// Canonical output order: score descending, then (y, x, scale) ascending.
bool canonical_before(const Detection& a, const Detection& b);

double iou(const Rect& a, const Rect& b);

/// Scales visited by a scan: scale_start * scale_factor^k while
/// base * scale <= min(width, height).
std::vector<double> scan_scales(WindowSpec window, int width, int height, const ScanConfig& cfg);

/// Every accepted window before suppression, canonically sorted.
std::vector<Detection> scan(const Cascade& cascade, const IntegralImage& ii,
                            const ScanConfig& cfg, CascadeCounters* counters = nullptr);

/// Greedy suppression: keep the best remaining detection, drop the rest
/// whose IoU with it exceeds `iou_threshold`.
std::vector<Detection> non_max_suppression(std::span<const Detection> detections,
                                           double iou_threshold);

/// Multi-scale sliding-window detection followed by suppression.
std::vector<Detection> detect(const Cascade& cascade, const GrayImage& img,
                              const ScanConfig& cfg, CascadeCounters* counters = nullptr);

/// Runs each part cascade over the crop of `face` and maps the hits back
/// to source-image coordinates. Parts whose window exceeds the crop are skipped.
std::vector<Detection> detect_parts(const Detection& face, const GrayImage& img,
                                    const std::map<Part, Cascade>& part_cascades,
                                    const ScanConfig& cfg);

/// `part x y w h scale score`, scale and score with 6 significant digits.
std::string format_detection(const Detection& d);

}  // namespace vjface
