#include "vjface/detector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

namespace vjface {

std::string_view to_string(Part part) {
  switch (part) {
    case Part::face: return "face";
    case Part::eye: return "eye";
    case Part::nose: return "nose";
    case Part::mouth: return "mouth";
  }
  return "?";
}

Part parse_part(std::string_view name) {
  for (auto p : {Part::face, Part::eye, Part::nose, Part::mouth}) {
    if (to_string(p) == name) return p;
  }
  throw FormatError(0, "unknown part label '" + std::string(name) + "'");
}

void validate(const ScanConfig& cfg) {
  if (!(cfg.scale_start >= 1.0)) throw DimensionError("scale_start must be >= 1");
  if (!(cfg.scale_factor > 1.0)) throw DimensionError("scale_factor must be > 1");
  if (!(cfg.stride_fraction > 0.0 && cfg.stride_fraction <= 1.0)) {
    throw DimensionError("stride_fraction must lie in (0, 1]");
  }
  if (!(cfg.nms_iou > 0.0 && cfg.nms_iou < 1.0)) throw DimensionError("nms_iou must lie in (0, 1)");
}

bool canonical_before(const Detection& a, const Detection& b) {
  if (a.score != b.score) return a.score > b.score;
  return std::tie(a.rect.y, a.rect.x, a.scale) < std::tie(b.rect.y, b.rect.x, b.scale);
}

double iou(const Rect& a, const Rect& b) {
  const int ix = std::max(0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
  const int iy = std::max(0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
  const double inter = static_cast<double>(ix) * iy;
  const double uni = static_cast<double>(a.area()) + static_cast<double>(b.area()) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<double> scan_scales(WindowSpec window, int width, int height, const ScanConfig& cfg) {
  std::vector<double> scales;
  const int limit = std::min(width, height);
  for (int k = 0;; ++k) {
    const double s = cfg.scale_start * std::pow(cfg.scale_factor, k);
    if (window.base_size * s > limit) break;
    scales.push_back(s);
  }
  return scales;
}

std::vector<Detection> scan(const Cascade& cascade, const IntegralImage& ii,
                            const ScanConfig& cfg, CascadeCounters* counters) {
  validate(cfg);
  const int base = cascade.window.base_size;
  if (ii.width() < base || ii.height() < base) {
    throw ImageTooSmallError("image " + std::to_string(ii.width()) + "x" +
                             std::to_string(ii.height()) + " is smaller than the " +
                             std::to_string(base) + " px detection window");
  }
  std::vector<Detection> hits;
  for (double s : scan_scales(cascade.window, ii.width(), ii.height(), cfg)) {
    const int extent = static_cast<int>(std::lround(base * s));
    const int stride = std::max(1, static_cast<int>(std::lround(cfg.stride_fraction * base * s)));
    for (int y = 0; y + extent <= ii.height(); y += stride) {
      for (int x = 0; x + extent <= ii.width(); x += stride) {
        const auto v = classify_window(cascade, ii, Point{x, y}, s, counters);
        if (v.accepted) hits.push_back(Detection{Rect{x, y, extent, extent}, v.score, s, Part::face});
      }
    }
  }
  std::sort(hits.begin(), hits.end(), canonical_before);
  return hits;
}

std::vector<Detection> non_max_suppression(std::span<const Detection> detections,
                                           double iou_threshold) {
  std::vector<Detection> pending(detections.begin(), detections.end());
  std::sort(pending.begin(), pending.end(), canonical_before);
  std::vector<Detection> kept;
  for (const auto& d : pending) {
    const bool overlapped = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
      return iou(k.rect, d.rect) > iou_threshold;
    });
    if (!overlapped) kept.push_back(d);
  }
  return kept;
}

std::vector<Detection> detect(const Cascade& cascade, const GrayImage& img,
                              const ScanConfig& cfg, CascadeCounters* counters) {
  validate(cfg);
  if (img.width() < cascade.window.base_size || img.height() < cascade.window.base_size) {
    throw ImageTooSmallError("image is smaller than the detection window");
  }
  const IntegralImage ii(img);
  const auto hits = scan(cascade, ii, cfg, counters);
  return non_max_suppression(hits, cfg.nms_iou);
}

std::vector<Detection> detect_parts(const Detection& face, const GrayImage& img,
                                    const std::map<Part, Cascade>& part_cascades,
                                    const ScanConfig& cfg) {
  std::vector<Detection> out;
  if (part_cascades.empty()) return out;
  const GrayImage region = crop(img, face.rect);
  for (const auto& [part, cascade] : part_cascades) {
    const int base = cascade.window.base_size;
    if (region.width() < base || region.height() < base) continue;
    for (auto d : detect(cascade, region, cfg)) {
      d.rect.x += face.rect.x;
      d.rect.y += face.rect.y;
      d.part = part;
      out.push_back(d);
    }
  }
  return out;
}

std::string format_detection(const Detection& d) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s %d %d %d %d %.6g %.6g", std::string(to_string(d.part)).c_str(),
                d.rect.x, d.rect.y, d.rect.w, d.rect.h, d.scale, d.score);
  return buf;
}

}  // namespace vjface
