#include "vjface/corpus.hpp"

#include <algorithm>
#include <cmath>

namespace vjface {

namespace {

std::uint8_t clamp8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

int noise(Rng& rng, int amplitude) { return amplitude > 0 ? rng.between(-amplitude, amplitude) : 0; }

// Paints the part of the motif that falls inside a stride x rows canvas.
void paint_motif(std::vector<std::uint8_t>& px, int stride, Rect at, const MotifStyle& style,
                 Rng& rng) {
  const int rows = static_cast<int>(px.size()) / stride;
  const Rect band = motif_eye_band(at.w);
  for (int y = 0; y < at.h; ++y) {
    for (int x = 0; x < at.w; ++x) {
      const bool in_band = x >= band.x && x < band.right() && y >= band.y && y < band.bottom();
      const int base = in_band ? style.eye_band : style.face_field;
      const int v = base + noise(rng, style.noise);
      const int cx = at.x + x, cy = at.y + y;
      if (cx < 0 || cy < 0 || cx >= stride || cy >= rows) continue;
      px[static_cast<std::size_t>(cy) * stride + cx] = clamp8(v);
    }
  }
}

// A motif seen through a slightly misregistered window: random size within
// +-jitter of the canvas, shifted by up to jitter * size, on a flat noisy
// surround.
GrayImage render_jittered(int size, double jitter, const MotifStyle& style, Rng& rng) {
  if (jitter <= 0.0) return render_motif(size, style, rng);
  const int spread = static_cast<int>(std::lround(jitter * size));
  const int shift = static_cast<int>(std::lround(jitter * size / 2));
  const int m = std::max(1, size + rng.between(-spread, spread));
  const int x = (size - m) / 2 + rng.between(-shift, shift);
  const int y = (size - m) / 2 + rng.between(-shift, shift);
  const int level = rng.between(40, 140);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(size) * size);
  for (auto& p : px) p = clamp8(level + noise(rng, style.noise));
  paint_motif(px, size, Rect{x, y, m, m}, style, rng);
  return GrayImage(size, size, std::move(px));
}

}  // namespace

Rect motif_eye_band(int size) {
  const int x0 = static_cast<int>(std::lround(0.12 * size));
  const int x1 = static_cast<int>(std::lround(0.88 * size));
  const int y0 = static_cast<int>(std::lround(0.22 * size));
  const int y1 = std::max(y0 + 1, static_cast<int>(std::lround(0.42 * size)));
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

Rect motif_lower_half(int size) { return Rect{0, size / 2, size, size - size / 2}; }

GrayImage render_motif(int size, const MotifStyle& style, Rng& rng) {
  if (size < 1) throw DimensionError("motif size must be >= 1");
  std::vector<std::uint8_t> px(static_cast<std::size_t>(size) * size);
  paint_motif(px, size, Rect{0, 0, size, size}, style, rng);
  return GrayImage(size, size, std::move(px));
}

GrayImage render_background(int width, int height, const MotifStyle& style, Rng& rng) {
  if (width < 1 || height < 1) throw DimensionError("background dimensions must be >= 1");
  std::vector<int> level(static_cast<std::size_t>(width) * height);
  switch (rng.below(3)) {
    case 0: {
      std::fill(level.begin(), level.end(), rng.between(20, 235));
      break;
    }
    case 1: {
      const double from = rng.between(20, 235);
      const double to = rng.between(20, 235);
      const double angle = rng.uniform(0.0, 2.0 * std::acos(-1.0));
      const double dx = std::cos(angle);
      const double dy = std::sin(angle);
      const double span = std::abs(dx) * width + std::abs(dy) * height;
      const double x0 = dx < 0 ? width : 0.0;
      const double y0 = dy < 0 ? height : 0.0;
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          const double t = ((x - x0) * dx + (y - y0) * dy) / span;
          level[static_cast<std::size_t>(y) * width + x] = static_cast<int>(std::lround(from + (to - from) * t));
        }
      }
      break;
    }
    default: {
      std::fill(level.begin(), level.end(), rng.between(20, 235));
      const int blobs = rng.between(3, 8);
      for (int b = 0; b < blobs; ++b) {
        const int w = rng.between(2, std::max(2, width / 2));
        const int h = rng.between(2, std::max(2, height / 2));
        const int x = rng.between(0, std::max(0, width - w));
        const int y = rng.between(0, std::max(0, height - h));
        const int v = rng.between(0, 255);
        for (int yy = y; yy < std::min(height, y + h); ++yy) {
          for (int xx = x; xx < std::min(width, x + w); ++xx) {
            level[static_cast<std::size_t>(yy) * width + xx] = v;
          }
        }
      }
      break;
    }
  }
  std::vector<std::uint8_t> px(level.size());
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = clamp8(level[i] + noise(rng, style.noise));
  return GrayImage(width, height, std::move(px));
}

Corpus generate_corpus(const SyntheticCorpusSpec& spec) {
  if (spec.jitter < 0.0 || spec.jitter > 0.5) throw DimensionError("jitter must lie in [0, 0.5]");
  Rng rng(spec.seed);
  Corpus c;
  c.positives.reserve(spec.n_pos);
  for (std::size_t i = 0; i < spec.n_pos; ++i) {
    c.positives.push_back(render_jittered(spec.image_size, spec.jitter, spec.motif, rng));
  }
  c.negatives.reserve(spec.n_neg);
  for (std::size_t i = 0; i < spec.n_neg; ++i) {
    c.negatives.push_back(render_background(spec.negative_size, spec.negative_size, spec.motif, rng));
  }
  return c;
}

Scene generate_scene(std::uint64_t seed, const SceneSpec& spec, bool with_motif) {
  if (spec.min_motif < 1 || spec.max_motif < spec.min_motif || spec.max_motif > spec.size) {
    throw DimensionError("scene motif size range does not fit the scene");
  }
  Rng rng(seed);
  if (!with_motif) return Scene{render_background(spec.size, spec.size, spec.motif, rng), std::nullopt};

  const int level = rng.between(40, 140);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(spec.size) * spec.size);
  for (auto& p : px) p = clamp8(level + noise(rng, spec.motif.noise));
  const int m = rng.between(spec.min_motif, spec.max_motif);
  const Rect at{rng.between(0, spec.size - m), rng.between(0, spec.size - m), m, m};
  paint_motif(px, spec.size, at, spec.motif, rng);
  return Scene{GrayImage(spec.size, spec.size, std::move(px)), at};
}

}  // namespace vjface
