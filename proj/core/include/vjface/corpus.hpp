#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vjface/image.hpp"
#include "vjface/rng.hpp"

namespace vjface {

/// Synthetic "face": a dark eye band across the upper half of a brighter
/// face field, plus uniform additive noise.
struct MotifStyle {
  int eye_band = 60;
  int face_field = 180;
  int noise = 20;  // amplitude; each pixel gets an offset in [-noise, noise]
};

/// Eye-band rectangle inside a size x size motif.
Rect motif_eye_band(int size);
/// Lower half of a size x size motif.
Rect motif_lower_half(int size);

GrayImage render_motif(int size, const MotifStyle& style, Rng& rng);

/// Face-free content: flat noise, a noisy linear gradient, or noisy clutter
/// of random rectangles.
GrayImage render_background(int width, int height, const MotifStyle& style, Rng& rng);

struct SyntheticCorpusSpec {
  std::uint64_t seed = 1;
  std::size_t n_pos = 200;
  std::size_t n_neg = 500;
  int image_size = 24;     // positives are image_size x image_size motifs
  int negative_size = 64;  // negatives are negative_size x negative_size backgrounds
  // Registration jitter of positives: motif size and offset vary by up to
  // jitter * image_size, the uncovered border is a flat noisy surround.
  // 0 renders the motif edge to edge.
  double jitter = 0.1;
  MotifStyle motif;
};

struct Corpus {
  std::vector<GrayImage> positives;
  std::vector<GrayImage> negatives;
};

Corpus generate_corpus(const SyntheticCorpusSpec& spec);

struct SceneSpec {
  int size = 64;
  int min_motif = 16;
  int max_motif = 24;
  MotifStyle motif;
};

struct Scene {
  GrayImage image;
  std::optional<Rect> motif;
};

/// With a motif: one motif of random size at a random position on a flat
/// noisy background. Without: render_background content.
Scene generate_scene(std::uint64_t seed, const SceneSpec& spec, bool with_motif);

}  // namespace vjface
