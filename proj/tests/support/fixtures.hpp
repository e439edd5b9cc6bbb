#pragma once

// Small trained models shared by several test files.

#include "vjface/cascade.hpp"
#include "vjface/corpus.hpp"
#include "vjface/haar.hpp"

namespace fixture {

struct DetectorFixture {
  vjface::Corpus corpus;
  vjface::Cascade cascade;
};

// Base-16 cascade on the synthetic motif corpus, sized to train in well
// under a second.
inline DetectorFixture small_detector(std::uint64_t seed = 5, std::size_t max_stages = 3) {
  vjface::SyntheticCorpusSpec spec;
  spec.seed = seed;
  spec.n_pos = 100;
  spec.n_neg = 40;
  spec.image_size = 16;
  spec.negative_size = 48;
  DetectorFixture f{vjface::generate_corpus(spec), {}};
  const vjface::WindowSpec win{16};
  const auto features = vjface::sample_features(vjface::enumerate_features(win), 800, seed);
  vjface::ImageWindowSource negatives(f.corpus.negatives, win, seed, 200'000);
  vjface::CascadeConfig cfg;
  cfg.max_stages = max_stages;
  cfg.max_weaks_per_stage = 30;
  cfg.per_stage_fpr = 0.1;
  cfg.negatives_per_stage = 150;
  cfg.overall_fpr_target = 1e-6;
  cfg.seed = seed;
  f.cascade = vjface::train_cascade(vjface::positive_windows(f.corpus.positives, win), negatives,
                                    features, win, cfg);
  return f;
}

}  // namespace fixture
