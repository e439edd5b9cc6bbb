#include "vjface/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace vjface {

namespace {

int window_extent(const WindowSpec& win, double scale) {
  return static_cast<int>(std::lround(win.base_size * scale));
}

}  // namespace

WindowVerdict classify_window(const Cascade& cascade, const IntegralImage& ii, Point origin,
                              double scale, CascadeCounters* counters) {
  const int extent = window_extent(cascade.window, scale);
  if (!Rect{origin.x, origin.y, extent, extent}.inside(ii.width(), ii.height())) {
    throw BoundsError("detection window exits the image");
  }
  if (counters && counters->stage_evaluations.size() < cascade.stages.size()) {
    counters->stage_evaluations.resize(cascade.stages.size(), 0);
    counters->feature_evaluations.resize(cascade.stages.size(), 0);
  }

  WindowVerdict verdict;
  for (std::size_t k = 0; k < cascade.stages.size(); ++k) {
    const auto& stage = cascade.stages[k];
    if (counters) {
      ++counters->stage_evaluations[k];
      counters->feature_evaluations[k] += stage.weaks.size();
    }
    const double score = stage.score([&](std::size_t f) {
      return evaluate_feature(ii, cascade.features[f], cascade.window, origin, scale);
    });
    verdict.score = score - stage.stage_threshold;
    if (score < stage.stage_threshold) {
      verdict.accepted = false;
      verdict.reject_stage = static_cast<int>(k) + 1;
      return verdict;
    }
  }
  return verdict;
}

ImageWindowSource::ImageWindowSource(std::span<const GrayImage> images, WindowSpec window,
                                     std::uint64_t seed, std::uint64_t max_draws,
                                     double scale_factor)
    : window_(window), rng_(seed), remaining_(max_draws) {
  validate(window);
  if (!(scale_factor > 1.0)) throw DimensionError("scale factor must exceed 1");
  for (const auto& img : images) {
    Entry e;
    const int limit = std::min(img.width(), img.height());
    for (double s = 1.0; window.base_size * s <= limit; s *= scale_factor) e.scales.push_back(s);
    if (e.scales.empty()) continue;
    e.ii = std::make_shared<const IntegralImage>(img);
    entries_.push_back(std::move(e));
  }
}

std::optional<TrainingWindow> ImageWindowSource::next() {
  if (entries_.empty() || remaining_ == 0) return std::nullopt;
  --remaining_;
  const auto& e = entries_[rng_.below(entries_.size())];
  const double scale = e.scales[rng_.below(e.scales.size())];
  const int extent = window_extent(window_, scale);
  const int x = rng_.between(0, e.ii->width() - extent);
  const int y = rng_.between(0, e.ii->height() - extent);
  return TrainingWindow{e.ii, Point{x, y}, scale};
}

std::vector<TrainingWindow> positive_windows(std::span<const GrayImage> positives,
                                             WindowSpec window) {
  validate(window);
  std::vector<TrainingWindow> out;
  out.reserve(positives.size());
  for (const auto& img : positives) {
    const bool exact = img.width() == window.base_size && img.height() == window.base_size;
    auto ii = std::make_shared<const IntegralImage>(
        exact ? img : resize_nearest(img, window.base_size, window.base_size));
    out.push_back(TrainingWindow{std::move(ii), Point{0, 0}, 1.0});
  }
  return out;
}

namespace {

struct Mined {
  std::vector<TrainingWindow> windows;
  std::uint64_t draws = 0;
  bool drained = false;
};

Mined mine_false_positives(const Cascade& cascade, NegativeSource& source, std::size_t wanted) {
  Mined m;
  while (m.windows.size() < wanted) {
    auto w = source.next();
    if (!w) {
      m.drained = true;
      break;
    }
    ++m.draws;
    if (classify_window(cascade, *w->image, w->origin, w->scale).accepted) {
      m.windows.push_back(std::move(*w));
    }
  }
  return m;
}

void fill_feature_values(SampleSet& set, std::size_t column_offset,
                         std::span<const TrainingWindow> windows,
                         std::span<const HaarFeature> features, WindowSpec win) {
  for (std::size_t f = 0; f < features.size(); ++f) {
    auto col = set.feature(f);
    for (std::size_t i = 0; i < windows.size(); ++i) {
      const auto& w = windows[i];
      col[column_offset + i] = evaluate_feature(*w.image, features[f], win, w.origin, w.scale);
    }
  }
}

// Rewrites stump feature indices so the cascade carries only used features.
void compact_features(Cascade& cascade) {
  std::map<std::size_t, std::size_t> remap;
  for (const auto& stage : cascade.stages) {
    for (const auto& w : stage.weaks) remap.emplace(w.feature_index, 0);
  }
  std::vector<HaarFeature> used;
  used.reserve(remap.size());
  for (auto& [old_index, new_index] : remap) {
    new_index = used.size();
    used.push_back(cascade.features[old_index]);
  }
  for (auto& stage : cascade.stages) {
    for (auto& w : stage.weaks) w.feature_index = remap.at(w.feature_index);
  }
  cascade.features = std::move(used);
}

}  // namespace

Cascade train_cascade(std::span<const TrainingWindow> positives, NegativeSource& negatives,
                      std::span<const HaarFeature> features, WindowSpec window,
                      const CascadeConfig& config) {
  validate(window);
  if (positives.empty()) throw DegenerateError("cascade training needs positive windows");
  if (features.empty()) throw DegenerateError("cascade training needs at least one feature");
  if (!(config.per_stage_tpr > 0.0 && config.per_stage_tpr <= 1.0)) {
    throw DimensionError("per_stage_tpr must lie in (0, 1]");
  }
  if (config.max_stages < 1 || config.max_weaks_per_stage < 1 || config.negatives_per_stage < 1) {
    throw DimensionError("cascade limits must be >= 1");
  }

  Cascade cascade;
  cascade.window = window;
  cascade.features.assign(features.begin(), features.end());
  cascade.seed = config.seed;

  const std::size_t n_pos = positives.size();

  while (true) {
    Mined mined = mine_false_positives(cascade, negatives, config.negatives_per_stage);
    if (!cascade.stages.empty()) {
      auto& last = cascade.training_meta.back();
      last.cumulative_fpr =
          mined.draws == 0 ? 0.0
                           : static_cast<double>(mined.windows.size()) / static_cast<double>(mined.draws);
      if (last.cumulative_fpr <= config.overall_fpr_target) {
        cascade.negatives_exhausted = false;
        break;
      }
      if (cascade.stages.size() >= config.max_stages) {
        cascade.negatives_exhausted = mined.drained;
        break;
      }
    }
    if (mined.windows.empty()) {
      cascade.negatives_exhausted = true;
      break;
    }
    cascade.negatives_exhausted = mined.drained;

    const std::size_t n_neg = mined.windows.size();
    std::vector<int> labels(n_pos, 1);
    labels.resize(n_pos + n_neg, -1);
    SampleSet set(features.size(), std::move(labels));
    fill_feature_values(set, 0, positives, features, window);
    fill_feature_values(set, n_pos, mined.windows, features, window);
    set.set_balanced_weights();

    AdaBoostTrainer trainer(set);
    std::vector<double> scores(set.size(), 0.0);
    StrongClassifier stage;
    StageStats stats;
    stats.negatives = n_neg;

    for (std::size_t t = 0; t < config.max_weaks_per_stage; ++t) {
      auto round = trainer.step();
      if (!round) break;
      const auto& weak = round->weak;
      const auto column = set.feature(weak.feature_index);
      for (std::size_t i = 0; i < set.size(); ++i) {
        if (weak.predict(column[i]) > 0) scores[i] += weak.alpha;
      }
      stage = trainer.classifier();
      stage.stage_threshold = std::min(
          stage.default_threshold(),
          threshold_for_tpr(std::span<const double>(scores).first(n_pos), config.per_stage_tpr));

      std::size_t tp = 0;
      std::size_t fp = 0;
      for (std::size_t i = 0; i < set.size(); ++i) {
        if (scores[i] >= stage.stage_threshold) ++(i < n_pos ? tp : fp);
      }
      stats.tpr = static_cast<double>(tp) / static_cast<double>(n_pos);
      stats.fpr = static_cast<double>(fp) / static_cast<double>(n_neg);
      if (stats.fpr <= config.per_stage_fpr) break;
    }
    if (stage.weaks.empty()) break;  // no stump beats chance on these negatives

    cascade.stages.push_back(std::move(stage));
    cascade.training_meta.push_back(stats);
  }

  compact_features(cascade);
  return cascade;
}

}  // namespace vjface
