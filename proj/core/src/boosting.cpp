#include "vjface/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

namespace vjface {

SampleSet::SampleSet(std::size_t n_features, std::vector<int> labels)
    : n_features_(n_features),
      labels_(std::move(labels)),
      weights_(labels_.size(), 0.0),
      values_(n_features_ * labels_.size(), 0.0) {
  for (int l : labels_) {
    if (l != 1 && l != -1) throw DimensionError("sample labels must be +1 or -1");
  }
  set_uniform_weights();
}

SampleSet SampleSet::from_samples(std::span<const Sample> samples) {
  const std::size_t nf = samples.empty() ? 0 : samples.front().feature_values.size();
  std::vector<int> labels;
  labels.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.feature_values.size() != nf) throw DimensionError("samples disagree on feature count");
    if (!(s.weight >= 0.0)) throw DimensionError("sample weights must be non-negative");
    labels.push_back(s.label);
  }
  SampleSet set(nf, std::move(labels));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    set.weights_[i] = samples[i].weight;
    for (std::size_t f = 0; f < nf; ++f) set.feature(f)[i] = samples[i].feature_values[f];
  }
  return set;
}

std::size_t SampleSet::positives() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), 1));
}

void SampleSet::normalize_weights() {
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (!(total > 0.0)) throw DegenerateError("sample weights sum to zero");
  for (auto& w : weights_) w /= total;
}

void SampleSet::set_uniform_weights() {
  if (weights_.empty()) return;
  std::fill(weights_.begin(), weights_.end(), 1.0 / static_cast<double>(weights_.size()));
}

void SampleSet::set_balanced_weights() {
  const std::size_t pos = positives();
  const std::size_t neg = size() - pos;
  if (pos == 0 || neg == 0) {
    set_uniform_weights();
    return;
  }
  for (std::size_t i = 0; i < size(); ++i) {
    weights_[i] = labels_[i] > 0 ? 0.5 / static_cast<double>(pos) : 0.5 / static_cast<double>(neg);
  }
}

void SampleSet::build_index() {
  const std::size_t n = size();
  order_.assign(n_features_ * n, 0);
  for (std::size_t f = 0; f < n_features_; ++f) {
    auto dst = std::span<std::uint32_t>(order_.data() + f * n, n);
    std::iota(dst.begin(), dst.end(), 0u);
    const auto vals = feature(f);
    std::stable_sort(dst.begin(), dst.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return vals[a] < vals[b]; });
  }
}

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

StumpFit best_stump(std::span<const double> values, std::span<const int> labels,
                    std::span<const double> weights, std::span<const std::uint32_t> order,
                    std::size_t feature_index) {
  double pos_total = 0.0;
  double neg_total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] > 0 ? pos_total : neg_total) += weights[i];
  }

  StumpFit best{WeakClassifier{feature_index, -inf, 1, 0.0}, inf};
  auto consider = [&](double threshold, double pos_below, double neg_below) {
    // polarity +1 marks the samples below the threshold positive
    const double err_plus = neg_below + (pos_total - pos_below);
    const double err_minus = pos_below + (neg_total - neg_below);
    if (err_plus < best.error) best = {WeakClassifier{feature_index, threshold, 1, 0.0}, err_plus};
    if (err_minus < best.error) best = {WeakClassifier{feature_index, threshold, -1, 0.0}, err_minus};
  };

  double pos_below = 0.0;
  double neg_below = 0.0;
  consider(-inf, 0.0, 0.0);
  const std::size_t n = order.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto i = order[k];
    (labels[i] > 0 ? pos_below : neg_below) += weights[i];
    if (k + 1 < n) {
      const double lo = values[i];
      const double hi = values[order[k + 1]];
      if (lo < hi) consider(lo + (hi - lo) / 2.0, pos_below, neg_below);
    }
  }
  consider(inf, pos_total, neg_total);
  return best;
}

void require_both_classes(const SampleSet& samples) {
  const auto pos = samples.positives();
  if (pos == 0 || pos == samples.size()) {
    throw DegenerateError("stump training needs both positive and negative samples");
  }
}

}  // namespace

StumpFit train_weak(const SampleSet& samples, std::size_t feature_index) {
  if (feature_index >= samples.n_features()) throw DimensionError("feature index out of range");
  require_both_classes(samples);
  const auto values = samples.feature(feature_index);
  if (samples.indexed()) {
    return best_stump(values, samples.labels(), samples.weights(), samples.order(feature_index),
                      feature_index);
  }
  std::vector<std::uint32_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return values[a] < values[b]; });
  return best_stump(values, samples.labels(), samples.weights(), order, feature_index);
}

double stump_alpha(double weighted_error) {
  if (weighted_error >= 0.5) return 0.0;
  const double e = std::max(weighted_error, min_weighted_error);
  return 0.5 * std::log((1.0 - e) / e);
}

double StrongClassifier::alpha_sum() const {
  double s = 0.0;
  for (const auto& w : weaks) s += w.alpha;
  return s;
}

AdaBoostTrainer::AdaBoostTrainer(SampleSet& samples) : samples_(samples) {
  require_both_classes(samples_);
  if (!samples_.indexed()) samples_.build_index();
}

std::optional<AdaBoostTrainer::Round> AdaBoostTrainer::step() {
  samples_.normalize_weights();

  StumpFit best{{}, std::numeric_limits<double>::infinity()};
  for (std::size_t f = 0; f < samples_.n_features(); ++f) {
    auto fit = best_stump(samples_.feature(f), samples_.labels(), samples_.weights(),
                          samples_.order(f), f);
    if (fit.error < best.error) best = fit;
  }
  if (!(best.error < 0.5)) return std::nullopt;

  WeakClassifier weak = best.stump;
  weak.alpha = stump_alpha(best.error);

  auto weights = samples_.weights();
  const auto labels = samples_.labels();
  const auto values = samples_.feature(weak.feature_index);
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    weights[i] *= std::exp(-weak.alpha * labels[i] * weak.predict(values[i]));
  }
  samples_.normalize_weights();

  strong_.weaks.push_back(weak);
  strong_.stage_threshold = strong_.default_threshold();

  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  return Round{weak, best.error, sum};
}

StrongClassifier train_strong(SampleSet& samples, std::size_t rounds, BoostingTrace* trace) {
  if (rounds < 1) throw DimensionError("boosting needs at least one round");
  AdaBoostTrainer trainer(samples);
  for (std::size_t t = 0; t < rounds; ++t) {
    auto round = trainer.step();
    if (!round) break;
    if (trace) trace->rounds.push_back(*round);
  }
  return trainer.classifier();
}

double threshold_for_tpr(std::span<const double> scores, double target_tpr) {
  if (!(target_tpr > 0.0 && target_tpr <= 1.0)) {
    throw DimensionError("target TPR must lie in (0, 1]");
  }
  if (scores.empty()) return std::numeric_limits<double>::infinity();
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double needed = std::ceil(target_tpr * static_cast<double>(sorted.size()) - 1e-9);
  const auto k = std::clamp<std::size_t>(static_cast<std::size_t>(needed), 1, sorted.size());
  return sorted[k - 1];
}

StrongClassifier tune_stage_threshold(StrongClassifier stage, const SampleSet& positives,
                                      double target_tpr) {
  std::vector<double> scores;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    if (positives.labels()[i] > 0) scores.push_back(stage.score(positives, i));
  }
  const double t = threshold_for_tpr(scores, target_tpr);
  stage.stage_threshold = std::min(stage.stage_threshold, t);
  return stage;
}

}  // namespace vjface
