#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "vjface/error.hpp"

namespace vjface {

/// One training example with precomputed feature responses.
struct Sample {
  std::vector<double> feature_values;
  int label = 1;        // +1 face, -1 non-face
  double weight = 0.0;  // non-negative
};

/// Feature-major training matrix: all samples' values for feature f are
/// contiguous. Optionally caches the per-feature ascending sample order so
/// repeated stump searches skip the sort.
class SampleSet {
 public:
  SampleSet(std::size_t n_features, std::vector<int> labels);

  static SampleSet from_samples(std::span<const Sample> samples);

  std::size_t size() const { return labels_.size(); }
  std::size_t n_features() const { return n_features_; }

  std::span<double> feature(std::size_t f) {
    return {values_.data() + f * size(), size()};
  }
  std::span<const double> feature(std::size_t f) const {
    return {values_.data() + f * size(), size()};
  }
  double value(std::size_t f, std::size_t i) const { return values_[f * size() + i]; }

  std::span<const int> labels() const { return labels_; }
  std::span<const double> weights() const { return weights_; }
  std::span<double> weights() { return weights_; }

  std::size_t positives() const;
  std::size_t negatives() const { return size() - positives(); }

  /// Scales weights to sum to 1. Throws DegenerateError on a zero total.
  void normalize_weights();
  void set_uniform_weights();
  /// Each class gets half the mass, split evenly within the class.
  void set_balanced_weights();

  /// Caches ascending sample order per feature (ties by sample index).
  void build_index();
  bool indexed() const { return !order_.empty(); }
  std::span<const std::uint32_t> order(std::size_t f) const {
    return {order_.data() + f * size(), size()};
  }

 private:
  std::size_t n_features_;
  std::vector<int> labels_;
  std::vector<double> weights_;
  std::vector<double> values_;
  std::vector<std::uint32_t> order_;
};

/// Decision stump: predicts +1 iff polarity * value < polarity * threshold.
struct WeakClassifier {
  std::size_t feature_index = 0;
  double threshold = 0.0;
  int polarity = 1;
  double alpha = 0.0;

  int predict(double value) const {
    return polarity * value < polarity * threshold ? 1 : -1;
  }
  friend bool operator==(const WeakClassifier&, const WeakClassifier&) = default;
};

struct StumpFit {
  WeakClassifier stump;  // alpha left at 0
  double error = 0.0;
};

/// Best (threshold, polarity) for one feature under the set's current
/// weights. Candidates are -inf, midpoints of consecutive distinct values,
/// and +inf; ties go to the smaller threshold, then polarity +1.
StumpFit train_weak(const SampleSet& samples, std::size_t feature_index);

inline constexpr double min_weighted_error = 1e-10;

/// alpha = ln((1 - e) / e) / 2 with e clamped to [1e-10, 0.5).
double stump_alpha(double weighted_error);

/// Weighted vote of stumps. Each stump contributes its alpha when it
/// predicts +1; the window is accepted iff the total reaches stage_threshold.
struct StrongClassifier {
  std::vector<WeakClassifier> weaks;
  double stage_threshold = 0.0;

  double alpha_sum() const;
  double default_threshold() const { return 0.5 * alpha_sum(); }

  /// `value_of(feature_index)` supplies the response for each stump.
  template <typename ValueOf>
  double score(ValueOf&& value_of) const {
    double s = 0.0;
    for (const auto& w : weaks) {
      if (w.predict(value_of(w.feature_index)) > 0) s += w.alpha;
    }
    return s;
  }
  template <typename ValueOf>
  bool accepts(ValueOf&& value_of) const {
    return score(value_of) >= stage_threshold;
  }

  double score(const SampleSet& samples, std::size_t i) const {
    return score([&](std::size_t f) { return samples.value(f, i); });
  }

  friend bool operator==(const StrongClassifier&, const StrongClassifier&) = default;
};

/// Discrete AdaBoost driven one round at a time. Rounds search every
/// feature of the sample set; ties between features go to the lower index.
class AdaBoostTrainer {
 public:
  /// Takes the sample weights as given (normalized on the first round).
  explicit AdaBoostTrainer(SampleSet& samples);

  struct Round {
    WeakClassifier weak;
    double error = 0.0;
    double weight_sum = 0.0;  // after the closing normalization
  };

  /// Runs one round. Returns nullopt, leaving the classifier unchanged,
  /// when the best stump's error is >= 0.5.
  std::optional<Round> step();

  const StrongClassifier& classifier() const { return strong_; }
  StrongClassifier& classifier() { return strong_; }
  const SampleSet& samples() const { return samples_; }

 private:
  SampleSet& samples_;
  StrongClassifier strong_;
};

struct BoostingTrace {
  std::vector<AdaBoostTrainer::Round> rounds;
};

/// Up to `rounds` AdaBoost rounds with stage_threshold = 0.5 * sum(alpha).
StrongClassifier train_strong(SampleSet& samples, std::size_t rounds,
                              BoostingTrace* trace = nullptr);

/// Largest threshold under which at least ceil(target_tpr * n) of the
/// scores are >= threshold. Empty input yields +inf.
double threshold_for_tpr(std::span<const double> scores, double target_tpr);

/// Lowers the stage threshold (never raises it) so that the positive
/// samples (label +1) of `positives` reach TPR >= target_tpr.
StrongClassifier tune_stage_threshold(StrongClassifier stage, const SampleSet& positives,
                                      double target_tpr);

}  // namespace vjface
