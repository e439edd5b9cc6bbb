#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "vjface/boosting.hpp"
#include "vjface/haar.hpp"
#include "vjface/image.hpp"
#include "vjface/rng.hpp"

namespace vjface {

/// Achieved operating point of one trained stage.
struct StageStats {
  double tpr = 1.0;             // on the stage's positive training windows
  double fpr = 1.0;             // on the stage's mined negatives
  double cumulative_fpr = 1.0;  // acceptance rate of stages 1..k on fresh negative draws
  std::uint64_t negatives = 0;  // negatives mined for this stage

  friend bool operator==(const StageStats&, const StageStats&) = default;
};

/// Attentional cascade: a window is a face iff every stage accepts it.
/// `features` holds exactly the features referenced by the stages.
struct Cascade {
  WindowSpec window;
  std::vector<HaarFeature> features;
  std::vector<StrongClassifier> stages;
  std::vector<StageStats> training_meta;
  std::uint64_t seed = 0;
  bool negatives_exhausted = false;

  friend bool operator==(const Cascade&, const Cascade&) = default;
};

/// Per-stage work tallies filled by classify_window when supplied.
struct CascadeCounters {
  std::vector<std::uint64_t> stage_evaluations;    // windows that reached stage k
  std::vector<std::uint64_t> feature_evaluations;  // stump responses computed in stage k

  void reset(std::size_t stages) {
    stage_evaluations.assign(stages, 0);
    feature_evaluations.assign(stages, 0);
  }
};

struct WindowVerdict {
  bool accepted = true;
  int reject_stage = 0;  // 1-based stage that rejected; 0 when accepted
  double score = 0.0;    // margin of the last evaluated stage (score - threshold)
};

/// Evaluates stages in order and stops at the first rejection. An empty
/// cascade accepts with score 0.
WindowVerdict classify_window(const Cascade& cascade, const IntegralImage& ii, Point origin,
                              double scale, CascadeCounters* counters = nullptr);

/// A detection window inside a shared integral image.
struct TrainingWindow {
  std::shared_ptr<const IntegralImage> image;
  Point origin;
  double scale = 1.0;
};

/// Supplier of candidate negative windows for bootstrapped mining.
class NegativeSource {
 public:
  virtual ~NegativeSource() = default;
  /// Next candidate, or nullopt once the source is drained.
  virtual std::optional<TrainingWindow> next() = 0;
};

/// Seeded random windows (random image, scale and position) drawn from a
/// set of background images; stops after `max_draws` candidates.
class ImageWindowSource final : public NegativeSource {
 public:
  ImageWindowSource(std::span<const GrayImage> images, WindowSpec window, std::uint64_t seed,
                    std::uint64_t max_draws = 2'000'000, double scale_factor = 1.25);

  std::optional<TrainingWindow> next() override;

 private:
  struct Entry {
    std::shared_ptr<const IntegralImage> ii;
    std::vector<double> scales;
  };
  std::vector<Entry> entries_;
  WindowSpec window_;
  Rng rng_;
  std::uint64_t remaining_;
};

struct CascadeConfig {
  double per_stage_tpr = 0.99;
  double per_stage_fpr = 0.5;
  double overall_fpr_target = 1e-3;
  std::size_t max_stages = 10;
  std::size_t max_weaks_per_stage = 50;
  std::size_t negatives_per_stage = 1000;
  std::uint64_t seed = 0;
};

/// Windows of `positives` as training windows at origin (0,0), scale 1.
/// Every image is resized to the base window first.
std::vector<TrainingWindow> positive_windows(std::span<const GrayImage> positives,
                                             WindowSpec window);

/// Grows stages weak-by-weak until each meets per_stage_fpr at
/// per_stage_tpr; negatives for stage k+1 are false positives of stages
/// 1..k drawn from `negatives`. Stops when the measured cumulative FPR of
/// fresh draws is at or below overall_fpr_target, at max_stages, or when
/// the source runs dry (negatives_exhausted set, not an error).
Cascade train_cascade(std::span<const TrainingWindow> positives, NegativeSource& negatives,
                      std::span<const HaarFeature> features, WindowSpec window,
                      const CascadeConfig& config);

}  // namespace vjface
