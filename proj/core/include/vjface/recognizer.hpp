#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vjface/bpnn.hpp"
#include "vjface/image.hpp"

namespace vjface {

/// `vector` bypasses image processing: samples arrive as raw feature rows.
enum class DescriptorMode { grayscale, binary, vector };

std::string_view to_string(DescriptorMode mode);
DescriptorMode parse_descriptor_mode(std::string_view name);

struct DescriptorConfig {
  int crop_size = 32;
  int grid_rows = 4;
  int grid_cols = 4;
  int bins_per_cell = 16;
  DescriptorMode mode = DescriptorMode::grayscale;
  std::size_t vector_length = 0;  // vector mode only

  std::size_t length() const;
  friend bool operator==(const DescriptorConfig&, const DescriptorConfig&) = default;
};

void validate(const DescriptorConfig& cfg);

struct FaceDescriptor {
  std::vector<double> values;
};

/// Crop, nearest-neighbour resize to crop_size, optional Otsu binarization,
/// grid segmentation, then one histogram per cell normalized by the cell's
/// pixel count, concatenated in row-major cell order.
FaceDescriptor extract_descriptor(const GrayImage& img, Rect face, const DescriptorConfig& cfg);

struct IdentityCode {
  std::string label;
  std::vector<std::uint8_t> bits;  // each 0 or 1

  friend bool operator==(const IdentityCode&, const IdentityCode&) = default;
};

/// Parses a bit string such as "10001111".
std::vector<std::uint8_t> parse_bits(std::string_view text);
std::string format_bits(std::span<const std::uint8_t> bits);

/// Enrollment index i receives the Gray code i ^ (i >> 1), MSB first, in
/// `bits` bits (0 picks the minimum width that fits all labels).
std::vector<IdentityCode> gray_codebook(std::span<const std::string> labels, std::size_t bits = 0);

/// Throws DimensionError unless codes are non-empty, equal-length, binary
/// and pairwise distinct with distinct labels.
void validate_codebook(std::span<const IdentityCode> codebook);

std::vector<double> encode_target(std::string_view label, std::span<const IdentityCode> codebook);

struct DecodedOutput {
  std::string label;
  double confidence = 0.0;
  std::size_t index = 0;
  std::size_t hamming = 0;
};

/// Nearest code in Hamming distance after thresholding at 0.5 (ties to
/// the lowest enrollment index). Confidence is the mean of
/// |output_i - 0.5| * 2 over the bits that agree with the chosen code.
DecodedOutput decode_output(std::span<const double> output, std::span<const IdentityCode> codebook);

/// Per-dimension min-max scaling learned from a gallery.
struct FeatureScaling {
  std::vector<double> min;
  std::vector<double> max;

  static FeatureScaling fit(std::span<const std::vector<double>> rows);
  /// (v - min) / (max - min) clamped to [0, 1]; constant dimensions map to 0.
  std::vector<double> apply(std::span<const double> raw) const;

  friend bool operator==(const FeatureScaling&, const FeatureScaling&) = default;
};

struct RecognizerModel {
  DescriptorConfig descriptor;
  FeatureScaling scaling;
  Network network;
  std::vector<IdentityCode> codebook;
  double accept_threshold = 0.75;

  friend bool operator==(const RecognizerModel&, const RecognizerModel&) = default;
};

struct GallerySample {
  GrayImage image;
  Rect face;
  std::string label;
};

struct VectorSample {
  std::vector<double> values;
  std::string label;
};

struct RecognizerOptions {
  std::size_t restarts = 5;  // 1..10
  SplitRatios ratios;
  /// When non-empty, used verbatim instead of the generated Gray codes.
  std::vector<IdentityCode> codebook;
  std::size_t code_bits = 0;
  double accept_threshold = 0.75;
};

struct RestartOutcome {
  std::uint64_t seed = 0;
  double selection_mse = 0.0;  // validation MSE, or train MSE without a validation split
  TrainReport report;
};

struct RecognizerTraining {
  RecognizerModel model;
  std::vector<RestartOutcome> restarts;
  std::size_t selected = 0;
  DataSplit split;
};

/// Descriptors, codes, min-max scaling, then `restarts` training runs with
/// seeds netcfg.seed + r; the run with the lowest selection MSE wins (ties
/// to the lowest seed). netcfg's n_in and n_out are derived.
RecognizerTraining train_recognizer(std::span<const GallerySample> gallery,
                                    const DescriptorConfig& cfg, NetworkConfig netcfg,
                                    const RecognizerOptions& options);

/// Same pipeline on raw feature rows (descriptor mode `vector`).
RecognizerTraining train_recognizer(std::span<const VectorSample> rows, NetworkConfig netcfg,
                                    const RecognizerOptions& options);

struct Recognition {
  bool known = false;
  std::string label;  // decoded label, also set when rejected as unknown
  double confidence = 0.0;
  std::vector<double> output;
};

Recognition recognize(const RecognizerModel& model, const GrayImage& img, Rect face);
Recognition recognize(const RecognizerModel& model, std::span<const double> raw_descriptor);

}  // namespace vjface
