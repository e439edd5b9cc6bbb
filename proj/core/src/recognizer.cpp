#include "vjface/recognizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace vjface {

std::string_view to_string(DescriptorMode mode) {
  switch (mode) {
    case DescriptorMode::grayscale: return "grayscale";
    case DescriptorMode::binary: return "binary";
    case DescriptorMode::vector: return "vector";
  }
  return "?";
}

DescriptorMode parse_descriptor_mode(std::string_view name) {
  for (auto m : {DescriptorMode::grayscale, DescriptorMode::binary, DescriptorMode::vector}) {
    if (to_string(m) == name) return m;
  }
  throw FormatError(0, "unknown descriptor mode '" + std::string(name) + "'");
}

std::size_t DescriptorConfig::length() const {
  const auto cells = static_cast<std::size_t>(grid_rows) * static_cast<std::size_t>(grid_cols);
  switch (mode) {
    case DescriptorMode::grayscale: return cells * static_cast<std::size_t>(bins_per_cell);
    case DescriptorMode::binary: return cells * 2;
    case DescriptorMode::vector: return vector_length;
  }
  return 0;
}

void validate(const DescriptorConfig& cfg) {
  if (cfg.mode == DescriptorMode::vector) {
    if (cfg.vector_length < 1) throw DimensionError("vector descriptors need length >= 1");
    return;
  }
  if (cfg.crop_size < 1 || cfg.grid_rows < 1 || cfg.grid_cols < 1) {
    throw DimensionError("crop size and grid must be >= 1");
  }
  if (cfg.grid_rows > cfg.crop_size || cfg.grid_cols > cfg.crop_size) {
    throw DimensionError("grid finer than the crop");
  }
  if (cfg.bins_per_cell < 1 || cfg.bins_per_cell > 256) {
    throw DimensionError("bins_per_cell must lie in [1, 256]");
  }
}

FaceDescriptor extract_descriptor(const GrayImage& img, Rect face, const DescriptorConfig& cfg) {
  validate(cfg);
  if (cfg.mode == DescriptorMode::vector) {
    throw DimensionError("vector-mode models do not take images");
  }
  const GrayImage patch = resize_nearest(crop(img, face), cfg.crop_size, cfg.crop_size);

  FaceDescriptor d;
  d.values.reserve(cfg.length());
  if (cfg.mode == DescriptorMode::binary) {
    for (const auto& cell : segment_grid(gray_to_binary(patch, auto_threshold), cfg.grid_rows,
                                         cfg.grid_cols)) {
      const Histogram h = histogram(cell);
      for (auto c : h.bins) d.values.push_back(static_cast<double>(c) / static_cast<double>(h.total));
    }
    return d;
  }
  for (const auto& cell : segment_grid(patch, cfg.grid_rows, cfg.grid_cols)) {
    const Histogram h = histogram(cell);
    std::vector<std::uint64_t> buckets(static_cast<std::size_t>(cfg.bins_per_cell), 0);
    for (int v = 0; v < 256; ++v) buckets[static_cast<std::size_t>(v * cfg.bins_per_cell / 256)] += h.bins[v];
    for (auto c : buckets) d.values.push_back(static_cast<double>(c) / static_cast<double>(h.total));
  }
  return d;
}

std::vector<std::uint8_t> parse_bits(std::string_view text) {
  if (text.empty()) throw FormatError(0, "empty bit string");
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw FormatError(0, "bit strings may only contain 0 and 1");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return bits;
}

std::string format_bits(std::span<const std::uint8_t> bits) {
  std::string s;
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

std::vector<IdentityCode> gray_codebook(std::span<const std::string> labels, std::size_t bits) {
  std::size_t needed = 1;
  while ((std::size_t{1} << needed) < labels.size()) ++needed;
  if (bits == 0) bits = needed;
  if (bits < needed || bits > 63) throw DimensionError("code width cannot hold every identity");
  std::vector<IdentityCode> book;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::uint64_t g = i ^ (i >> 1);
    IdentityCode code{labels[i], std::vector<std::uint8_t>(bits)};
    for (std::size_t b = 0; b < bits; ++b) code.bits[b] = static_cast<std::uint8_t>((g >> (bits - 1 - b)) & 1U);
    book.push_back(std::move(code));
  }
  return book;
}

void validate_codebook(std::span<const IdentityCode> codebook) {
  if (codebook.empty()) throw DimensionError("codebook is empty");
  const auto width = codebook.front().bits.size();
  std::set<std::string> labels;
  std::set<std::vector<std::uint8_t>> codes;
  for (const auto& c : codebook) {
    if (c.bits.size() != width || width == 0) throw DimensionError("identity codes differ in length");
    if (std::any_of(c.bits.begin(), c.bits.end(), [](auto b) { return b > 1; })) {
      throw DimensionError("identity codes must be binary");
    }
    if (!labels.insert(c.label).second) throw DimensionError("duplicate identity label " + c.label);
    if (!codes.insert(c.bits).second) throw DimensionError("duplicate identity code for " + c.label);
  }
}

std::vector<double> encode_target(std::string_view label, std::span<const IdentityCode> codebook) {
  for (const auto& c : codebook) {
    if (c.label == label) return {c.bits.begin(), c.bits.end()};
  }
  throw UnknownLabelError("identity '" + std::string(label) + "' is not enrolled");
}

DecodedOutput decode_output(std::span<const double> output, std::span<const IdentityCode> codebook) {
  if (codebook.empty()) throw DimensionError("codebook is empty");
  DecodedOutput best;
  best.hamming = std::numeric_limits<std::size_t>::max();
  for (std::size_t k = 0; k < codebook.size(); ++k) {
    const auto& bits = codebook[k].bits;
    if (bits.size() != output.size()) throw DimensionError("output length differs from code length");
    std::size_t dist = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (static_cast<std::uint8_t>(output[i] >= 0.5) != bits[i]) ++dist;
    }
    if (dist < best.hamming) {
      best.hamming = dist;
      best.index = k;
    }
  }
  const auto& chosen = codebook[best.index];
  best.label = chosen.label;
  double margin = 0.0;
  std::size_t agreeing = 0;
  for (std::size_t i = 0; i < output.size(); ++i) {
    if (static_cast<std::uint8_t>(output[i] >= 0.5) == chosen.bits[i]) {
      margin += std::abs(output[i] - 0.5) * 2.0;
      ++agreeing;
    }
  }
  best.confidence = agreeing == 0 ? 0.0 : margin / static_cast<double>(agreeing);
  return best;
}

FeatureScaling FeatureScaling::fit(std::span<const std::vector<double>> rows) {
  if (rows.empty()) throw DimensionError("cannot fit scaling on no rows");
  FeatureScaling s{rows.front(), rows.front()};
  for (const auto& r : rows) {
    if (r.size() != s.min.size()) throw DimensionError("rows differ in length");
    for (std::size_t j = 0; j < r.size(); ++j) {
      s.min[j] = std::min(s.min[j], r[j]);
      s.max[j] = std::max(s.max[j], r[j]);
    }
  }
  return s;
}

std::vector<double> FeatureScaling::apply(std::span<const double> raw) const {
  if (raw.size() != min.size()) throw DimensionError("descriptor length differs from scaling");
  std::vector<double> out(raw.size());
  for (std::size_t j = 0; j < raw.size(); ++j) {
    const double range = max[j] - min[j];
    out[j] = range > 0.0 ? std::clamp((raw[j] - min[j]) / range, 0.0, 1.0) : 0.0;
  }
  return out;
}

namespace {

std::vector<std::string> enrollment_order(std::span<const std::string> labels) {
  std::vector<std::string> order;
  for (const auto& l : labels) {
    if (std::find(order.begin(), order.end(), l) == order.end()) order.push_back(l);
  }
  return order;
}

RecognizerTraining fit_network(const DescriptorConfig& cfg, std::vector<std::vector<double>> rows,
                               std::span<const std::string> labels, NetworkConfig netcfg,
                               const RecognizerOptions& options) {
  if (options.restarts < 1 || options.restarts > 10) {
    throw DimensionError("restarts must lie in [1, 10]");
  }
  const auto identities = enrollment_order(labels);
  if (identities.size() < 2) {
    throw InsufficientIdentitiesError("recognizer training needs at least two identities");
  }
  if (!(options.accept_threshold >= 0.0 && options.accept_threshold < 1.0)) {
    throw DimensionError("accept_threshold must lie in [0, 1)");
  }

  RecognizerTraining result;
  auto& model = result.model;
  model.descriptor = cfg;
  model.accept_threshold = options.accept_threshold;
  model.codebook = options.codebook.empty() ? gray_codebook(identities, options.code_bits)
                                            : options.codebook;
  validate_codebook(model.codebook);
  model.scaling = FeatureScaling::fit(rows);

  Dataset data;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    data.inputs.push_back(model.scaling.apply(rows[i]));
    data.targets.push_back(encode_target(labels[i], model.codebook));
  }

  netcfg.n_in = cfg.length();
  netcfg.n_out = model.codebook.front().bits.size();
  validate(netcfg);
  result.split = split_data(data.size(), options.ratios, netcfg.seed);

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < options.restarts; ++r) {
    NetworkConfig run = netcfg;
    run.seed = netcfg.seed + r;
    auto trained = train(Network::random(run), data, result.split, run);
    const auto& selection_indices =
        result.split.validation.empty() ? result.split.train : result.split.validation;
    const double score = evaluate_mse(trained.network, data, selection_indices);
    result.restarts.push_back(RestartOutcome{run.seed, score, trained.report});
    if (score < best || r == 0) {
      best = score;
      result.selected = r;
      model.network = std::move(trained.network);
    }
  }
  return result;
}

}  // namespace

RecognizerTraining train_recognizer(std::span<const GallerySample> gallery,
                                    const DescriptorConfig& cfg, NetworkConfig netcfg,
                                    const RecognizerOptions& options) {
  validate(cfg);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (const auto& s : gallery) {
    rows.push_back(extract_descriptor(s.image, s.face, cfg).values);
    labels.push_back(s.label);
  }
  if (rows.empty()) throw InsufficientIdentitiesError("gallery is empty");
  return fit_network(cfg, std::move(rows), labels, netcfg, options);
}

RecognizerTraining train_recognizer(std::span<const VectorSample> samples, NetworkConfig netcfg,
                                    const RecognizerOptions& options) {
  if (samples.empty()) throw InsufficientIdentitiesError("gallery is empty");
  DescriptorConfig cfg;
  cfg.mode = DescriptorMode::vector;
  cfg.vector_length = samples.front().values.size();
  validate(cfg);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (const auto& s : samples) {
    if (s.values.size() != cfg.vector_length) throw DimensionError("sample rows differ in length");
    rows.push_back(s.values);
    labels.push_back(s.label);
  }
  return fit_network(cfg, std::move(rows), labels, netcfg, options);
}

Recognition recognize(const RecognizerModel& model, std::span<const double> raw_descriptor) {
  Recognition r;
  r.output = forward(model.network, model.scaling.apply(raw_descriptor)).output;
  const auto decoded = decode_output(r.output, model.codebook);
  r.label = decoded.label;
  r.confidence = decoded.confidence;
  r.known = decoded.confidence >= model.accept_threshold;
  return r;
}

Recognition recognize(const RecognizerModel& model, const GrayImage& img, Rect face) {
  return recognize(model, extract_descriptor(img, face, model.descriptor).values);
}

}  // namespace vjface
