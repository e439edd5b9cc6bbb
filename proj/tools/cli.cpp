#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "config_file.hpp"
#include "manifest.hpp"
#include "vjface/corpus.hpp"
#include "vjface/detector.hpp"
#include "vjface/model_io.hpp"
#include "vjface/pnm.hpp"

namespace vjface::cli {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> detector_keys = {
    "base_size",          "per_stage_tpr",       "per_stage_fpr", "overall_fpr_target",
    "max_stages",         "max_weaks_per_stage", "negatives_per_stage", "max_features",
    "max_negative_draws", "seed"};

const std::set<std::string> scan_keys = {"scale_start", "scale_factor", "stride_fraction",
                                         "nms_iou"};

const std::set<std::string> recognizer_keys = {
    "crop_size",   "grid_rows",     "grid_cols",      "bins_per_cell",  "mode",
    "n_hidden",    "learning_rate", "max_epochs",     "val_fail_limit", "goal_mse",
    "seed",        "train_ratio",   "val_ratio",      "test_ratio",     "accept_threshold",
    "code_bits",   "restarts"};

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::size_t non_negative(const KeyValueConfig& cfg, const std::string& key, long long fallback) {
  const long long v = cfg.integer(key, fallback);
  if (v < 0) throw UsageError("'" + key + "' must be non-negative");
  return static_cast<std::size_t>(v);
}

std::vector<fs::path> image_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto ext = e.path().extension().string();
    if (e.is_regular_file() && (ext == ".pgm" || ext == ".ppm")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<GrayImage> read_images(const fs::path& dir) {
  std::vector<GrayImage> images;
  for (const auto& p : image_files(dir)) images.push_back(read_gray(p));
  if (images.empty()) throw Error("no .pgm/.ppm images in " + dir.string());
  return images;
}

ScanConfig scan_config(const std::string& path) {
  ScanConfig cfg;
  if (path.empty()) return cfg;
  const auto kv = KeyValueConfig::load(path, scan_keys);
  cfg.scale_start = kv.real("scale_start", cfg.scale_start);
  cfg.scale_factor = kv.real("scale_factor", cfg.scale_factor);
  cfg.stride_fraction = kv.real("stride_fraction", cfg.stride_fraction);
  cfg.nms_iou = kv.real("nms_iou", cfg.nms_iou);
  try {
    validate(cfg);
  } catch (const DimensionError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

std::optional<Rect> best_face(const Cascade& detector, const GrayImage& img) {
  const auto hits = detect(detector, img, ScanConfig{});
  if (hits.empty()) return std::nullopt;
  return hits.front().rect;
}

Rect parse_rect(const std::string& text) {
  Rect r;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%d,%d,%d,%d%c", &r.x, &r.y, &r.w, &r.h, &tail) != 4) {
    throw UsageError("--rect expects x,y,w,h");
  }
  return r;
}

std::vector<double> parse_vector_flag(const std::string& text) {
  std::vector<double> v;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    char* end = nullptr;
    const double d = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size()) {
      throw UsageError("--vector expects comma-separated numbers");
    }
    v.push_back(d);
  }
  return v;
}

// ---- gen-corpus -----------------------------------------------------------

struct GenCorpusArgs {
  std::string out;
  std::uint64_t seed = 1;
  std::size_t pos = 200;
  std::size_t neg = 500;
  int size = 24;
  int negative_size = 64;
  std::size_t scenes = 0;
};

int run_gen_corpus(const GenCorpusArgs& a, std::ostream& out) {
  SyntheticCorpusSpec spec;
  spec.seed = a.seed;
  spec.n_pos = a.pos;
  spec.n_neg = a.neg;
  spec.image_size = a.size;
  spec.negative_size = a.negative_size;
  const Corpus corpus = generate_corpus(spec);

  const fs::path root(a.out);
  fs::create_directories(root / "pos");
  fs::create_directories(root / "neg");
  char name[64];
  for (std::size_t i = 0; i < corpus.positives.size(); ++i) {
    std::snprintf(name, sizeof name, "pos_%05zu.pgm", i);
    write_pgm(root / "pos" / name, corpus.positives[i]);
  }
  for (std::size_t i = 0; i < corpus.negatives.size(); ++i) {
    std::snprintf(name, sizeof name, "neg_%05zu.pgm", i);
    write_pgm(root / "neg" / name, corpus.negatives[i]);
  }
  if (a.scenes > 0) {
    fs::create_directories(root / "scenes");
    std::ofstream truth(root / "scenes" / "truth.txt");
    SceneSpec ss;
    ss.size = a.negative_size;
    ss.min_motif = std::min(a.size, ss.size);
    ss.max_motif = std::min(a.size + a.size / 2, ss.size);
    for (std::size_t i = 0; i < a.scenes; ++i) {
      const Scene scene = generate_scene(a.seed * 1'000'003ULL + i, ss, true);
      std::snprintf(name, sizeof name, "scene_%05zu.pgm", i);
      write_pgm(root / "scenes" / name, scene.image);
      const Rect& r = *scene.motif;
      truth << name << ' ' << r.x << ' ' << r.y << ' ' << r.w << ' ' << r.h << " face\n";
    }
  }
  out << "positives " << corpus.positives.size() << " negatives " << corpus.negatives.size()
      << " scenes " << a.scenes << '\n';
  return exit_ok;
}

// ---- train-detector -------------------------------------------------------

struct TrainDetectorArgs {
  std::string pos;
  std::string neg;
  std::string out;
  std::string config;
};

int run_train_detector(const TrainDetectorArgs& a, std::ostream& out) {
  const auto kv = a.config.empty() ? KeyValueConfig{} : KeyValueConfig::load(a.config, detector_keys);
  WindowSpec window{static_cast<int>(kv.integer("base_size", 24))};
  CascadeConfig cfg;
  cfg.per_stage_tpr = kv.real("per_stage_tpr", cfg.per_stage_tpr);
  cfg.per_stage_fpr = kv.real("per_stage_fpr", cfg.per_stage_fpr);
  cfg.overall_fpr_target = kv.real("overall_fpr_target", cfg.overall_fpr_target);
  cfg.max_stages = non_negative(kv, "max_stages", static_cast<long long>(cfg.max_stages));
  cfg.max_weaks_per_stage =
      non_negative(kv, "max_weaks_per_stage", static_cast<long long>(cfg.max_weaks_per_stage));
  cfg.negatives_per_stage =
      non_negative(kv, "negatives_per_stage", static_cast<long long>(cfg.negatives_per_stage));
  cfg.seed = non_negative(kv, "seed", 0);
  const std::size_t max_features = non_negative(kv, "max_features", 6000);
  const std::size_t max_draws = non_negative(kv, "max_negative_draws", 2'000'000);
  try {
    validate(window);
  } catch (const DimensionError& e) {
    throw UsageError(e.what());
  }

  const auto positives = read_images(a.pos);
  const auto negatives = read_images(a.neg);
  const auto all = enumerate_features(window);
  const auto features = max_features == 0 ? all : sample_features(all, max_features, cfg.seed);
  ImageWindowSource source(negatives, window, cfg.seed, max_draws);
  const Cascade cascade =
      train_cascade(positive_windows(positives, window), source, features, window, cfg);
  save_model(cascade, a.out);

  out << "stages " << cascade.stages.size() << " features " << cascade.features.size();
  if (!cascade.training_meta.empty()) {
    out << " cumulative_fpr " << fmt6(cascade.training_meta.back().cumulative_fpr);
  }
  out << (cascade.negatives_exhausted ? " negatives_exhausted" : "") << '\n';
  return exit_ok;
}

// ---- detect ---------------------------------------------------------------

struct DetectArgs {
  std::string model;
  std::string image;
  std::string format = "text";
  std::string config;
};

int run_detect(const DetectArgs& a, std::ostream& out) {
  if (a.format != "text") throw UsageError("unsupported --format '" + a.format + "'");
  const ScanConfig scan_cfg = scan_config(a.config);
  const Cascade cascade = load_cascade(a.model);
  const GrayImage img = read_gray(a.image);
  for (const auto& d : detect(cascade, img, scan_cfg)) out << format_detection(d) << '\n';
  return exit_ok;
}

// ---- train-recognizer -----------------------------------------------------

struct TrainRecognizerArgs {
  std::string gallery;
  std::string out;
  std::size_t restarts = 0;
  std::string report;
  std::string config;
  std::string detector;
};

struct ResolvedGallery {
  std::vector<GallerySample> images;
  std::vector<VectorSample> vectors;
};

ResolvedGallery resolve_gallery(const Manifest& m, const std::string& detector_path) {
  ResolvedGallery g;
  std::optional<Cascade> detector;
  for (const auto& e : m.entries) {
    if (e.is_vector) {
      g.vectors.push_back(VectorSample{e.values, e.label});
      continue;
    }
    GrayImage img = read_gray(e.path);
    Rect face{0, 0, img.width(), img.height()};
    if (e.face) {
      face = *e.face;
    } else {
      if (detector_path.empty()) {
        throw UsageError("gallery line " + std::to_string(e.line) + " uses 'auto' but no --detector given");
      }
      if (!detector) detector = load_cascade(detector_path);
      auto found = best_face(*detector, img);
      if (!found) throw Error("no face detected in " + e.path.string());
      face = *found;
    }
    g.images.push_back(GallerySample{std::move(img), face, e.label});
  }
  return g;
}

int run_train_recognizer(const TrainRecognizerArgs& a, std::ostream& out) {
  const auto kv =
      a.config.empty() ? KeyValueConfig{} : KeyValueConfig::load(a.config, recognizer_keys);

  DescriptorConfig dcfg;
  dcfg.crop_size = static_cast<int>(kv.integer("crop_size", dcfg.crop_size));
  dcfg.grid_rows = static_cast<int>(kv.integer("grid_rows", dcfg.grid_rows));
  dcfg.grid_cols = static_cast<int>(kv.integer("grid_cols", dcfg.grid_cols));
  dcfg.bins_per_cell = static_cast<int>(kv.integer("bins_per_cell", dcfg.bins_per_cell));
  try {
    dcfg.mode = parse_descriptor_mode(kv.text("mode", "grayscale"));
  } catch (const FormatError& e) {
    throw UsageError(e.what());
  }

  NetworkConfig ncfg;
  ncfg.n_hidden = non_negative(kv, "n_hidden", static_cast<long long>(ncfg.n_hidden));
  ncfg.learning_rate = kv.real("learning_rate", ncfg.learning_rate);
  ncfg.max_epochs = non_negative(kv, "max_epochs", static_cast<long long>(ncfg.max_epochs));
  ncfg.val_fail_limit = non_negative(kv, "val_fail_limit", static_cast<long long>(ncfg.val_fail_limit));
  ncfg.goal_mse = kv.real("goal_mse", ncfg.goal_mse);
  ncfg.seed = non_negative(kv, "seed", 0);

  RecognizerOptions opts;
  opts.restarts = a.restarts ? a.restarts : non_negative(kv, "restarts", 5);
  opts.ratios.train = kv.real("train_ratio", opts.ratios.train);
  opts.ratios.validation = kv.real("val_ratio", opts.ratios.validation);
  opts.ratios.test = kv.real("test_ratio", opts.ratios.test);
  opts.accept_threshold = kv.real("accept_threshold", opts.accept_threshold);
  opts.code_bits = non_negative(kv, "code_bits", 0);

  const Manifest manifest = load_manifest(a.gallery);
  if (manifest.entries.empty()) throw Error("gallery " + a.gallery + " lists no samples");
  opts.codebook = manifest.codes;
  const auto gallery = resolve_gallery(manifest, a.detector);

  RecognizerTraining trained;
  try {
    trained = manifest.vector_mode() ? train_recognizer(gallery.vectors, ncfg, opts)
                                     : train_recognizer(gallery.images, dcfg, ncfg, opts);
  } catch (const DimensionError& e) {
    throw UsageError(e.what());
  }
  save_model(trained.model, a.out);

  const auto& chosen = trained.restarts[trained.selected];
  if (!a.report.empty()) {
    std::ofstream csv(a.report);
    if (!csv) throw Error("cannot write " + a.report);
    write_report_csv(csv, chosen.report);
  }
  out << "identities " << trained.model.codebook.size() << " restart " << trained.selected
      << " seed " << chosen.seed << " epochs " << chosen.report.epochs_run << " stop "
      << to_string(chosen.report.stop_reason) << " mse " << fmt6(chosen.selection_mse) << '\n';
  return exit_ok;
}

// ---- recognize / eval -----------------------------------------------------

struct RecognizeArgs {
  std::string model;
  std::string image;
  std::string rect;
  std::string detector;
  std::string vector;
};

std::string describe(const Recognition& r) {
  return r.known ? r.label + " " + fmt6(r.confidence) : "unknown";
}

int run_recognize(const RecognizeArgs& a, std::ostream& out) {
  const RecognizerModel model = load_recognizer(a.model);
  if (model.descriptor.mode == DescriptorMode::vector) {
    if (a.vector.empty()) throw UsageError("this model takes --vector values, not images");
    const auto values = parse_vector_flag(a.vector);
    if (values.size() != model.descriptor.vector_length) {
      throw UsageError("--vector needs " + std::to_string(model.descriptor.vector_length) + " values");
    }
    out << describe(recognize(model, values)) << '\n';
    return exit_ok;
  }
  if (a.image.empty()) throw UsageError("--image is required for image models");
  if (!a.rect.empty() && !a.detector.empty()) throw UsageError("--rect and --detector are exclusive");
  const GrayImage img = read_gray(a.image);
  Rect face{0, 0, img.width(), img.height()};
  if (!a.rect.empty()) {
    face = parse_rect(a.rect);
  } else if (!a.detector.empty()) {
    auto found = best_face(load_cascade(a.detector), img);
    if (!found) {
      out << "unknown\n";
      return exit_ok;
    }
    face = *found;
  }
  out << describe(recognize(model, img, face)) << '\n';
  return exit_ok;
}

struct EvalArgs {
  std::string model;
  std::string gallery;
  std::string detector;
};

int run_eval(const EvalArgs& a, std::ostream& out) {
  const RecognizerModel model = load_recognizer(a.model);
  const Manifest manifest = load_manifest(a.gallery);
  if (manifest.entries.empty()) throw Error("gallery " + a.gallery + " lists no samples");
  if (manifest.vector_mode() != (model.descriptor.mode == DescriptorMode::vector)) {
    throw UsageError("gallery kind does not match the model's descriptor mode");
  }
  const auto gallery = resolve_gallery(manifest, a.detector);

  std::map<std::pair<std::string, std::string>, std::size_t> confusion;
  std::size_t correct = 0;
  std::size_t total = 0;
  auto tally = [&](const std::string& truth, const Recognition& r) {
    const std::string predicted = r.known ? r.label : "unknown";
    ++confusion[{truth, predicted}];
    correct += predicted == truth;
    ++total;
  };
  for (const auto& v : gallery.vectors) tally(v.label, recognize(model, v.values));
  for (const auto& s : gallery.images) tally(s.label, recognize(model, s.image, s.face));

  out << "accuracy " << correct << "/" << total << " "
      << fmt6(static_cast<double>(correct) / static_cast<double>(total)) << '\n';
  for (const auto& [key, count] : confusion) {
    out << "confusion " << key.first << " " << key.second << " " << count << '\n';
  }
  return exit_ok;
}

}  // namespace

int cli_run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Face detection (Haar cascade) and recognition (backpropagation network)", "vjface"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  GenCorpusArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-corpus", "Write a synthetic positive/negative corpus");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--pos", gen.pos, "Number of positive motifs");
  gen_cmd->add_option("--neg", gen.neg, "Number of negative backgrounds");
  gen_cmd->add_option("--size", gen.size, "Positive motif edge in pixels")->check(CLI::Range(8, 4096));
  gen_cmd->add_option("--negative-size", gen.negative_size, "Negative image edge in pixels")
      ->check(CLI::Range(8, 4096));
  gen_cmd->add_option("--scenes", gen.scenes, "Also write scenes with one motif each");

  TrainDetectorArgs td;
  auto* td_cmd = app.add_subcommand("train-detector", "Train a cascade from image directories");
  td_cmd->add_option("--pos", td.pos, "Directory of positive windows")->required();
  td_cmd->add_option("--neg", td.neg, "Directory of face-free images")->required();
  td_cmd->add_option("--out", td.out, "Model file to write")->required();
  td_cmd->add_option("--config", td.config, "key = value training config");

  DetectArgs det;
  auto* det_cmd = app.add_subcommand("detect", "Detect faces in an image");
  det_cmd->add_option("--model", det.model, "Cascade model file")->required();
  det_cmd->add_option("--image", det.image, "PGM/PPM image")->required();
  det_cmd->add_option("--format", det.format, "Output format (text)");
  det_cmd->add_option("--config", det.config, "key = value scan config");

  TrainRecognizerArgs tr;
  auto* tr_cmd = app.add_subcommand("train-recognizer", "Train the recognition network");
  tr_cmd->add_option("--gallery", tr.gallery, "Gallery manifest")->required();
  tr_cmd->add_option("--out", tr.out, "Model file to write")->required();
  tr_cmd->add_option("--restarts", tr.restarts, "Seeded restarts (1-10)")->check(CLI::Range(1, 10));
  tr_cmd->add_option("--report", tr.report, "Write epoch,train_mse,val_mse CSV");
  tr_cmd->add_option("--config", tr.config, "key = value training config");
  tr_cmd->add_option("--detector", tr.detector, "Cascade used for 'auto' gallery rects");

  RecognizeArgs rec;
  auto* rec_cmd = app.add_subcommand("recognize", "Identify a face");
  rec_cmd->add_option("--model", rec.model, "Recognizer model file")->required();
  rec_cmd->add_option("--image", rec.image, "PGM/PPM image");
  rec_cmd->add_option("--rect", rec.rect, "Face rectangle x,y,w,h");
  rec_cmd->add_option("--detector", rec.detector, "Cascade used to locate the face");
  rec_cmd->add_option("--vector", rec.vector, "Raw feature row for vector-mode models");

  EvalArgs ev;
  auto* ev_cmd = app.add_subcommand("eval", "Accuracy and confusion counts over a gallery");
  ev_cmd->add_option("--model", ev.model, "Recognizer model file")->required();
  ev_cmd->add_option("--gallery", ev.gallery, "Gallery manifest")->required();
  ev_cmd->add_option("--detector", ev.detector, "Cascade used for 'auto' gallery rects");

  std::vector<const char*> argv{"vjface"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "vjface: " << e.what() << "\n\n" << app.help();
    return exit_usage;
  }

  try {
    if (gen_cmd->parsed()) return run_gen_corpus(gen, out);
    if (td_cmd->parsed()) return run_train_detector(td, out);
    if (det_cmd->parsed()) return run_detect(det, out);
    if (tr_cmd->parsed()) return run_train_recognizer(tr, out);
    if (rec_cmd->parsed()) return run_recognize(rec, out);
    if (ev_cmd->parsed()) return run_eval(ev, out);
  } catch (const UsageError& e) {
    err << "vjface: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "vjface: " << e.what() << '\n';
    return exit_operational;
  }
  err << app.help();
  return exit_usage;
}

}  // namespace vjface::cli
