// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Oracles live in tests/support and never call the fast paths they
// check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "vjface/boosting.hpp"
#include "vjface/cascade.hpp"
#include "vjface/corpus.hpp"
#include "vjface/detector.hpp"
#include "vjface/model_io.hpp"
#include "vjface/probe.hpp"

using namespace vjface;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok) {
      if (pass) detail.clear();
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += why;
    }
  }
};

// What a criterion run leaves behind, compared across two runs.
struct Artifacts {
  std::vector<std::string> model_texts;
  std::string transcript;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------- 1

Verdict integral_oracle() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 gen(20240101);
  std::size_t mismatches = 0;
  std::size_t checks = 0;
  std::vector<Rect> rects;
  for (int i = 0; i < 1000; ++i) {
    const int x = static_cast<int>(gen() % 32);
    const int y = static_cast<int>(gen() % 32);
    rects.push_back(Rect{x, y, 1 + static_cast<int>(gen() % (32 - x)), 1 + static_cast<int>(gen() % (32 - y))});
  }
  for (int img_i = 0; img_i < 1000; ++img_i) {
    const auto img = oracle::random_gray(gen, 32, 32);
    const auto ii = integral_image(img);
    for (const auto& r : rects) {
      mismatches += rect_sum(ii, r) != oracle::brute_sum(img, r.x, r.y, r.w, r.h);
      ++checks;
    }
  }
  const double secs = seconds_since(t0);
  v.detail = std::to_string(checks) + " sums, " + std::to_string(mismatches) + " mismatches, " +
             fmt("%.2f s", secs);
  v.require(mismatches == 0, std::to_string(mismatches) + " rect sums differ from brute force");
  v.require(secs < 1.0, "took " + fmt("%.2f s", secs) + " (limit 1 s)");
  return v;
}

// ---------------------------------------------------------------- 2

Verdict gradient_check() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double h = 1e-6;
  std::size_t entries = 0;
  std::size_t bad = 0;
  double worst = 0.0;
  double max_abs = 0.0;
  for (std::uint64_t n = 0; n < 100; ++n) {
    NetworkConfig cfg;
    cfg.n_in = cfg.n_hidden = cfg.n_out = 8;
    cfg.seed = 1000 + n;
    const Network net = Network::random(cfg);
    std::vector<double> in(8), tgt(8);
    for (auto& x : in) x = unit(gen);
    for (auto& x : tgt) x = unit(gen);
    const Gradients g = backward(net, in, tgt);

    auto probe = [&](auto&& param, double analytic) {
      Network p = net, m = net;
      param(p) += h;
      param(m) -= h;
      const double numeric = (oracle::half_sse(p, in, tgt) - oracle::half_sse(m, in, tgt)) / (2 * h);
      ++entries;
      const double diff = std::abs(analytic - numeric);
      if (diff > 1e-8) worst = std::max(worst, diff / std::max(std::abs(analytic), std::abs(numeric)));
      max_abs = std::max(max_abs, diff);
      bad += !oracle::close_rel(analytic, numeric, 1e-4, 1e-8);
    };
    for (std::size_t r = 0; r < 8; ++r) {
      for (std::size_t c = 0; c < 8; ++c) {
        probe([&](Network& x) -> double& { return x.w1(r, c); }, g.dw1(r, c));
        probe([&](Network& x) -> double& { return x.w2(r, c); }, g.dw2(r, c));
      }
      probe([&](Network& x) -> double& { return x.b1[r]; }, g.db1[r]);
      probe([&](Network& x) -> double& { return x.b2[r]; }, g.db2[r]);
    }
  }
  const double secs = seconds_since(t0);
  v.detail = std::to_string(entries) + " entries, max |difference| " + fmt("%.1e", max_abs) +
             ", worst relative error above the floor " + fmt("%.1e", worst) + ", " +
             fmt("%.2f s", secs);
  v.require(bad == 0, std::to_string(bad) + " gradient entries outside tolerance");
  v.require(secs < 10.0, "took " + fmt("%.2f s", secs));
  return v;
}

// ---------------------------------------------------------------- 3

std::vector<double> bits_of(const std::string& s) {
  std::vector<double> b;
  for (char c : s) b.push_back(c == '1' ? 1.0 : 0.0);
  return b;
}

Verdict bit_table(Artifacts& art) {
  Verdict v;
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, std::string>> rows{
      {"10010101", "10001111"}, {"11001100", "11110000"}, {"10101100", "10101011"}};
  Dataset data;
  for (const auto& [in, out] : rows) {
    data.inputs.push_back(bits_of(in));
    data.targets.push_back(bits_of(out));
  }
  const auto split = split_data(data.size(), SplitRatios{1, 0, 0}, 0);

  NetworkConfig cfg;
  cfg.n_in = cfg.n_hidden = cfg.n_out = 8;
  cfg.learning_rate = 0.5;
  cfg.max_epochs = 5000;
  cfg.goal_mse = 1e-3;

  std::optional<TrainResult> best;
  std::uint64_t best_seed = 0;
  std::ostringstream log;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    auto r = train(Network::random(cfg), data, split, cfg);
    const double m = evaluate_mse(r.network, data, split.train);
    log << "seed " << seed << " epochs " << r.report.epochs_run << " stop "
        << to_string(r.report.stop_reason) << " mse " << format_hex(m) << '\n';
    if (!best || m < evaluate_mse(best->network, data, split.train)) {
      best = std::move(r);
      best_seed = seed;
    }
  }
  const double final_mse = evaluate_mse(best->network, data, split.train);
  int bits_ok = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto out = forward(best->network, data.inputs[i]).output;
    for (std::size_t j = 0; j < 8; ++j) bits_ok += (out[j] >= 0.5) == (data.targets[i][j] == 1.0);
  }
  const double secs = seconds_since(t0);

  // Model file: the trained network with identity scaling and the target codes.
  RecognizerModel model;
  model.descriptor.mode = DescriptorMode::vector;
  model.descriptor.vector_length = 8;
  model.scaling = FeatureScaling{std::vector<double>(8, 0.0), std::vector<double>(8, 1.0)};
  model.network = best->network;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    model.codebook.push_back({"p" + std::to_string(i + 1), parse_bits(rows[i].second)});
  }
  art.model_texts.push_back(serialize(model));
  art.transcript = log.str();

  v.detail = "best seed " + std::to_string(best_seed) + ", " +
             std::to_string(best->report.epochs_run) + " epochs, MSE " + fmt("%.3g", final_mse) +
             ", " + std::to_string(bits_ok) + "/24 bits, " + fmt("%.2f s", secs);
  v.require(final_mse <= 1e-3, "MSE " + fmt("%.3g", final_mse) + " > 1e-3");
  v.require(bits_ok == 24, std::to_string(bits_ok) + "/24 bits correct");
  v.require(secs < 5.0, "took " + fmt("%.2f s", secs));
  return v;
}

// ---------------------------------------------------------------- 4

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::cli_run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict numeric_table(Artifacts& art) {
  Verdict v;
  const auto t0 = Clock::now();
  oracle::ScratchDir dir("vjface_acceptance_numeric");
  const std::vector<std::pair<std::string, std::string>> rows{
      {"462,0,0,102", "1100"}, {"342,0,0,78", "0010"}, {"234,0,0,65", "1001"},
      {"500,0,0,132", "1010"}, {"222,0,0,69", "1011"}, {"165,0,0,45", "0111"}};
  {
    std::ofstream g(dir.path / "gallery.txt");
    for (std::size_t i = 0; i < rows.size(); ++i) g << "code s" << i + 1 << ' ' << rows[i].second << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) g << "vector " << rows[i].first << " s" << i + 1 << '\n';
    std::ofstream c(dir.path / "train.cfg");
    // No epoch budget is prescribed here; this table needs ~6500 epochs at
    // lr 0.5 to reach the goal.
    c << "n_hidden = 8\nlearning_rate = 0.5\nmax_epochs = 20000\ngoal_mse = 0.001\n"
         "train_ratio = 1\nval_ratio = 0\ntest_ratio = 0\nseed = 0\nrestarts = 5\n";
  }
  const auto model_path = dir.path / "numeric.model";
  const auto train = cli({"train-recognizer", "--gallery", (dir.path / "gallery.txt").string(), "--out",
                          model_path.string(), "--config", (dir.path / "train.cfg").string()});
  v.require(train.code == 0, "train-recognizer exited " + std::to_string(train.code) + ": " + train.err);
  if (train.code != 0) return v;
  const auto eval = cli({"eval", "--model", model_path.string(), "--gallery", (dir.path / "gallery.txt").string()});
  v.require(eval.code == 0, "eval exited " + std::to_string(eval.code));

  // Independent check of the saved network: min-max scale by hand, forward
  // with the naive loop, compare bits.
  const auto model = load_recognizer(model_path);
  std::vector<std::vector<double>> raw;
  for (const auto& [values, code] : rows) {
    std::vector<double> r;
    std::istringstream in(values);
    for (std::string t; std::getline(in, t, ',');) r.push_back(std::stod(t));
    raw.push_back(r);
  }
  std::vector<double> lo(4, 1e300), hi(4, -1e300);
  for (const auto& r : raw) {
    for (std::size_t j = 0; j < 4; ++j) {
      lo[j] = std::min(lo[j], r[j]);
      hi[j] = std::max(hi[j], r[j]);
    }
  }
  double sse = 0.0;
  int bits_ok = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::vector<double> x(4);
    for (std::size_t j = 0; j < 4; ++j) x[j] = hi[j] > lo[j] ? (raw[i][j] - lo[j]) / (hi[j] - lo[j]) : 0.0;
    const auto out = oracle::naive_forward(model.network, x);
    const auto target = bits_of(rows[i].second);
    for (std::size_t j = 0; j < 4; ++j) {
      sse += (out[j] - target[j]) * (out[j] - target[j]);
      bits_ok += (out[j] >= 0.5) == (target[j] == 1.0);
    }
  }
  const double mse_value = sse / 24.0;
  const double secs = seconds_since(t0);

  art.model_texts.push_back(slurp(model_path));
  art.transcript = train.out + eval.out;

  v.detail = "MSE " + fmt("%.3g", mse_value) + ", " + std::to_string(bits_ok) + "/24 bits, eval '" +
             eval.out.substr(0, eval.out.find('\n')) + "', " + fmt("%.2f s", secs);
  v.require(model.network.n_in() == 4 && model.network.n_hidden() == 8 && model.network.n_out() == 4,
            "network is not 4-8-4");
  v.require(mse_value <= 1e-3, "MSE " + fmt("%.3g", mse_value) + " > 1e-3");
  v.require(bits_ok == 24, std::to_string(bits_ok) + "/24 bits correct");
  v.require(eval.out.rfind("accuracy 6/6 ", 0) == 0, "eval did not report 6/6");
  v.require(secs < 5.0, "took " + fmt("%.2f s", secs));
  return v;
}

// ---------------------------------------------------------------- 5

struct HaarSet {
  std::vector<HaarFeature> features;
  SampleSet samples;
};

// 100 positives with a darker top half, 100 negatives with a brighter or
// equal top half: the full-window two-vertical feature separates them.
HaarSet haar_samples(std::uint64_t seed, double flip_rate) {
  const WindowSpec win{12};
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> level(60, 200), noise(-15, 15), gap(30, 50);
  std::vector<IntegralImage> images;
  std::vector<int> labels;
  for (int i = 0; i < 200; ++i) {
    const bool face = i < 100;
    const int bottom = level(gen);
    const int top = face ? bottom - gap(gen) : bottom + gap(gen);
    std::vector<std::uint8_t> px(144);
    for (int p = 0; p < 144; ++p) px[static_cast<std::size_t>(p)] = static_cast<std::uint8_t>(std::clamp((p < 72 ? top : bottom) + noise(gen), 0, 255));
    images.emplace_back(GrayImage(12, 12, px));
    labels.push_back(face ? 1 : -1);
  }
  const auto flips = static_cast<std::size_t>(std::lround(flip_rate * 200));
  std::vector<std::size_t> idx(200);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), gen);
  for (std::size_t k = 0; k < flips; ++k) labels[idx[k]] = -labels[idx[k]];

  HaarSet hs{enumerate_features(win), SampleSet(0, {})};
  hs.samples = SampleSet(hs.features.size(), labels);
  for (std::size_t f = 0; f < hs.features.size(); ++f) {
    auto col = hs.samples.feature(f);
    for (std::size_t i = 0; i < images.size(); ++i) col[i] = evaluate_feature(images[i], hs.features[f], win, Point{0, 0}, 1.0);
  }
  return hs;
}

double training_error(const StrongClassifier& s, const SampleSet& set) {
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const bool accepted = s.score(set, i) >= s.stage_threshold;
    wrong += accepted != (set.labels()[i] > 0);
  }
  return static_cast<double>(wrong) / static_cast<double>(set.size());
}

Verdict adaboost_sanity(Artifacts& art) {
  Verdict v;
  const auto t0 = Clock::now();

  auto clean = haar_samples(5, 0.0);
  BoostingTrace clean_trace;
  const auto one = train_strong(clean.samples, 1, &clean_trace);
  const double clean_err = training_error(one, clean.samples);

  auto noisy = haar_samples(6, 0.05);
  BoostingTrace trace;
  const auto ten = train_strong(noisy.samples, 10, &trace);
  const double noisy_err = training_error(ten, noisy.samples);
  double worst_sum = 0.0;
  for (const auto& r : trace.rounds) worst_sum = std::max(worst_sum, std::abs(r.weight_sum - 1.0));
  worst_sum = std::max(worst_sum, std::abs(clean_trace.rounds.at(0).weight_sum - 1.0));
  const double secs = seconds_since(t0);

  // Model file: the noisy strong classifier as a one-stage cascade.
  Cascade c;
  c.window = WindowSpec{12};
  c.features = noisy.features;
  c.stages = {ten};
  art.model_texts.push_back(serialize(c));
  std::ostringstream log;
  for (const auto& r : trace.rounds) {
    log << "round feature " << r.weak.feature_index << " error " << format_hex(r.error) << '\n';
  }
  art.transcript = log.str();

  v.detail = std::to_string(clean.features.size()) + " features; separable error " +
             fmt("%.3g", clean_err) + " after 1 round; noisy error " + fmt("%.3g", noisy_err) +
             " after " + std::to_string(trace.rounds.size()) + " rounds; max |sum w - 1| " +
             fmt("%.1e", worst_sum) + ", " + fmt("%.2f s", secs);
  v.require(clean_err == 0.0, "separable set not fit in round 1");
  v.require(trace.rounds.size() == 10, "noisy run stopped after " + std::to_string(trace.rounds.size()) + " rounds");
  v.require(noisy_err <= 0.05, "noisy training error " + fmt("%.3g", noisy_err) + " > 5%");
  v.require(worst_sum <= 1e-12, "weights drifted from 1 by " + fmt("%.1e", worst_sum));
  v.require(secs < 30.0, "took " + fmt("%.2f s", secs));
  return v;
}

// ---------------------------------------------------------------- 6 and 9

struct DetectionOutcome {
  Cascade cascade;
  std::vector<Scene> positives;
  std::vector<Scene> negatives;
};

DetectionOutcome train_synthetic_detector() {
  SyntheticCorpusSpec spec;
  spec.seed = 2024;
  spec.n_pos = 200;
  spec.n_neg = 500;
  spec.image_size = 16;
  spec.negative_size = 64;
  const Corpus corpus = generate_corpus(spec);

  const WindowSpec win{16};
  CascadeConfig cfg;
  cfg.max_stages = 5;
  cfg.per_stage_tpr = 0.995;
  cfg.per_stage_fpr = 0.1;
  cfg.overall_fpr_target = 1e-8;
  cfg.max_weaks_per_stage = 100;
  cfg.negatives_per_stage = 500;
  cfg.seed = 11;
  const auto features = sample_features(enumerate_features(win), 4000, cfg.seed);
  ImageWindowSource negatives(corpus.negatives, win, cfg.seed, 2'000'000);

  DetectionOutcome out;
  out.cascade = train_cascade(positive_windows(corpus.positives, win), negatives, features, win, cfg);
  const SceneSpec scene{64, 16, 24, spec.motif};
  for (std::uint64_t i = 0; i < 50; ++i) {
    out.positives.push_back(generate_scene(900'000 + i, scene, true));
    out.negatives.push_back(generate_scene(950'000 + i, scene, false));
  }
  return out;
}

Verdict synthetic_detection(const DetectionOutcome& d, double train_secs, Artifacts& art) {
  Verdict v;
  const auto t0 = Clock::now();
  std::ostringstream log;
  int good = 0;
  std::size_t false_pos = 0;
  for (std::size_t i = 0; i < d.positives.size(); ++i) {
    const auto& s = d.positives[i];
    const auto hits = detect(d.cascade, s.image, ScanConfig{});
    const Rect m = *s.motif;
    const double cx = m.x + m.w / 2.0, cy = m.y + m.h / 2.0;
    if (hits.size() == 1) {
      const double hx = hits[0].rect.x + hits[0].rect.w / 2.0, hy = hits[0].rect.y + hits[0].rect.h / 2.0;
      good += std::hypot(hx - cx, hy - cy) <= 8.0;
    }
    log << "pos " << i;
    for (const auto& h : hits) log << " | " << format_detection(h);
    log << '\n';
  }
  for (std::size_t i = 0; i < d.negatives.size(); ++i) {
    const auto hits = detect(d.cascade, d.negatives[i].image, ScanConfig{});
    false_pos += hits.size();
    log << "neg " << i;
    for (const auto& h : hits) log << " | " << format_detection(h);
    log << '\n';
  }
  const double fp_rate = static_cast<double>(false_pos) / static_cast<double>(d.negatives.size());
  const double secs = train_secs + seconds_since(t0);

  art.model_texts.push_back(serialize(d.cascade));
  art.transcript = log.str();

  v.detail = std::to_string(d.cascade.stages.size()) + " stages; " + std::to_string(good) +
             "/50 scenes with one centred detection; " + fmt("%.2f", fp_rate) +
             " false positives per negative scene; " + fmt("%.1f s", secs);
  v.require(d.cascade.stages.size() <= 5, "more than 5 stages");
  v.require(good >= 45, std::to_string(good) + "/50 positive scenes correct (need 45)");
  v.require(fp_rate <= 0.2, fmt("%.2f", fp_rate) + " false positives per scene (limit 0.2)");
  v.require(secs < 300.0, "took " + fmt("%.1f s", secs));
  return v;
}

// Re-walks every scan window and checks that a window rejected at stage k
// adds nothing to the counters of later stages, and that the per-window
// deltas add up to what scan() itself recorded.
Verdict short_circuit(const DetectionOutcome& d) {
  Verdict v;
  const Cascade& c = d.cascade;
  const std::size_t n_stages = c.stages.size();
  const ScanConfig cfg;
  std::size_t windows = 0;
  std::size_t violations = 0;
  std::vector<std::uint64_t> rejected_at(n_stages + 1, 0);
  std::vector<const Scene*> scenes;
  for (const auto& s : d.positives) scenes.push_back(&s);
  for (const auto& s : d.negatives) scenes.push_back(&s);

  for (const Scene* s : scenes) {
    const IntegralImage ii(s->image);
    CascadeCounters from_scan;
    from_scan.reset(n_stages);
    scan(c, ii, cfg, &from_scan);

    CascadeCounters summed;
    summed.reset(n_stages);
    const int base = c.window.base_size;
    for (double scale : scan_scales(c.window, ii.width(), ii.height(), cfg)) {
      const int extent = static_cast<int>(std::lround(base * scale));
      const int stride = std::max(1, static_cast<int>(std::lround(cfg.stride_fraction * base * scale)));
      for (int y = 0; y + extent <= ii.height(); y += stride) {
        for (int x = 0; x + extent <= ii.width(); x += stride) {
          CascadeCounters one;
          one.reset(n_stages);
          const auto verdict = classify_window(c, ii, Point{x, y}, scale, &one);
          ++windows;
          const std::size_t k = verdict.accepted ? n_stages : static_cast<std::size_t>(verdict.reject_stage);
          ++rejected_at[verdict.accepted ? 0 : k];
          for (std::size_t st = 0; st < n_stages; ++st) {
            const bool reached = st < k;
            const std::uint64_t want_features = reached ? c.stages[st].weaks.size() : 0;
            if (one.stage_evaluations[st] != (reached ? 1u : 0u) || one.feature_evaluations[st] != want_features) {
              ++violations;
            }
            summed.stage_evaluations[st] += one.stage_evaluations[st];
            summed.feature_evaluations[st] += one.feature_evaluations[st];
          }
        }
      }
    }
    if (summed.stage_evaluations != from_scan.stage_evaluations ||
        summed.feature_evaluations != from_scan.feature_evaluations) {
      ++violations;
    }
  }
  std::string hist;
  for (std::size_t k = 1; k <= n_stages; ++k) hist += (k > 1 ? "," : "") + std::to_string(rejected_at[k]);
  v.detail = std::to_string(windows) + " windows over " + std::to_string(scenes.size()) +
             " scenes; rejections per stage [" + hist + "], accepted " + std::to_string(rejected_at[0]) +
             "; " + std::to_string(violations) + " violations";
  v.require(violations == 0, std::to_string(violations) + " counter violations");
  v.require(n_stages >= 2, "cascade has a single stage, so nothing to short-circuit");
  return v;
}

// ---------------------------------------------------------------- 7

Verdict sigmoid_identities() {
  Verdict v;
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  std::size_t sym_bad = 0;
  std::size_t deriv_bad = 0;
  double worst_sym = 0.0;
  double worst_deriv = 0.0;
  const double h = 1e-6;
  for (int i = 0; i < 1000; ++i) {
    const double x = u(gen);
    const double d = std::abs(sigmoid(-x) - (1.0 - sigmoid(x)));
    worst_sym = std::max(worst_sym, d);
    sym_bad += d > 1e-15;

    // S' is even, so difference on the non-positive side where S carries
    // full relative precision.
    const double t = -std::abs(x);
    const double numeric = (sigmoid(t + h) - sigmoid(t - h)) / (2 * h);
    const double analytic = sigmoid_derivative(sigmoid(t));
    const double rel = std::abs(analytic - numeric) / std::abs(numeric);
    worst_deriv = std::max(worst_deriv, rel);
    deriv_bad += !(rel <= 1e-6);
  }
  v.detail = "S(0) = " + fmt("%.17g", sigmoid(0.0)) + ", worst |S(-x)-(1-S(x))| " + fmt("%.1e", worst_sym) +
             ", worst derivative relative error " + fmt("%.1e", worst_deriv);
  v.require(sigmoid(0.0) == 0.5, "S(0) != 0.5");
  v.require(sym_bad == 0, std::to_string(sym_bad) + " symmetry violations");
  v.require(deriv_bad == 0, std::to_string(deriv_bad) + " derivative mismatches");
  return v;
}

// ---------------------------------------------------------------- 8

bool round_trips(const std::string& text) {
  const Model m = parse_model(text);
  const std::string again = std::visit([](const auto& x) { return serialize(x); }, m);
  if (again != text) return false;
  const Model m2 = parse_model(again);
  return m == m2;
}

Verdict determinism(const std::vector<Artifacts>& first, const std::vector<Artifacts>& second) {
  Verdict v;
  std::size_t files = 0;
  std::size_t differing = 0;
  std::size_t round_trip_failures = 0;
  for (std::size_t c = 0; c < first.size(); ++c) {
    if (first[c].transcript != second[c].transcript) ++differing;
    if (first[c].model_texts != second[c].model_texts) ++differing;
    for (const auto& t : first[c].model_texts) {
      ++files;
      round_trip_failures += !round_trips(t);
    }
  }
  v.detail = std::to_string(first.size()) + " criteria rerun, " + std::to_string(files) +
             " model files compared and round-tripped";
  v.require(differing == 0, std::to_string(differing) + " artifacts differ between runs");
  v.require(round_trip_failures == 0, std::to_string(round_trip_failures) + " save/load round trips not exact");
  return v;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int n, const char* title, const Verdict& v) {
    std::printf("%s criterion %d: %s (%s)\n", v.pass ? "PASS" : "FAIL", n, title, v.detail.c_str());
    std::fflush(stdout);
    failures += !v.pass;
  };

  report(1, "integral image vs brute force", integral_oracle());
  report(2, "backprop gradients vs finite differences", gradient_check());

  std::vector<Artifacts> run1(4), run2(4);
  report(3, "bit-pattern table, 8-8-8 network", bit_table(run1[0]));
  report(4, "numeric table, min-max 4-8-4 network and eval", numeric_table(run1[1]));
  report(5, "AdaBoost on Haar features", adaboost_sanity(run1[2]));

  auto t0 = Clock::now();
  const DetectionOutcome detector = train_synthetic_detector();
  const double train_secs = seconds_since(t0);
  report(6, "end-to-end synthetic detection", synthetic_detection(detector, train_secs, run1[3]));
  report(7, "sigmoid identities", sigmoid_identities());

  {
    bit_table(run2[0]);
    numeric_table(run2[1]);
    adaboost_sanity(run2[2]);
    const DetectionOutcome again = train_synthetic_detector();
    synthetic_detection(again, 0.0, run2[3]);
  }
  report(8, "determinism and persistence", determinism(run1, run2));
  report(9, "cascade short-circuit", short_circuit(detector));

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
