#include <benchmark/benchmark.h>

#include "vjface/bpnn.hpp"
#include "vjface/cascade.hpp"
#include "vjface/corpus.hpp"
#include "vjface/detector.hpp"
#include "vjface/haar.hpp"

using namespace vjface;

namespace {

GrayImage noise_image(int size, std::uint64_t seed) {
  Rng rng(seed);
  MotifStyle style;
  return render_background(size, size, style, rng);
}

// Trained once and shared by the scan benchmarks.
const Cascade& bench_cascade() {
  static const Cascade cascade = [] {
    SyntheticCorpusSpec spec;
    spec.n_pos = 200;
    spec.n_neg = 200;
    spec.image_size = 16;
    const Corpus corpus = generate_corpus(spec);
    const WindowSpec win{16};
    CascadeConfig cfg;
    cfg.max_stages = 5;
    cfg.per_stage_fpr = 0.1;
    cfg.overall_fpr_target = 1e-8;
    cfg.max_weaks_per_stage = 100;
    ImageWindowSource negatives(corpus.negatives, win, cfg.seed, 2'000'000);
    return train_cascade(positive_windows(corpus.positives, win), negatives,
                         sample_features(enumerate_features(win), 4000, 1), win, cfg);
  }();
  return cascade;
}

}  // namespace

static void BM_IntegralImage(benchmark::State& state) {
  const auto img = noise_image(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(integral_image(img));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_IntegralImage)->Arg(64)->Arg(320)->Arg(1024);

static void BM_RectSum(benchmark::State& state) {
  const auto ii = integral_image(noise_image(256, 2));
  const int w = static_cast<int>(state.range(0));
  int x = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rect_sum(ii, Rect{x, x, w, w}));
    x = (x + 7) % (256 - w);
  }
}
BENCHMARK(BM_RectSum)->Arg(4)->Arg(64)->Arg(192);

static void BM_EvaluateFeature(benchmark::State& state) {
  const WindowSpec win{24};
  const auto features = sample_features(enumerate_features(win), 1024, 3);
  const auto ii = integral_image(noise_image(96, 3));
  const double scale = static_cast<double>(state.range(0)) / 100.0;
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_feature(ii, features[k], win, Point{5, 5}, scale));
    k = (k + 1) % features.size();
  }
}
BENCHMARK(BM_EvaluateFeature)->Arg(100)->Arg(125)->Arg(300);

static void BM_Detect(benchmark::State& state) {
  const Cascade& c = bench_cascade();
  const int size = static_cast<int>(state.range(0));
  SceneSpec scene;
  scene.size = size;
  const auto img = generate_scene(4, scene, true).image;
  for (auto _ : state) benchmark::DoNotOptimize(detect(c, img, ScanConfig{}));
}
BENCHMARK(BM_Detect)->Arg(64)->Arg(160)->Unit(benchmark::kMillisecond);

static void BM_ForwardBackward(benchmark::State& state) {
  NetworkConfig cfg;
  cfg.n_in = static_cast<std::size_t>(state.range(0));
  cfg.n_hidden = 32;
  cfg.n_out = 8;
  const Network net = Network::random(cfg);
  std::vector<double> in(cfg.n_in, 0.3), target(cfg.n_out, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward(net, in));
    benchmark::DoNotOptimize(backward(net, in, target));
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(8)->Arg(256);
BENCHMARK_MAIN();
