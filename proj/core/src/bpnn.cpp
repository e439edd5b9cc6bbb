#include "vjface/bpnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

#include "vjface/rng.hpp"

namespace vjface {

void validate(const NetworkConfig& cfg) {
  if (cfg.n_in < 1 || cfg.n_hidden < 1 || cfg.n_out < 1) {
    throw DimensionError("network dimensions must be >= 1");
  }
  if (!(cfg.learning_rate > 0.0)) throw DimensionError("learning_rate must be positive");
  if (!(cfg.goal_mse >= 0.0)) throw DimensionError("goal_mse must be non-negative");
}

Network Network::zeros(std::size_t n_in, std::size_t n_hidden, std::size_t n_out) {
  return Network{Matrix(n_hidden, n_in), std::vector<double>(n_hidden, 0.0),
                 Matrix(n_out, n_hidden), std::vector<double>(n_out, 0.0)};
}

Network Network::random(const NetworkConfig& cfg) {
  validate(cfg);
  Network net = zeros(cfg.n_in, cfg.n_hidden, cfg.n_out);
  Rng rng(cfg.seed);
  auto draw = [&] { return rng.uniform(-0.5, 0.5); };
  for (auto& v : net.w1.flat()) v = draw();
  for (auto& v : net.b1) v = draw();
  for (auto& v : net.w2.flat()) v = draw();
  for (auto& v : net.b2) v = draw();
  return net;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double sigmoid_derivative(double s) { return s * (1.0 - s); }

namespace {

void check_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + " has length " + std::to_string(got) +
                         ", expected " + std::to_string(want));
  }
}

// out[r] = sigmoid(bias[r] + sum_c m(r, c) * in[c])
void layer(const Matrix& m, std::span<const double> bias, std::span<const double> in,
           std::vector<double>& out) {
  out.resize(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double z = bias[r];
    const auto w = m.row(r);
    for (std::size_t c = 0; c < w.size(); ++c) z += w[c] * in[c];
    out[r] = sigmoid(z);
  }
}

}  // namespace

Activations forward(const Network& net, std::span<const double> input) {
  check_length(input.size(), net.n_in(), "input");
  Activations a;
  layer(net.w1, net.b1, input, a.hidden);
  layer(net.w2, net.b2, a.hidden, a.output);
  return a;
}

Gradients backward(const Network& net, std::span<const double> input,
                   std::span<const double> target) {
  check_length(target.size(), net.n_out(), "target");
  const Activations a = forward(net, input);

  Gradients g{Matrix(net.n_hidden(), net.n_in()), std::vector<double>(net.n_hidden()),
              Matrix(net.n_out(), net.n_hidden()), std::vector<double>(net.n_out())};

  for (std::size_t o = 0; o < net.n_out(); ++o) {
    g.db2[o] = (a.output[o] - target[o]) * sigmoid_derivative(a.output[o]);
    auto row = g.dw2.row(o);
    for (std::size_t h = 0; h < net.n_hidden(); ++h) row[h] = g.db2[o] * a.hidden[h];
  }
  for (std::size_t h = 0; h < net.n_hidden(); ++h) {
    double back = 0.0;
    for (std::size_t o = 0; o < net.n_out(); ++o) back += net.w2(o, h) * g.db2[o];
    g.db1[h] = back * sigmoid_derivative(a.hidden[h]);
    auto row = g.dw1.row(h);
    for (std::size_t i = 0; i < net.n_in(); ++i) row[i] = g.db1[h] * input[i];
  }
  return g;
}

Network apply_update(Network net, const Gradients& grads, double learning_rate) {
  auto step = [learning_rate](std::span<double> p, std::span<const double> d) {
    if (p.size() != d.size()) throw DimensionError("gradient shape does not match network");
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= learning_rate * d[i];
  };
  step(net.w1.flat(), grads.dw1.flat());
  step(net.b1, grads.db1);
  step(net.w2.flat(), grads.dw2.flat());
  step(net.b2, grads.db2);
  return net;
}

double mse(std::span<const std::vector<double>> outputs,
           std::span<const std::vector<double>> targets) {
  check_length(targets.size(), outputs.size(), "target list");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t s = 0; s < outputs.size(); ++s) {
    check_length(targets[s].size(), outputs[s].size(), "target vector");
    for (std::size_t j = 0; j < outputs[s].size(); ++j) {
      const double d = outputs[s][j] - targets[s][j];
      sum += d * d;
    }
    count += outputs[s].size();
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

DataSplit split_data(std::size_t n, SplitRatios ratios, std::uint64_t seed) {
  if (n < 1) throw DimensionError("cannot split an empty dataset");
  if (ratios.train < 0.0 || ratios.validation < 0.0 || ratios.test < 0.0 ||
      std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw DimensionError("split ratios must be non-negative and sum to 1");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(idx));

  const double dn = static_cast<double>(n);
  auto train_end = static_cast<std::size_t>(std::llround(dn * ratios.train));
  auto val_end = static_cast<std::size_t>(std::llround(dn * (ratios.train + ratios.validation)));
  train_end = std::min(train_end, n);
  val_end = std::clamp(val_end, train_end, n);
  if (ratios.test == 0.0) val_end = n;
  if (ratios.validation == 0.0 && ratios.test == 0.0) train_end = n;
  if (train_end == 0 && ratios.train > 0.0) {
    train_end = 1;
    val_end = std::max(val_end, train_end);
  }

  DataSplit split;
  split.ratios = ratios;
  split.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(train_end));
  split.validation.assign(idx.begin() + static_cast<std::ptrdiff_t>(train_end),
                          idx.begin() + static_cast<std::ptrdiff_t>(val_end));
  split.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(val_end), idx.end());
  return split;
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::goal_met: return "goal_met";
    case StopReason::val_fail: return "val_fail";
    case StopReason::max_epochs: return "max_epochs";
  }
  return "?";
}

double evaluate_mse(const Network& net, const Dataset& data, std::span<const std::size_t> indices) {
  if (indices.empty()) return std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  std::size_t count = 0;
  for (auto i : indices) {
    const auto out = forward(net, data.inputs[i]).output;
    const auto& tgt = data.targets[i];
    check_length(tgt.size(), out.size(), "target vector");
    for (std::size_t j = 0; j < out.size(); ++j) {
      const double d = out[j] - tgt[j];
      sum += d * d;
    }
    count += out.size();
  }
  return sum / static_cast<double>(count);
}

TrainResult train(Network net, const Dataset& data, const DataSplit& split,
                  const NetworkConfig& cfg) {
  validate(cfg);
  if (split.train.empty()) throw EmptySplitError("training split is empty");
  check_length(data.targets.size(), data.inputs.size(), "target list");
  for (std::size_t i = 0; i < data.size(); ++i) {
    check_length(data.inputs[i].size(), net.n_in(), "input vector");
    check_length(data.targets[i].size(), net.n_out(), "target vector");
  }

  TrainReport report;
  // Separate stream from the weight initializer, which also uses cfg.seed.
  Rng order_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order = split.train;

  const bool has_val = !split.validation.empty();
  double best_val = std::numeric_limits<double>::infinity();
  Network best_net = net;
  std::size_t fails = 0;

  while (report.epochs_run < cfg.max_epochs) {
    order_rng.shuffle(std::span<std::size_t>(order));
    for (auto i : order) {
      const Gradients g = backward(net, data.inputs[i], data.targets[i]);
      net = apply_update(std::move(net), g, cfg.learning_rate);
    }
    ++report.epochs_run;
    const EpochRecord rec{evaluate_mse(net, data, split.train),
                          evaluate_mse(net, data, split.validation)};
    report.mse_curve.push_back(rec);

    if (rec.train_mse <= cfg.goal_mse) {
      report.stop_reason = StopReason::goal_met;
      break;
    }
    if (has_val) {
      if (rec.val_mse < best_val) {
        best_val = rec.val_mse;
        best_net = net;
        fails = 0;
      } else if (++fails >= cfg.val_fail_limit) {
        report.stop_reason = StopReason::val_fail;
        net = best_net;
        break;
      }
    }
  }
  report.final_test_mse = evaluate_mse(net, data, split.test);
  return TrainResult{std::move(net), std::move(report)};
}

void write_report_csv(std::ostream& out, const TrainReport& report) {
  out << "epoch,train_mse,val_mse\n";
  char buf[96];
  for (std::size_t e = 0; e < report.mse_curve.size(); ++e) {
    const auto& r = report.mse_curve[e];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", e + 1, r.train_mse, r.val_mse);
    out << buf;
  }
}

}  // namespace vjface
