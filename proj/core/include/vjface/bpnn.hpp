#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "vjface/error.hpp"

namespace vjface {

struct NetworkConfig {
  std::size_t n_in = 1;
  std::size_t n_hidden = 8;
  std::size_t n_out = 1;
  double learning_rate = 0.5;
  std::size_t max_epochs = 1000;
  std::size_t val_fail_limit = 6;
  double goal_mse = 1e-3;
  std::uint64_t seed = 0;
};

void validate(const NetworkConfig& cfg);

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Three-layer sigmoid network: input -> hidden -> output.
struct Network {
  Matrix w1;               // hidden x input
  std::vector<double> b1;  // hidden
  Matrix w2;               // output x hidden
  std::vector<double> b2;  // output

  static Network zeros(std::size_t n_in, std::size_t n_hidden, std::size_t n_out);
  /// Weights and biases uniform in [-0.5, 0.5], drawn from cfg.seed.
  static Network random(const NetworkConfig& cfg);

  std::size_t n_in() const { return w1.cols(); }
  std::size_t n_hidden() const { return w1.rows(); }
  std::size_t n_out() const { return w2.rows(); }

  friend bool operator==(const Network&, const Network&) = default;
};

struct Activations {
  std::vector<double> hidden;
  std::vector<double> output;
};

struct Gradients {
  Matrix dw1;
  std::vector<double> db1;
  Matrix dw2;
  std::vector<double> db2;
};

/// 1 / (1 + e^-x), evaluated without overflow for any finite x.
double sigmoid(double x);
/// Derivative expressed through the sigmoid output s: s * (1 - s).
double sigmoid_derivative(double s);

Activations forward(const Network& net, std::span<const double> input);

/// Gradients of E = 1/2 * sum (output - target)^2.
Gradients backward(const Network& net, std::span<const double> input,
                   std::span<const double> target);

/// p <- p - learning_rate * dp for every parameter.
Network apply_update(Network net, const Gradients& grads, double learning_rate);

/// Mean of squared differences over all samples and components.
double mse(std::span<const std::vector<double>> outputs,
           std::span<const std::vector<double>> targets);

struct SplitRatios {
  double train = 0.7;
  double validation = 0.15;
  double test = 0.15;
};

struct DataSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
  SplitRatios ratios;
};

/// Seeded shuffle, then contiguous slices whose cumulative boundaries are
/// round(n * r_train) and round(n * (r_train + r_val)).
DataSplit split_data(std::size_t n, SplitRatios ratios, std::uint64_t seed);

struct Dataset {
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> targets;

  std::size_t size() const { return inputs.size(); }
};

enum class StopReason { goal_met, val_fail, max_epochs };

const char* to_string(StopReason reason);

struct EpochRecord {
  double train_mse = 0.0;
  double val_mse = 0.0;  // NaN when the validation split is empty
};

struct TrainReport {
  std::size_t epochs_run = 0;
  std::vector<EpochRecord> mse_curve;
  StopReason stop_reason = StopReason::max_epochs;
  double final_test_mse = 0.0;  // NaN when the test split is empty
};

struct TrainResult {
  Network network;
  TrainReport report;
};

/// Mean squared error of `net` over the samples at `indices`; NaN when empty.
double evaluate_mse(const Network& net, const Dataset& data, std::span<const std::size_t> indices);

/// Per-sample stochastic gradient descent with per-epoch shuffling (seeded
/// by cfg.seed). Stops on train MSE <= goal_mse, on val_fail_limit
/// consecutive epochs without a new validation minimum (restoring the best
/// parameters), or at max_epochs.
TrainResult train(Network net, const Dataset& data, const DataSplit& split,
                  const NetworkConfig& cfg);

/// `epoch,train_mse,val_mse` with one row per epoch.
void write_report_csv(std::ostream& out, const TrainReport& report);

}  // namespace vjface
