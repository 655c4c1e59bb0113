// Copyright 2026 The DGL Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "dgl/config.hpp"
#include "dgl/dataset.hpp"
#include "dgl/types.hpp"

namespace dgl {

// Two fully-connected layers: sigmoid hidden layer, softmax output.
//
// All parameters live in one flat buffer laid out as W1 (hidden x in),
// b1 (hidden), W2 (classes x hidden), b2 (classes), each row-major. The same
// type doubles as a gradient container.
class MlpParams {
 public:
  MlpParams() = default;
  MlpParams(std::size_t n_features, std::size_t hidden, std::size_t n_classes);

  std::size_t n_features() const { return n_features_; }
  std::size_t hidden() const { return hidden_; }
  std::size_t n_classes() const { return n_classes_; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  std::span<double> w1() { return values_span(0, hidden_ * n_features_); }
  std::span<double> b1() { return values_span(b1_offset(), hidden_); }
  std::span<double> w2() { return values_span(w2_offset(), n_classes_ * hidden_); }
  std::span<double> b2() { return values_span(b2_offset(), n_classes_); }
  std::span<const double> w1() const { return values_span(0, hidden_ * n_features_); }
  std::span<const double> b1() const { return values_span(b1_offset(), hidden_); }
  std::span<const double> w2() const { return values_span(w2_offset(), n_classes_ * hidden_); }
  std::span<const double> b2() const { return values_span(b2_offset(), n_classes_); }

  friend bool operator==(const MlpParams&, const MlpParams&) = default;

 private:
  std::size_t b1_offset() const { return hidden_ * n_features_; }
  std::size_t w2_offset() const { return b1_offset() + hidden_; }
  std::size_t b2_offset() const { return w2_offset() + n_classes_ * hidden_; }
  std::span<double> values_span(std::size_t off, std::size_t n) { return {values_.data() + off, n}; }
  std::span<const double> values_span(std::size_t off, std::size_t n) const {
    return {values_.data() + off, n};
  }

  std::size_t n_features_ = 0;
  std::size_t hidden_ = 0;
  std::size_t n_classes_ = 0;
  std::vector<double> values_;
};

// Glorot-uniform weights, zero biases.
MlpParams init_params(std::size_t n_features, std::size_t hidden, std::size_t n_classes, Rng& rng);

// Class probabilities for one feature vector. Throws ValidationError on a
// dimension mismatch or non-finite input.
std::vector<double> forward(const MlpParams& params, std::span<const double> features);
std::vector<double> forward(const MlpParams& params, std::span<const float> features);

// Cross-entropy -sum_k target[k] * log(max(probs[k], 1e-12)).
double cross_entropy(std::span<const double> probs, std::span<const double> target);

struct TrainingSample {
  std::span<const float> features;
  std::span<const double> target;
};

struct BackwardResult {
  MlpParams grads;   // gradient of the mean batch loss
  double mean_loss = 0.0;
  // Output pre-activation gradient, batch x classes: (p - q) / batch_size.
  std::vector<double> output_delta;
  // Argmax of each sample's forward pass.
  std::vector<ClassId> predicted;
};

// Analytic gradients of the mean cross-entropy over `batch`. Samples are
// reduced in fixed-size chunks in a fixed order, so the result is identical
// for every `threads` value. Throws TrainingError on a non-finite value.
BackwardResult backward(const MlpParams& params, std::span<const TrainingSample> batch,
                        int threads = 1);

struct AdamState {
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;

  std::vector<double> first_moment;
  std::vector<double> second_moment;
  long step = 0;

  static AdamState zeros_like(const MlpParams& params);
};

// Bias-corrected Adam with decoupled weight decay:
//   p -= lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * p)
void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state, double lr,
               double weight_decay);

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;
  double accuracy = 0.0;  // argmax vs. majority label on the sampled segments
  double seconds = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  std::vector<std::pair<ClassId, ViewId>> empty_cells;
};

struct TrainResult {
  MlpParams params;
  TrainReport report;
};

using EpochCallback = std::function<void(const EpochStats&)>;

// Balanced mini-batch training with targets from make_target(). Deterministic
// given config.seed; `threads` does not change the result.
TrainResult train(std::span<const SegmentFeatureRecord> features, const TimelineMap& timelines,
                  const PipelineConfig& config, int threads = 1,
                  const EpochCallback& on_epoch = {});

// forward() per record, order preserved.
std::vector<SegmentProbabilities> infer(const MlpParams& params,
                                        std::span<const SegmentFeatureRecord> features,
                                        int threads = 1);

// Checkpoint: "DGM1" | u32 version=1 | u32 N_f | u32 hidden | u32 N_c |
// f64 W1, b1, W2, b2 (row-major, little-endian).
void write_checkpoint(std::ostream& out, const MlpParams& params);
MlpParams read_checkpoint(std::istream& in);
void write_checkpoint(const std::filesystem::path& path, const MlpParams& params);
MlpParams read_checkpoint(const std::filesystem::path& path);

}  // namespace dgl
