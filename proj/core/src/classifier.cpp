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

#include "dgl/classifier.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "dgl/error.hpp"
#include "dgl/io.hpp"
#include "dgl/parallel.hpp"
#include "dgl/smoothing.hpp"

namespace dgl {
namespace {

constexpr std::array<char, 4> kCheckpointMagic = {'D', 'G', 'M', '1'};
constexpr std::uint32_t kCheckpointVersion = 1;
constexpr double kLogFloor = 1e-12;
// Samples per gradient accumulation chunk. Fixed so the reduction order, and
// therefore the result, does not depend on the thread count.
constexpr std::size_t kChunk = 32;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void softmax_inplace(std::span<double> z) {
  const double top = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - top);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

// Forward pass keeping the hidden activations for backprop.
void forward_into(const MlpParams& p, std::span<const double> x, std::span<double> hidden,
                  std::span<double> probs) {
  const auto w1 = p.w1();
  const auto b1 = p.b1();
  const auto w2 = p.w2();
  const auto b2 = p.b2();
  const std::size_t nf = p.n_features();
  for (std::size_t j = 0; j < p.hidden(); ++j) {
    const double* row = w1.data() + j * nf;
    double a = b1[j];
    for (std::size_t i = 0; i < nf; ++i) a += row[i] * x[i];
    hidden[j] = sigmoid(a);
  }
  for (std::size_t c = 0; c < p.n_classes(); ++c) {
    const double* row = w2.data() + c * p.hidden();
    double z = b2[c];
    for (std::size_t j = 0; j < p.hidden(); ++j) z += row[j] * hidden[j];
    probs[c] = z;
  }
  softmax_inplace(probs);
}

void check_input(const MlpParams& p, std::size_t size) {
  if (size != p.n_features()) {
    throw ValidationError("feature vector has " + std::to_string(size) + " entries, model expects " +
                          std::to_string(p.n_features()));
  }
}

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) throw FormatError("checkpoint truncated");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace

MlpParams::MlpParams(std::size_t n_features, std::size_t hidden, std::size_t n_classes)
    : n_features_(n_features), hidden_(hidden), n_classes_(n_classes),
      values_(hidden * n_features + hidden + n_classes * hidden + n_classes, 0.0) {}

MlpParams init_params(std::size_t n_features, std::size_t hidden, std::size_t n_classes, Rng& rng) {
  MlpParams p(n_features, hidden, n_classes);
  const double lim1 = std::sqrt(6.0 / static_cast<double>(n_features + hidden));
  const double lim2 = std::sqrt(6.0 / static_cast<double>(hidden + n_classes));
  std::uniform_real_distribution<double> d1(-lim1, lim1);
  std::uniform_real_distribution<double> d2(-lim2, lim2);
  for (double& w : p.w1()) w = d1(rng);
  for (double& w : p.w2()) w = d2(rng);
  return p;
}

std::vector<double> forward(const MlpParams& params, std::span<const double> features) {
  check_input(params, features.size());
  for (double v : features) {
    if (!std::isfinite(v)) throw ValidationError("non-finite feature value");
  }
  std::vector<double> hidden(params.hidden());
  std::vector<double> probs(params.n_classes());
  forward_into(params, features, hidden, probs);
  return probs;
}

std::vector<double> forward(const MlpParams& params, std::span<const float> features) {
  std::vector<double> x(features.begin(), features.end());
  return forward(params, std::span<const double>(x));
}

double cross_entropy(std::span<const double> probs, std::span<const double> target) {
  double loss = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (target[k] != 0.0) loss -= target[k] * std::log(std::max(probs[k], kLogFloor));
  }
  return loss;
}

BackwardResult backward(const MlpParams& params, std::span<const TrainingSample> batch, int threads) {
  if (batch.empty()) throw ValidationError("backward on an empty batch");
  const std::size_t nf = params.n_features();
  const std::size_t nh = params.hidden();
  const std::size_t nc = params.n_classes();
  const double inv_batch = 1.0 / static_cast<double>(batch.size());

  BackwardResult result;
  result.output_delta.assign(batch.size() * nc, 0.0);
  result.predicted.assign(batch.size(), 0);
  std::vector<double> losses(batch.size(), 0.0);

  const std::size_t n_chunks = (batch.size() + kChunk - 1) / kChunk;
  std::vector<MlpParams> partial(n_chunks, MlpParams(nf, nh, nc));

  parallel_for(n_chunks, threads, [&](std::size_t chunk) {
    auto& g = partial[chunk];
    auto gw1 = g.w1();
    auto gb1 = g.b1();
    auto gw2 = g.w2();
    auto gb2 = g.b2();
    const auto w2 = params.w2();
    std::vector<double> x(nf);
    std::vector<double> hidden(nh);
    std::vector<double> dhidden(nh);
    const std::size_t end = std::min(batch.size(), (chunk + 1) * kChunk);
    for (std::size_t s = chunk * kChunk; s < end; ++s) {
      const auto& sample = batch[s];
      check_input(params, sample.features.size());
      if (sample.target.size() != nc) throw ValidationError("target size does not match N_c");
      std::copy(sample.features.begin(), sample.features.end(), x.begin());
      std::span<double> delta(result.output_delta.data() + s * nc, nc);
      forward_into(params, x, hidden, delta);  // delta holds p for now
      losses[s] = cross_entropy(delta, sample.target);
      if (!std::isfinite(losses[s])) {
        throw TrainingError("non-finite loss at batch sample " + std::to_string(s));
      }
      result.predicted[s] =
          static_cast<ClassId>(std::max_element(delta.begin(), delta.end()) - delta.begin());
      for (std::size_t c = 0; c < nc; ++c) delta[c] = (delta[c] - sample.target[c]) * inv_batch;

      std::fill(dhidden.begin(), dhidden.end(), 0.0);
      for (std::size_t c = 0; c < nc; ++c) {
        const double d = delta[c];
        gb2[c] += d;
        double* grow = gw2.data() + c * nh;
        const double* wrow = w2.data() + c * nh;
        for (std::size_t j = 0; j < nh; ++j) {
          grow[j] += d * hidden[j];
          dhidden[j] += d * wrow[j];
        }
      }
      for (std::size_t j = 0; j < nh; ++j) {
        const double da = dhidden[j] * hidden[j] * (1.0 - hidden[j]);
        gb1[j] += da;
        double* grow = gw1.data() + j * nf;
        for (std::size_t i = 0; i < nf; ++i) grow[i] += da * x[i];
      }
    }
  });

  result.grads = std::move(partial.front());
  auto total = result.grads.values();
  for (std::size_t chunk = 1; chunk < n_chunks; ++chunk) {
    const auto part = partial[chunk].values();
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += part[i];
  }
  for (double v : total) {
    if (!std::isfinite(v)) throw TrainingError("non-finite gradient");
  }
  double loss = 0.0;
  for (double l : losses) loss += l;
  result.mean_loss = loss * inv_batch;
  return result;
}

AdamState AdamState::zeros_like(const MlpParams& params) {
  AdamState s;
  s.first_moment.assign(params.values().size(), 0.0);
  s.second_moment.assign(params.values().size(), 0.0);
  return s;
}

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state, double lr,
               double weight_decay) {
  auto p = params.values();
  const auto g = grads.values();
  if (g.size() != p.size() || state.first_moment.size() != p.size() ||
      state.second_moment.size() != p.size()) {
    throw ValidationError("adam_step: parameter, gradient and moment shapes differ");
  }
  ++state.step;
  const double c1 = 1.0 - std::pow(AdamState::kBeta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(AdamState::kBeta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto& m = state.first_moment[i];
    auto& v = state.second_moment[i];
    m = AdamState::kBeta1 * m + (1.0 - AdamState::kBeta1) * g[i];
    v = AdamState::kBeta2 * v + (1.0 - AdamState::kBeta2) * g[i] * g[i];
    const double m_hat = m / c1;
    const double v_hat = v / c2;
    p[i] -= lr * (m_hat / (std::sqrt(v_hat) + AdamState::kEps) + weight_decay * p[i]);
  }
}

TrainResult train(std::span<const SegmentFeatureRecord> features, const TimelineMap& timelines,
                  const PipelineConfig& config, int threads, const EpochCallback& on_epoch) {
  config.validate();
  for (const auto& r : features) {
    if (r.features.size() != static_cast<std::size_t>(config.feature_dim)) {
      throw ValidationError("feature record of size " + std::to_string(r.features.size()) +
                            " but feature_dim is " + std::to_string(config.feature_dim));
    }
  }
  const auto index = build_index(features, timelines, config);

  Rng init_rng(derive_seed(config.seed, SeedStream::kInit));
  TrainResult result{init_params(static_cast<std::size_t>(config.feature_dim),
                                 static_cast<std::size_t>(config.hidden_dim),
                                 static_cast<std::size_t>(config.n_classes), init_rng),
                     {}};
  auto state = AdamState::zeros_like(result.params);
  Rng rng(derive_seed(config.seed, SeedStream::kTraining));

  std::vector<std::vector<double>> targets;
  std::vector<ClassId> majority;
  std::vector<TrainingSample> samples;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    double loss_sum = 0.0;
    std::size_t correct = 0;
    std::size_t seen = 0;
    for (int b = 0; b < config.batches_per_epoch; ++b) {
      auto batch = sample_batch(index, config.samples_per_class_per_view, rng);
      if (epoch == 0 && b == 0) result.report.empty_cells = batch.empty_cells;
      targets.resize(batch.records.size());
      majority.resize(batch.records.size());
      samples.resize(batch.records.size());
      for (std::size_t s = 0; s < batch.records.size(); ++s) {
        const auto& rec = features[batch.records[s]];
        const auto counts = count_labels(timelines.at(rec.scene_id), rec.start_frame,
                                         config.segment_len, config.n_classes);
        targets[s] = make_target(counts, config).probs;
        majority[s] = majority_label(counts);
        samples[s] = {rec.features, targets[s]};
      }
      const auto grad = backward(result.params, samples, threads);
      adam_step(result.params, grad.grads, state, config.learning_rate, config.weight_decay);
      loss_sum += grad.mean_loss;
      for (std::size_t s = 0; s < samples.size(); ++s) correct += grad.predicted[s] == majority[s];
      seen += samples.size();
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.mean_loss = loss_sum / config.batches_per_epoch;
    stats.accuracy = static_cast<double>(correct) / static_cast<double>(seen);
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!std::isfinite(stats.mean_loss)) {
      throw TrainingError("training diverged in epoch " + std::to_string(epoch));
    }
    result.report.epochs.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  return result;
}

std::vector<SegmentProbabilities> infer(const MlpParams& params,
                                        std::span<const SegmentFeatureRecord> features, int threads) {
  std::vector<SegmentProbabilities> out(features.size());
  parallel_for(features.size(), threads, [&](std::size_t i) {
    const auto& r = features[i];
    out[i] = {r.scene_id, r.view_id, r.start_frame, forward(params, std::span<const float>(r.features))};
  });
  return out;
}

void write_checkpoint(std::ostream& out, const MlpParams& params) {
  out.write(kCheckpointMagic.data(), kCheckpointMagic.size());
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.n_features()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.hidden()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.n_classes()));
  for (double v : params.values()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw IoError("checkpoint write failed");
}

MlpParams read_checkpoint(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4 || magic != kCheckpointMagic) throw FormatError("not a model checkpoint (bad magic)");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto nf = get_le<std::uint32_t>(in);
  const auto nh = get_le<std::uint32_t>(in);
  const auto nc = get_le<std::uint32_t>(in);
  if (nf == 0 || nh == 0 || nc < 2) throw FormatError("checkpoint has degenerate dimensions");
  MlpParams params(nf, nh, nc);
  for (double& v : params.values()) {
    v = std::bit_cast<double>(get_le<std::uint64_t>(in));
    if (!std::isfinite(v)) throw FormatError("checkpoint holds a non-finite parameter");
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes in checkpoint");
  return params;
}

void write_checkpoint(const std::filesystem::path& path, const MlpParams& params) {
  std::ostringstream buf(std::ios::binary);
  write_checkpoint(buf, params);
  write_file_atomic(path, buf.view());
}

MlpParams read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace dgl
