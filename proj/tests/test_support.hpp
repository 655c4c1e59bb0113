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

// Shared scenario builders for the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dgl/classifier.hpp"
#include "dgl/evaluation.hpp"
#include "oracles.hpp"

namespace dgl::testing {

struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t n_params = 0;
};

// Relative error with a 1e-6 scale floor, so vanishing gradients are judged
// on absolute error instead of amplified noise.
inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

// Random small network and batch; analytic gradient from backward() against
// central differences (h = 1e-5) of the longhand oracle loss.
inline GradCheck random_gradient_check(std::mt19937_64& rng, int threads = 1) {
  const auto nf = std::uniform_int_distribution<std::size_t>(1, 16)(rng);
  const auto nh = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
  const auto nc = std::uniform_int_distribution<std::size_t>(2, 5)(rng);
  const auto batch_size = std::uniform_int_distribution<std::size_t>(1, 6)(rng);

  Rng init(rng());
  MlpParams params = init_params(nf, nh, nc, init);
  std::normal_distribution<double> bias(0.0, 0.5);
  for (double& b : params.b1()) b = bias(init);
  for (double& b : params.b2()) b = bias(init);

  std::normal_distribution<float> feat(0.f, 1.f);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<float>> xs(batch_size, std::vector<float>(nf));
  std::vector<std::vector<double>> targets(batch_size, std::vector<double>(nc));
  for (std::size_t s = 0; s < batch_size; ++s) {
    for (auto& v : xs[s]) v = feat(rng);
    double sum = 0.0;
    for (auto& q : targets[s]) sum += (q = u(rng));
    for (auto& q : targets[s]) q /= sum;
  }
  std::vector<TrainingSample> batch;
  for (std::size_t s = 0; s < batch_size; ++s) batch.push_back({xs[s], targets[s]});

  const auto analytic = backward(params, batch, threads);
  const std::vector<double> theta(params.values().begin(), params.values().end());
  const auto numeric = oracle::central_difference(
      [&](std::span<const double> t) { return oracle::network_mean_loss(t, nf, nh, nc, xs, targets); },
      theta, 1e-5);

  GradCheck out;
  out.n_params = theta.size();
  const auto g = analytic.grads.values();
  for (std::size_t i = 0; i < theta.size(); ++i) {
    out.max_rel_error = std::max(out.max_rel_error, relative_error(g[i], numeric[i]));
  }
  return out;
}

struct MatchInstance {
  std::vector<AnnotationEvent> gts;
  std::vector<Prediction> preds;
  bool one_to_one = true;  // every gt and every prediction has at most one eligible partner
};

// Up to 8 ground-truth events and 8 predictions on a crowded timeline, so
// several candidates often fall within the tolerance of each other.
inline MatchInstance random_match_instance(std::mt19937_64& rng, std::int64_t tol) {
  MatchInstance inst;
  std::uniform_int_distribution<int> count(0, 8), cls(1, 3), scene(0, 1);
  std::uniform_int_distribution<FrameIndex> pos(0, 300), len(20, 120), jitter(-2 * tol, 2 * tol);
  std::uniform_real_distribution<double> peak(0.0, 1.0);
  const int n_gt = count(rng);
  for (int i = 0; i < n_gt; ++i) {
    const FrameIndex s = pos(rng);
    inst.gts.push_back({static_cast<SceneId>(scene(rng)), cls(rng), s, s + len(rng)});
  }
  const int n_pred = count(rng);
  for (int i = 0; i < n_pred; ++i) {
    if (!inst.gts.empty() && peak(rng) < 0.7) {
      const auto& g = inst.gts[std::uniform_int_distribution<std::size_t>(0, inst.gts.size() - 1)(rng)];
      const FrameIndex s = g.start_frame + jitter(rng);
      inst.preds.push_back({g.scene_id, g.class_id, s, std::max(s, g.end_frame + jitter(rng)), peak(rng)});
    } else {
      const FrameIndex s = pos(rng);
      inst.preds.push_back({static_cast<SceneId>(scene(rng)), cls(rng), s, s + len(rng), peak(rng)});
    }
  }
  auto eligible = [&](const AnnotationEvent& g, const Prediction& p) {
    return g.scene_id == p.scene_id && g.class_id == p.class_id &&
           std::llabs(g.start_frame - p.start_frame) <= tol && std::llabs(g.end_frame - p.end_frame) <= tol;
  };
  for (const auto& g : inst.gts) {
    if (std::count_if(inst.preds.begin(), inst.preds.end(), [&](const auto& p) { return eligible(g, p); }) > 1) {
      inst.one_to_one = false;
    }
  }
  for (const auto& p : inst.preds) {
    if (std::count_if(inst.gts.begin(), inst.gts.end(), [&](const auto& g) { return eligible(g, p); }) > 1) {
      inst.one_to_one = false;
    }
  }
  return inst;
}

}  // namespace dgl::testing
