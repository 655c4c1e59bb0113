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

#include "dgl/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dgl {

std::int64_t tolerance_in_frames(double fps, double tolerance_s) {
  return std::llround(tolerance_s * fps);
}

MatchResult match(std::span<const AnnotationEvent> ground_truth,
                  std::span<const Prediction> predictions, double fps, double tolerance_s) {
  const std::int64_t tol = tolerance_in_frames(fps, tolerance_s);
  std::vector<std::size_t> order(predictions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const auto& a = predictions[i];
    const auto& b = predictions[j];
    if (a.peak_prob != b.peak_prob) return a.peak_prob > b.peak_prob;
    return a.start_frame < b.start_frame;
  });

  MatchResult result;
  std::vector<bool> gt_used(ground_truth.size(), false);
  for (std::size_t pi : order) {
    const auto& p = predictions[pi];
    std::size_t best = ground_truth.size();
    std::int64_t best_err = std::numeric_limits<std::int64_t>::max();
    for (std::size_t gi = 0; gi < ground_truth.size(); ++gi) {
      const auto& g = ground_truth[gi];
      if (gt_used[gi] || g.scene_id != p.scene_id || g.class_id != p.class_id) continue;
      const std::int64_t ds = std::abs(p.start_frame - g.start_frame);
      const std::int64_t de = std::abs(p.end_frame - g.end_frame);
      if (ds > tol || de > tol) continue;
      if (ds + de < best_err) {
        best_err = ds + de;
        best = gi;
      }
    }
    if (best < ground_truth.size()) {
      gt_used[best] = true;
      result.pairs.emplace_back(best, pi);
    }
  }
  result.tp = result.pairs.size();
  result.fp = predictions.size() - result.tp;
  result.fn = ground_truth.size() - result.tp;
  return result;
}

Metrics metrics(const MatchResult& result) {
  Metrics m;
  const auto tp = static_cast<double>(result.tp);
  if (result.tp + result.fp > 0) m.precision = tp / static_cast<double>(result.tp + result.fp);
  if (result.tp + result.fn > 0) m.recall = tp / static_cast<double>(result.tp + result.fn);
  if (m.precision + m.recall > 0.0) {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

std::vector<ClassMetrics> per_class_metrics(std::span<const AnnotationEvent> ground_truth,
                                            std::span<const Prediction> predictions,
                                            int n_classes, double fps, double tolerance_s) {
  std::vector<ClassMetrics> out;
  for (ClassId c = 1; c < n_classes; ++c) {
    std::vector<AnnotationEvent> gts;
    std::vector<Prediction> preds;
    std::copy_if(ground_truth.begin(), ground_truth.end(), std::back_inserter(gts),
                 [c](const auto& e) { return e.class_id == c; });
    std::copy_if(predictions.begin(), predictions.end(), std::back_inserter(preds),
                 [c](const auto& p) { return p.class_id == c; });
    ClassMetrics cm;
    cm.class_id = c;
    cm.match = match(gts, preds, fps, tolerance_s);
    cm.metrics = metrics(cm.match);
    out.push_back(std::move(cm));
  }
  return out;
}

}  // namespace dgl
