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

#include "dgl/localization.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "dgl/error.hpp"
#include "dgl/parallel.hpp"

namespace dgl {

std::vector<double> median_filter(std::span<const double> signal, int window) {
  if (window < 1 || window % 2 == 0) {
    throw ValidationError("median window must be odd and positive, got " + std::to_string(window));
  }
  const std::size_t n = signal.size();
  if (n == 0 || window == 1) return {signal.begin(), signal.end()};
  const auto half = static_cast<std::ptrdiff_t>(window / 2);
  auto padded = [&](std::ptrdiff_t i) {
    return signal[static_cast<std::size_t>(
        std::clamp<std::ptrdiff_t>(i - half, 0, static_cast<std::ptrdiff_t>(n) - 1))];
  };

  std::vector<double> sorted;
  sorted.reserve(static_cast<std::size_t>(window));
  for (std::ptrdiff_t i = 0; i < window; ++i) sorted.push_back(padded(i));
  std::sort(sorted.begin(), sorted.end());

  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    out[t] = sorted[static_cast<std::size_t>(half)];
    if (t + 1 == n) break;
    const double leaving = padded(static_cast<std::ptrdiff_t>(t));
    const double entering = padded(static_cast<std::ptrdiff_t>(t) + window);
    sorted.erase(std::lower_bound(sorted.begin(), sorted.end(), leaving));
    sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), entering), entering);
  }
  return out;
}

std::optional<PeakDetection> detect_peak(std::span<const double> signal, const PipelineConfig& config,
                                         ClassId class_id) {
  const auto n = static_cast<FrameIndex>(signal.size());
  if (n == 0) return std::nullopt;
  const auto peak_it = std::max_element(signal.begin(), signal.end());  // earliest on ties
  const FrameIndex peak = peak_it - signal.begin();
  if (*peak_it < config.tau) return std::nullopt;

  FrameIndex run_lo = peak;
  while (run_lo > 0 && signal[run_lo - 1] >= config.tau) --run_lo;
  FrameIndex run_hi = peak;
  while (run_hi + 1 < n && signal[run_hi + 1] >= config.tau) ++run_hi;
  if (run_hi - run_lo + 1 < config.min_peak_width) return std::nullopt;

  auto diff = [&](FrameIndex t) { return signal[t + 1] - signal[t]; };

  FrameIndex start = 0;
  if (run_lo > 0) {
    // run_lo > 0 implies peak > 0, so t ranges over a non-empty [0, peak).
    FrameIndex best = 0;
    for (FrameIndex t = 1; t < peak; ++t) {
      if (diff(t) > diff(best)) best = t;
    }
    start = best + 1;
  }
  FrameIndex end = n - 1;
  if (run_hi < n - 1) {
    // run_hi < n - 1 implies peak <= n - 2.
    FrameIndex best = peak;
    for (FrameIndex t = peak + 1; t <= n - 2; ++t) {
      if (diff(t) <= diff(best)) best = t;
    }
    end = best;
  }
  return PeakDetection{class_id, peak, *peak_it, start, end};
}

std::vector<std::vector<double>> filtered_signals(const SceneProbabilityMatrix& matrix,
                                                  const PipelineConfig& config) {
  std::vector<std::vector<double>> out(matrix.classes());
  for (std::size_t c = 0; c < matrix.classes(); ++c) {
    out[c] = median_filter(matrix.column(c), config.median_window);
  }
  return out;
}

std::vector<Prediction> localize_scene(const SceneProbabilityMatrix& matrix,
                                       const PipelineConfig& config) {
  std::vector<Prediction> out;
  for (std::size_t c = 1; c < matrix.classes(); ++c) {
    const auto signal = median_filter(matrix.column(c), config.median_window);
    const auto peak = detect_peak(signal, config, static_cast<ClassId>(c));
    if (!peak) continue;
    out.push_back({matrix.scene_id(), peak->class_id, peak->start_frame, peak->end_frame,
                   peak->peak_value});
  }
  return out;
}

double temporal_iou(const Prediction& a, const Prediction& b) {
  if (a.scene_id != b.scene_id) throw ValidationError("temporal_iou across scenes");
  const FrameIndex inter =
      std::max<FrameIndex>(0, std::min(a.end_frame, b.end_frame) - std::max(a.start_frame, b.start_frame) + 1);
  const FrameIndex uni = a.length() + b.length() - inter;
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

std::vector<Prediction> eliminate_overlaps(std::span<const Prediction> predictions, double o_max) {
  std::vector<std::size_t> order(predictions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const auto& a = predictions[i];
    const auto& b = predictions[j];
    if (a.peak_prob != b.peak_prob) return a.peak_prob > b.peak_prob;
    if (a.class_id != b.class_id) return a.class_id < b.class_id;
    return a.start_frame < b.start_frame;
  });
  std::map<SceneId, std::vector<std::size_t>> kept_by_scene;
  std::vector<bool> keep(predictions.size(), false);
  for (std::size_t i : order) {
    auto& kept = kept_by_scene[predictions[i].scene_id];
    const bool clear = std::all_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return temporal_iou(predictions[i], predictions[k]) <= o_max;
    });
    if (clear) {
      kept.push_back(i);
      keep[i] = true;
    }
  }
  std::vector<Prediction> out;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (keep[i]) out.push_back(predictions[i]);
  }
  return out;
}

std::vector<Prediction> localize_all(std::span<const SceneProbabilityMatrix> matrices,
                                     const PipelineConfig& config, bool eliminate, int threads) {
  std::vector<std::vector<Prediction>> per_scene(matrices.size());
  parallel_for(matrices.size(), threads,
               [&](std::size_t i) { per_scene[i] = localize_scene(matrices[i], config); });
  std::vector<Prediction> out;
  for (auto& p : per_scene) {
    if (eliminate) p = eliminate_overlaps(p, config.o_max);
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

}  // namespace dgl
