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

#include <optional>
#include <span>
#include <vector>

#include "dgl/config.hpp"
#include "dgl/types.hpp"

namespace dgl {

struct PeakDetection {
  ClassId class_id = 0;
  FrameIndex peak_frame = 0;
  double peak_value = 0.0;
  FrameIndex start_frame = 0;
  FrameIndex end_frame = 0;

  friend bool operator==(const PeakDetection&, const PeakDetection&) = default;
};

// Running median over an edge-replicated odd window; output length equals
// input length. Throws ValidationError for an even or non-positive window.
std::vector<double> median_filter(std::span<const double> signal, int window);

// Highest peak of a (filtered) signal, gated by height tau and by the length
// of the tau-superlevel run that contains it. Start and end are placed at the
// steepest rise before and steepest fall after the peak.
std::optional<PeakDetection> detect_peak(std::span<const double> signal, const PipelineConfig& config,
                                         ClassId class_id = 0);

// Median-filtered column of every class, background included (index 0).
std::vector<std::vector<double>> filtered_signals(const SceneProbabilityMatrix& matrix,
                                                  const PipelineConfig& config);

// At most one prediction per non-background class, ordered by class id.
std::vector<Prediction> localize_scene(const SceneProbabilityMatrix& matrix,
                                       const PipelineConfig& config);

// Inclusive-interval IoU. Throws ValidationError across scenes.
double temporal_iou(const Prediction& a, const Prediction& b);

// Greedy temporal NMS within each scene: visit by descending peak (ties:
// smaller class id, then earlier start) and keep a prediction iff its IoU
// with every kept one is <= o_max. Output preserves input order.
std::vector<Prediction> eliminate_overlaps(std::span<const Prediction> predictions, double o_max);

// localize_scene over every matrix, optionally followed by eliminate_overlaps.
std::vector<Prediction> localize_all(std::span<const SceneProbabilityMatrix> matrices,
                                     const PipelineConfig& config, bool eliminate = true,
                                     int threads = 1);

}  // namespace dgl
