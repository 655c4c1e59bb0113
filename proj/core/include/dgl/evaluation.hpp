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
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dgl/types.hpp"

namespace dgl {

struct MatchResult {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  // (ground-truth index, prediction index)
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Boundary tolerance in frames for (fps, tolerance_s): round(tolerance_s * fps).
std::int64_t tolerance_in_frames(double fps, double tolerance_s);

// One-to-one matching. A pair is eligible when scene and class agree and both
// boundaries are within the tolerance. Predictions are visited by descending
// peak_prob (ties: earlier start, then input order) and each takes the
// eligible unmatched ground truth with the smallest |ds| + |de| (ties: lower
// index).
MatchResult match(std::span<const AnnotationEvent> ground_truth,
                  std::span<const Prediction> predictions, double fps, double tolerance_s);

Metrics metrics(const MatchResult& result);

struct ClassMetrics {
  ClassId class_id = 0;
  MatchResult match;
  Metrics metrics;
};

// match() restricted to each class 1..n_classes-1.
std::vector<ClassMetrics> per_class_metrics(std::span<const AnnotationEvent> ground_truth,
                                            std::span<const Prediction> predictions,
                                            int n_classes, double fps, double tolerance_s);

}  // namespace dgl
