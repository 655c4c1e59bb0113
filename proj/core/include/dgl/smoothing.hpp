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

#include <span>
#include <vector>

#include "dgl/config.hpp"
#include "dgl/types.hpp"

namespace dgl {

// Per-class frame counts inside one segment window; sums to the window length.
struct LabelCounts {
  std::vector<int> counts;

  int total() const;
  friend bool operator==(const LabelCounts&, const LabelCounts&) = default;
};

// Smoothed training target over N_c classes.
struct TargetDistribution {
  std::vector<double> probs;
};

// Counts labels of frames [start_frame, start_frame + segment_len - 1].
// Throws ValidationError if the window leaves the timeline.
LabelCounts count_labels(const FrameLabelTimeline& timeline, FrameIndex start_frame,
                         int segment_len, int n_classes);

// Uniform label smoothing: (1 - epsilon) * onehot(label) + epsilon / n_classes.
TargetDistribution classic_smooth(ClassId label, double epsilon, int n_classes);

// Temperature softmax over frame counts: exp(n_k / beta) / sum_j exp(n_j / beta).
// Evaluated with the maximum count subtracted, so tiny beta cannot overflow.
TargetDistribution density_guided_smooth(const LabelCounts& counts, double beta);

// Class with the most frames; ties go to the smallest class id.
ClassId majority_label(const LabelCounts& counts);

// Target selected by config.target_mode.
TargetDistribution make_target(const LabelCounts& counts, const PipelineConfig& config);

}  // namespace dgl
