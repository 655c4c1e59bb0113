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

#include "dgl/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dgl/error.hpp"

namespace dgl {

int LabelCounts::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

LabelCounts count_labels(const FrameLabelTimeline& timeline, FrameIndex start_frame,
                         int segment_len, int n_classes) {
  if (segment_len < 1) throw ValidationError("segment length must be >= 1");
  if (start_frame < 0 || start_frame + segment_len > timeline.size()) {
    throw ValidationError("window [" + std::to_string(start_frame) + ", " +
                          std::to_string(start_frame + segment_len - 1) + "] outside scene " +
                          std::to_string(timeline.scene_id) + " of " +
                          std::to_string(timeline.size()) + " frames");
  }
  LabelCounts out{std::vector<int>(static_cast<std::size_t>(n_classes), 0)};
  const auto first = timeline.labels.begin() + start_frame;
  for (auto it = first; it != first + segment_len; ++it) {
    if (*it < 0 || *it >= n_classes) {
      throw ValidationError("frame label " + std::to_string(*it) + " outside [0, N_c)");
    }
    ++out.counts[static_cast<std::size_t>(*it)];
  }
  return out;
}

TargetDistribution classic_smooth(ClassId label, double epsilon, int n_classes) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in [0, 1)");
  if (n_classes < 2 || label < 0 || label >= n_classes) {
    throw ValidationError("label outside [0, N_c)");
  }
  const double floor = epsilon / n_classes;
  TargetDistribution out{std::vector<double>(static_cast<std::size_t>(n_classes), floor)};
  out.probs[static_cast<std::size_t>(label)] = (1.0 - epsilon) + floor;
  return out;
}

TargetDistribution density_guided_smooth(const LabelCounts& counts, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be positive");
  if (counts.counts.empty()) throw ValidationError("empty label counts");
  const int top = *std::max_element(counts.counts.begin(), counts.counts.end());
  TargetDistribution out{std::vector<double>(counts.counts.size())};
  double sum = 0.0;
  for (std::size_t k = 0; k < counts.counts.size(); ++k) {
    if (counts.counts[k] < 0) throw ValidationError("negative label count");
    // Integer difference first: exact, and keeps equal counts bit-identical.
    out.probs[k] = std::exp(static_cast<double>(counts.counts[k] - top) / beta);
    sum += out.probs[k];
  }
  for (double& p : out.probs) p /= sum;
  return out;
}

ClassId majority_label(const LabelCounts& counts) {
  const auto it = std::max_element(counts.counts.begin(), counts.counts.end());
  return static_cast<ClassId>(it - counts.counts.begin());
}

TargetDistribution make_target(const LabelCounts& counts, const PipelineConfig& config) {
  switch (config.target_mode) {
    case TargetMode::kDensityGuided:
      return density_guided_smooth(counts, config.beta);
    case TargetMode::kClassic:
      return classic_smooth(majority_label(counts), config.epsilon,
                            static_cast<int>(counts.counts.size()));
  }
  throw ValidationError("unknown target mode");
}

}  // namespace dgl
