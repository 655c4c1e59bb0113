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

#include "dgl/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dgl/error.hpp"

namespace dgl {

std::vector<double> SceneProbabilityMatrix::column(std::size_t cls) const {
  std::vector<double> out(frames_);
  for (std::size_t f = 0; f < frames_; ++f) out[f] = data_[f * classes_ + cls];
  return out;
}

void check_distribution(std::span<const double> probs, double tol) {
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw ValidationError("probability out of [0,1]: " + std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw ValidationError("probabilities sum to " + std::to_string(sum));
  }
}

FrameLabelTimeline frame_labels_from_annotations(SceneId scene_id,
                                                 std::span<const AnnotationEvent> events,
                                                 FrameIndex scene_len) {
  if (scene_len < 0) throw ValidationError("negative scene length");
  FrameLabelTimeline timeline{scene_id, std::vector<ClassId>(static_cast<std::size_t>(scene_len), kBackground)};
  std::vector<AnnotationEvent> sorted(events.begin(), events.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.start_frame < b.start_frame; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& e = sorted[i];
    if (e.scene_id != scene_id) {
      throw ValidationError("event of scene " + std::to_string(e.scene_id) +
                            " passed for scene " + std::to_string(scene_id));
    }
    if (e.class_id == kBackground) throw ValidationError("annotation with background class");
    if (e.start_frame > e.end_frame) throw ValidationError("event start after end");
    if (e.start_frame < 0 || e.end_frame >= scene_len) {
      throw ValidationError("event [" + std::to_string(e.start_frame) + ", " +
                            std::to_string(e.end_frame) + "] outside scene of " +
                            std::to_string(scene_len) + " frames");
    }
    if (i > 0 && sorted[i - 1].end_frame >= e.start_frame) {
      throw ValidationError("overlapping events in scene " + std::to_string(scene_id));
    }
    std::fill(timeline.labels.begin() + e.start_frame, timeline.labels.begin() + e.end_frame + 1,
              e.class_id);
  }
  return timeline;
}

std::vector<AnnotationEvent> events_from_timeline(const FrameLabelTimeline& timeline) {
  std::vector<AnnotationEvent> events;
  const auto& labels = timeline.labels;
  std::size_t f = 0;
  while (f < labels.size()) {
    std::size_t g = f;
    while (g + 1 < labels.size() && labels[g + 1] == labels[f]) ++g;
    if (labels[f] != kBackground) {
      events.push_back({timeline.scene_id, labels[f], static_cast<FrameIndex>(f),
                        static_cast<FrameIndex>(g)});
    }
    f = g + 1;
  }
  return events;
}

}  // namespace dgl
