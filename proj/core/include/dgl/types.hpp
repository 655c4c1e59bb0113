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
#include <vector>

namespace dgl {

// Class 0 is background ("normal driving").
using ClassId = std::int32_t;
using SceneId = std::uint32_t;
using ViewId = std::uint16_t;
// Frame indices; intervals are inclusive on both ends.
using FrameIndex = std::int64_t;

inline constexpr ClassId kBackground = 0;

struct AnnotationEvent {
  SceneId scene_id = 0;
  ClassId class_id = 0;
  FrameIndex start_frame = 0;
  FrameIndex end_frame = 0;

  FrameIndex length() const { return end_frame - start_frame + 1; }
  friend bool operator==(const AnnotationEvent&, const AnnotationEvent&) = default;
};

struct FrameLabelTimeline {
  SceneId scene_id = 0;
  std::vector<ClassId> labels;

  FrameIndex size() const { return static_cast<FrameIndex>(labels.size()); }
  friend bool operator==(const FrameLabelTimeline&, const FrameLabelTimeline&) = default;
};

struct SegmentFeatureRecord {
  SceneId scene_id = 0;
  ViewId view_id = 0;
  FrameIndex start_frame = 0;
  std::vector<float> features;

  friend bool operator==(const SegmentFeatureRecord&, const SegmentFeatureRecord&) = default;
};

struct SegmentProbabilities {
  SceneId scene_id = 0;
  ViewId view_id = 0;
  FrameIndex start_frame = 0;
  std::vector<double> probs;

  friend bool operator==(const SegmentProbabilities&, const SegmentProbabilities&) = default;
};

// Frames x classes, row-major.
class SceneProbabilityMatrix {
 public:
  SceneProbabilityMatrix() = default;
  SceneProbabilityMatrix(SceneId scene_id, std::size_t frames, std::size_t classes)
      : scene_id_(scene_id), frames_(frames), classes_(classes), data_(frames * classes, 0.0) {}

  SceneId scene_id() const { return scene_id_; }
  std::size_t frames() const { return frames_; }
  std::size_t classes() const { return classes_; }

  std::span<double> row(std::size_t frame) { return {data_.data() + frame * classes_, classes_}; }
  std::span<const double> row(std::size_t frame) const {
    return {data_.data() + frame * classes_, classes_};
  }
  double& at(std::size_t frame, std::size_t cls) { return data_[frame * classes_ + cls]; }
  double at(std::size_t frame, std::size_t cls) const { return data_[frame * classes_ + cls]; }

  // Copy of one class column.
  std::vector<double> column(std::size_t cls) const;

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const SceneProbabilityMatrix&, const SceneProbabilityMatrix&) = default;

 private:
  SceneId scene_id_ = 0;
  std::size_t frames_ = 0;
  std::size_t classes_ = 0;
  std::vector<double> data_;
};

struct Prediction {
  SceneId scene_id = 0;
  ClassId class_id = 0;
  FrameIndex start_frame = 0;
  FrameIndex end_frame = 0;
  double peak_prob = 0.0;

  FrameIndex length() const { return end_frame - start_frame + 1; }
  friend bool operator==(const Prediction&, const Prediction&) = default;
};

// Throws ValidationError if `probs` is not a distribution within `tol`.
void check_distribution(std::span<const double> probs, double tol = 1e-9);

// Per-frame labels from interval annotations of one scene. Frames outside all
// events are background. Throws ValidationError on overlap or out-of-bounds.
FrameLabelTimeline frame_labels_from_annotations(SceneId scene_id,
                                                 std::span<const AnnotationEvent> events,
                                                 FrameIndex scene_len);

// Maximal constant runs of non-background labels, as events.
std::vector<AnnotationEvent> events_from_timeline(const FrameLabelTimeline& timeline);

}  // namespace dgl
