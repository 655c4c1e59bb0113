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
#include <map>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "dgl/config.hpp"
#include "dgl/io.hpp"
#include "dgl/types.hpp"

namespace dgl {

using Rng = std::mt19937_64;

// Stream tags for derive_seed(); every stage draws from its own stream.
enum class SeedStream : std::uint64_t {
  kPrototypes = 1,
  kScene = 2,
  kTrainSplit = 3,
  kTestSplit = 4,
  kTraining = 5,
  kInit = 6,
};

// Independent stream seed for (seed, stream, index); splitmix64 finalizer.
std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream, std::uint64_t index = 0);

using TimelineMap = std::map<SceneId, FrameLabelTimeline>;

// Segment references (indices into the feature record list) pooled by
// (majority class, view).
class TrainingIndex {
 public:
  TrainingIndex(int n_classes, int n_views);

  int n_classes() const { return n_classes_; }
  int n_views() const { return n_views_; }

  void add(ClassId cls, ViewId view, std::size_t record);
  std::span<const std::size_t> pool(ClassId cls, ViewId view) const;
  std::size_t size() const;

 private:
  int n_classes_;
  int n_views_;
  std::vector<std::vector<std::size_t>> pools_;
};

TrainingIndex build_index(std::span<const SegmentFeatureRecord> features,
                          const TimelineMap& timelines, const PipelineConfig& config);

struct BalancedBatch {
  std::vector<std::size_t> records;
  // (class, view) cells that had nothing to contribute.
  std::vector<std::pair<ClassId, ViewId>> empty_cells;
};

// Exactly k draws from every non-empty (class, view) pool: without
// replacement when the pool holds at least k segments, with replacement
// otherwise. Throws ValidationError if every pool is empty or k < 1.
BalancedBatch sample_batch(const TrainingIndex& index, int k, Rng& rng);

struct SyntheticData {
  FeatureStoreHeader header;
  std::vector<SegmentFeatureRecord> features;
  std::vector<AnnotationEvent> annotations;
  TimelineMap timelines;
};

// Class prototype vectors, one per class, fixed by spec.prototype_seed.
std::vector<std::vector<double>> synthetic_prototypes(const SyntheticSpec& spec,
                                                      const PipelineConfig& config);

// Scenes in which every non-background class occurs once, in random order,
// separated by background gaps. A frame's clean feature is its class
// prototype (blended linearly across `ramp_len` frames at event edges); each
// view adds independent Gaussian noise per frame and a segment's feature is
// the mean of its frames. Scenes are generated in parallel on `threads`
// workers; the result does not depend on the worker count.
SyntheticData generate_synthetic(const SyntheticSpec& spec, const PipelineConfig& config,
                                 int threads = 1);

// Frame count of every scene present in a feature store: last start + T_c.
std::map<SceneId, FrameIndex> scene_lengths(std::span<const SegmentFeatureRecord> features,
                                            int segment_len);

// Timelines for every scene in `lengths` from a flat annotation list.
TimelineMap timelines_from_annotations(std::span<const AnnotationEvent> events,
                                       const std::map<SceneId, FrameIndex>& lengths);

}  // namespace dgl
