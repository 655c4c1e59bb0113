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

#include <map>
#include <span>
#include <vector>

#include "dgl/config.hpp"
#include "dgl/types.hpp"

namespace dgl {

// Frame-level scene probabilities: row f is the flat mean, over every
// (view, segment) pair whose window [t, t + T_c - 1] contains f, of that
// segment's class probabilities. Segments are accumulated in (start, view)
// order regardless of input order.
//
// Throws ValidationError if records mix scenes, a window leaves the scene,
// a start is off the stride grid, or some frame is covered by no segment.
SceneProbabilityMatrix fuse_scene(std::span<const SegmentProbabilities> segments,
                                  FrameIndex scene_len, const PipelineConfig& config);

// Groups by scene and fuses each one; output ordered by scene id.
std::vector<SceneProbabilityMatrix> fuse_all(std::span<const SegmentProbabilities> segments,
                                             const std::map<SceneId, FrameIndex>& scene_lengths,
                                             const PipelineConfig& config, int threads = 1);

}  // namespace dgl
