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

#include "dgl/fusion.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "dgl/error.hpp"
#include "dgl/parallel.hpp"

namespace dgl {

SceneProbabilityMatrix fuse_scene(std::span<const SegmentProbabilities> segments,
                                  FrameIndex scene_len, const PipelineConfig& config) {
  config.validate();
  if (segments.empty()) throw ValidationError("no segments to fuse");
  if (scene_len < 1) throw ValidationError("scene length must be >= 1");
  const SceneId scene = segments.front().scene_id;
  const auto nc = static_cast<std::size_t>(config.n_classes);
  const FrameIndex seg_len = config.segment_len;

  std::vector<std::size_t> order(segments.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (const auto& s : segments) {
    if (s.scene_id != scene) throw ValidationError("fuse_scene got records of several scenes");
    if (s.probs.size() != nc) throw ValidationError("segment probability vector is not of size N_c");
    if (s.start_frame < 0 || s.start_frame + seg_len > scene_len) {
      throw ValidationError("segment at " + std::to_string(s.start_frame) + " with T_c=" +
                            std::to_string(seg_len) + " leaves scene " + std::to_string(scene) +
                            " of " + std::to_string(scene_len) + " frames");
    }
    if (s.start_frame % config.stride != 0) {
      throw ValidationError("segment start " + std::to_string(s.start_frame) +
                            " is off the stride grid");
    }
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = segments[a];
    const auto& y = segments[b];
    return x.start_frame != y.start_frame ? x.start_frame < y.start_frame : x.view_id < y.view_id;
  });

  SceneProbabilityMatrix out(scene, static_cast<std::size_t>(scene_len), nc);
  std::vector<std::size_t> coverage(static_cast<std::size_t>(scene_len), 0);
  for (std::size_t idx : order) {
    const auto& s = segments[idx];
    for (FrameIndex f = s.start_frame; f < s.start_frame + seg_len; ++f) {
      auto row = out.row(static_cast<std::size_t>(f));
      for (std::size_t c = 0; c < nc; ++c) row[c] += s.probs[c];
      ++coverage[static_cast<std::size_t>(f)];
    }
  }
  for (std::size_t f = 0; f < coverage.size(); ++f) {
    if (coverage[f] == 0) {
      throw ValidationError("frame " + std::to_string(f) + " of scene " + std::to_string(scene) +
                            " is covered by no segment");
    }
    const double n = static_cast<double>(coverage[f]);
    for (double& v : out.row(f)) v /= n;
  }
  return out;
}

std::vector<SceneProbabilityMatrix> fuse_all(std::span<const SegmentProbabilities> segments,
                                             const std::map<SceneId, FrameIndex>& scene_lengths,
                                             const PipelineConfig& config, int threads) {
  std::map<SceneId, std::vector<SegmentProbabilities>> by_scene;
  for (const auto& s : segments) by_scene[s.scene_id].push_back(s);
  std::vector<SceneId> scenes;
  for (const auto& [id, _] : by_scene) {
    if (!scene_lengths.contains(id)) {
      throw ValidationError("no frame count known for scene " + std::to_string(id));
    }
    scenes.push_back(id);
  }
  std::vector<SceneProbabilityMatrix> out(scenes.size());
  parallel_for(scenes.size(), threads, [&](std::size_t i) {
    out[i] = fuse_scene(by_scene.at(scenes[i]), scene_lengths.at(scenes[i]), config);
  });
  return out;
}

}  // namespace dgl
