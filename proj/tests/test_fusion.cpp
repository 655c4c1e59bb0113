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

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "dgl/error.hpp"
#include "dgl/fusion.hpp"

namespace dgl {
namespace {

PipelineConfig small_config(int segment_len, int stride = 1) {
  PipelineConfig cfg;
  cfg.n_classes = 2;
  cfg.segment_len = segment_len;
  cfg.stride = stride;
  return cfg;
}

TEST(Fusion, TwoSegmentHandExample) {
  const std::vector<SegmentProbabilities> segs = {{0, 0, 0, {0.2, 0.8}}, {0, 0, 1, {0.4, 0.6}}};
  const auto m = fuse_scene(segs, 3, small_config(2));
  ASSERT_EQ(m.frames(), 3u);
  EXPECT_EQ(m.at(0, 0), 0.2);
  // 0.3 has no exact binary form; the double mean lands within one ulp.
  EXPECT_NEAR(m.at(1, 0), 0.3, 1e-16);
  EXPECT_NEAR(m.at(1, 1), 0.7, 1e-16);
  EXPECT_EQ(m.at(2, 1), 0.6);
}

TEST(Fusion, IdenticalSegmentsReproduceTheirDistribution) {
  std::vector<SegmentProbabilities> segs;
  for (ViewId v = 0; v < 3; ++v) {
    for (FrameIndex t = 0; t <= 20; ++t) segs.push_back({1, v, t, {0.25, 0.75}});
  }
  const auto m = fuse_scene(segs, 24, small_config(4));
  for (std::size_t f = 0; f < m.frames(); ++f) {
    EXPECT_DOUBLE_EQ(m.at(f, 0), 0.25);
    EXPECT_DOUBLE_EQ(m.at(f, 1), 0.75);
  }
}

TEST(Fusion, AveragesAcrossViews) {
  const std::vector<SegmentProbabilities> segs = {{0, 0, 0, {0.1, 0.9}}, {0, 1, 0, {0.5, 0.5}}};
  const auto m = fuse_scene(segs, 1, small_config(1));
  EXPECT_DOUBLE_EQ(m.at(0, 0), 0.3);
  EXPECT_DOUBLE_EQ(m.at(0, 1), 0.7);
}

TEST(Fusion, Errors) {
  const auto cfg = small_config(2);
  const std::vector<SegmentProbabilities> gap = {{0, 0, 0, {0.5, 0.5}}, {0, 0, 3, {0.5, 0.5}}};
  EXPECT_THROW(fuse_scene(gap, 5, cfg), ValidationError);  // frame 2 uncovered
  const std::vector<SegmentProbabilities> mixed = {{0, 0, 0, {0.5, 0.5}}, {1, 0, 1, {0.5, 0.5}}};
  EXPECT_THROW(fuse_scene(mixed, 3, cfg), ValidationError);
  const std::vector<SegmentProbabilities> past_end = {{0, 0, 0, {0.5, 0.5}}, {0, 0, 2, {0.5, 0.5}}};
  EXPECT_THROW(fuse_scene(past_end, 3, cfg), ValidationError);
  const std::vector<SegmentProbabilities> off_grid = {{0, 0, 0, {0.5, 0.5}}, {0, 0, 1, {0.5, 0.5}}};
  EXPECT_THROW(fuse_scene(off_grid, 3, small_config(1, 2)), ValidationError);
}

struct RandomScene {
  std::vector<SegmentProbabilities> segs;
  FrameIndex scene_len = 0;
};

RandomScene random_scene(std::mt19937_64& rng, const PipelineConfig& cfg, int views) {
  RandomScene s;
  const auto n_segments = std::uniform_int_distribution<FrameIndex>(1, 40)(rng);
  s.scene_len = (n_segments - 1) * cfg.stride + cfg.segment_len;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (ViewId v = 0; v < views; ++v) {
    for (FrameIndex i = 0; i < n_segments; ++i) {
      std::vector<double> p(static_cast<std::size_t>(cfg.n_classes));
      double sum = 0.0;
      for (double& x : p) sum += (x = u(rng));
      for (double& x : p) x /= sum;
      s.segs.push_back({7, v, i * cfg.stride, std::move(p)});
    }
  }
  return s;
}

TEST(Fusion, RowsNormalizedAndConvex) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    PipelineConfig cfg;
    cfg.n_classes = std::uniform_int_distribution<int>(2, 6)(rng);
    cfg.segment_len = std::uniform_int_distribution<int>(1, 9)(rng);
    cfg.stride = std::uniform_int_distribution<int>(1, cfg.segment_len)(rng);
    const int views = std::uniform_int_distribution<int>(1, 4)(rng);
    const auto scene = random_scene(rng, cfg, views);
    const auto m = fuse_scene(scene.segs, scene.scene_len, cfg);
    for (std::size_t f = 0; f < m.frames(); ++f) {
      const auto row = m.row(f);
      EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-9);
      for (std::size_t c = 0; c < m.classes(); ++c) {
        double lo = 1.0, hi = 0.0;
        for (const auto& s : scene.segs) {
          const auto fi = static_cast<FrameIndex>(f);
          if (s.start_frame <= fi && fi < s.start_frame + cfg.segment_len) {
            lo = std::min(lo, s.probs[c]);
            hi = std::max(hi, s.probs[c]);
          }
        }
        EXPECT_GE(row[c], lo - 1e-15);
        EXPECT_LE(row[c], hi + 1e-15);
      }
    }
  }
}

TEST(Fusion, InvariantToRecordAndViewOrder) {
  std::mt19937_64 rng(4);
  PipelineConfig cfg;
  cfg.n_classes = 4;
  cfg.segment_len = 5;
  const auto scene = random_scene(rng, cfg, 3);
  const auto base = fuse_scene(scene.segs, scene.scene_len, cfg);

  auto shuffled = scene.segs;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  EXPECT_EQ(fuse_scene(shuffled, scene.scene_len, cfg), base);

  auto relabeled = scene.segs;
  for (auto& s : relabeled) s.view_id = static_cast<ViewId>(2 - s.view_id);
  const auto m = fuse_scene(relabeled, scene.scene_len, cfg);
  for (std::size_t i = 0; i < m.data().size(); ++i) EXPECT_NEAR(m.data()[i], base.data()[i], 1e-15);
}

TEST(Fusion, FuseAllMatchesPerSceneAcrossThreads) {
  std::mt19937_64 rng(8);
  PipelineConfig cfg;
  cfg.n_classes = 3;
  cfg.segment_len = 4;
  std::vector<SegmentProbabilities> all;
  std::map<SceneId, FrameIndex> lengths;
  std::vector<SceneProbabilityMatrix> expected;
  for (SceneId id = 0; id < 5; ++id) {
    auto scene = random_scene(rng, cfg, 2);
    for (auto& s : scene.segs) s.scene_id = id;
    lengths[id] = scene.scene_len;
    expected.push_back(fuse_scene(scene.segs, scene.scene_len, cfg));
    all.insert(all.end(), scene.segs.begin(), scene.segs.end());
  }
  std::shuffle(all.begin(), all.end(), rng);
  EXPECT_EQ(fuse_all(all, lengths, cfg, 1), expected);
  EXPECT_EQ(fuse_all(all, lengths, cfg, 4), expected);
}

}  // namespace
}  // namespace dgl
