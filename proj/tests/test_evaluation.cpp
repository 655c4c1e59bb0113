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

#include <random>

#include <gtest/gtest.h>

#include "dgl/evaluation.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace dgl {
namespace {

constexpr double kFps = 30.0;

TEST(Match, ToleranceExamples) {
  const std::vector<AnnotationEvent> gt = {{0, 4, 300, 600}};
  const auto hit = match(gt, std::vector<Prediction>{{0, 4, 310, 590, 0.5}}, kFps, 1.0);
  EXPECT_EQ(hit.tp, 1u);
  EXPECT_EQ(hit.fp, 0u);
  EXPECT_EQ(hit.fn, 0u);
  ASSERT_EQ(hit.pairs.size(), 1u);
  EXPECT_EQ(hit.pairs[0], (std::pair<std::size_t, std::size_t>{0, 0}));

  const auto miss = match(gt, std::vector<Prediction>{{0, 4, 340, 590, 0.5}}, kFps, 1.0);
  EXPECT_EQ(miss.tp, 0u);
  EXPECT_EQ(miss.fp, 1u);
  EXPECT_EQ(miss.fn, 1u);

  // Exactly on the tolerance counts.
  EXPECT_EQ(match(gt, std::vector<Prediction>{{0, 4, 330, 570, 0.5}}, kFps, 1.0).tp, 1u);
  // Wrong class or scene never matches.
  EXPECT_EQ(match(gt, std::vector<Prediction>{{0, 5, 300, 600, 0.5}}, kFps, 1.0).tp, 0u);
  EXPECT_EQ(match(gt, std::vector<Prediction>{{1, 4, 300, 600, 0.5}}, kFps, 1.0).tp, 0u);
}

TEST(Match, EmptyInputs) {
  const std::vector<AnnotationEvent> gt = {{0, 1, 0, 10}, {0, 2, 0, 10}, {1, 1, 5, 9}};
  const auto r = match(gt, std::vector<Prediction>{}, kFps, 1.0);
  EXPECT_EQ(r.tp, 0u);
  EXPECT_EQ(r.fp, 0u);
  EXPECT_EQ(r.fn, 3u);
  const auto m = metrics(r);
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.f1, 0.0);
}

TEST(Match, HigherPeakChoosesFirstAndNearestGtWins) {
  const std::vector<AnnotationEvent> gt = {{0, 1, 100, 200}, {0, 1, 110, 210}};
  const std::vector<Prediction> preds = {{0, 1, 105, 205, 0.2}, {0, 1, 111, 209, 0.9}};
  const auto r = match(gt, preds, kFps, 1.0);
  ASSERT_EQ(r.tp, 2u);
  EXPECT_EQ(r.pairs[0], (std::pair<std::size_t, std::size_t>{1, 1}));
  EXPECT_EQ(r.pairs[1], (std::pair<std::size_t, std::size_t>{0, 0}));
}

TEST(Match, ToleranceRoundsToFrames) {
  EXPECT_EQ(tolerance_in_frames(30.0, 1.0), 30);
  EXPECT_EQ(tolerance_in_frames(29.97, 1.0), 30);
  EXPECT_EQ(tolerance_in_frames(25.0, 0.5), 13);
}

TEST(Metrics, HandComputed) {
  const auto m = metrics(MatchResult{2, 1, 1, {}});
  EXPECT_EQ(m.precision, 2.0 / 3.0);
  EXPECT_EQ(m.recall, 2.0 / 3.0);
  EXPECT_NEAR(m.f1, 0.6667, 5e-5);
  const auto perfect = metrics(MatchResult{5, 0, 0, {}});
  EXPECT_EQ(perfect.f1, 1.0);
  const auto skew = metrics(MatchResult{1, 3, 0, {}});
  EXPECT_EQ(skew.precision, 0.25);
  EXPECT_EQ(skew.recall, 1.0);
  EXPECT_EQ(skew.f1, 0.4);
  const auto none = metrics(MatchResult{0, 4, 2, {}});
  EXPECT_EQ(none.f1, 0.0);
}

TEST(Match, CountsAreConsistentAndBoundedByOptimum) {
  std::mt19937_64 rng(77);
  const auto tol = tolerance_in_frames(kFps, 1.0);
  int one_to_one = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto inst = testing::random_match_instance(rng, tol);
    const auto r = match(inst.gts, inst.preds, kFps, 1.0);
    EXPECT_EQ(r.tp + r.fn, inst.gts.size());
    EXPECT_EQ(r.tp + r.fp, inst.preds.size());
    const auto best = oracle::max_matching(inst.gts, inst.preds, tol);
    EXPECT_LE(r.tp, best);
    if (inst.one_to_one) {
      ++one_to_one;
      EXPECT_EQ(r.tp, best);
    }
  }
  EXPECT_GT(one_to_one, 200);
}

TEST(Match, InvariantUnderTranslationAndSceneRelabeling) {
  std::mt19937_64 rng(78);
  const auto tol = tolerance_in_frames(kFps, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    auto inst = testing::random_match_instance(rng, tol);
    const auto base = match(inst.gts, inst.preds, kFps, 1.0);
    for (auto& g : inst.gts) g.start_frame += 1000, g.end_frame += 1000, g.scene_id = 1 - g.scene_id + 10;
    for (auto& p : inst.preds) p.start_frame += 1000, p.end_frame += 1000, p.scene_id = 1 - p.scene_id + 10;
    const auto moved = match(inst.gts, inst.preds, kFps, 1.0);
    EXPECT_EQ(moved.pairs, base.pairs);
  }
}

TEST(Match, RemovingFalsePositiveNeverLowersPrecision) {
  std::mt19937_64 rng(79);
  const auto tol = tolerance_in_frames(kFps, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    auto inst = testing::random_match_instance(rng, tol);
    const auto r = match(inst.gts, inst.preds, kFps, 1.0);
    std::vector<bool> matched(inst.preds.size(), false);
    for (const auto& [g, p] : r.pairs) matched[p] = true;
    for (std::size_t i = 0; i < inst.preds.size(); ++i) {
      if (matched[i]) continue;
      auto fewer = inst.preds;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(i));
      const auto after = match(inst.gts, fewer, kFps, 1.0);
      EXPECT_GE(metrics(after).precision, metrics(r).precision);
      break;
    }
  }
}

TEST(PerClass, SplitsByClass) {
  const std::vector<AnnotationEvent> gt = {{0, 1, 0, 100}, {0, 2, 200, 300}};
  const std::vector<Prediction> preds = {{0, 1, 5, 95, 0.9}, {0, 3, 200, 300, 0.8}};
  const auto pc = per_class_metrics(gt, preds, 4, kFps, 1.0);
  ASSERT_EQ(pc.size(), 3u);
  EXPECT_EQ(pc[0].metrics.f1, 1.0);
  EXPECT_EQ(pc[1].match.fn, 1u);
  EXPECT_EQ(pc[2].match.fp, 1u);
}

}  // namespace
}  // namespace dgl
