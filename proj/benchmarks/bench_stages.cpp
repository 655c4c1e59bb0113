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
#include <vector>

#include <benchmark/benchmark.h>

#include "dgl/classifier.hpp"
#include "dgl/dataset.hpp"
#include "dgl/fusion.hpp"
#include "dgl/localization.hpp"
#include "dgl/smoothing.hpp"

namespace {

using namespace dgl;

std::vector<double> noisy_signal(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(n);
  for (double& v : s) v = u(rng);
  return s;
}

void BM_MedianFilter(benchmark::State& state) {
  const auto s = noisy_signal(static_cast<std::size_t>(state.range(0)));
  const int window = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(median_filter(s, window));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MedianFilter)->Args({9000, 301})->Args({9000, 31})->Args({2000, 301});

void BM_DensityGuidedSmooth(benchmark::State& state) {
  LabelCounts counts{std::vector<int>(18, 0)};
  counts.counts[0] = 40;
  counts.counts[3] = 24;
  for (auto _ : state) benchmark::DoNotOptimize(density_guided_smooth(counts, 5.0));
}
BENCHMARK(BM_DensityGuidedSmooth);

struct Batch {
  MlpParams params;
  std::vector<std::vector<float>> xs;
  std::vector<std::vector<double>> qs;
  std::vector<TrainingSample> samples;
};

Batch make_batch(std::size_t nf, std::size_t batch_size) {
  Batch b;
  Rng rng(2);
  b.params = init_params(nf, 64, 18, rng);
  std::normal_distribution<float> n(0.f, 1.f);
  b.xs.assign(batch_size, std::vector<float>(nf));
  b.qs.assign(batch_size, std::vector<double>(18, 1.0 / 18));
  for (auto& x : b.xs) {
    for (auto& v : x) v = n(rng);
  }
  for (std::size_t i = 0; i < batch_size; ++i) b.samples.push_back({b.xs[i], b.qs[i]});
  return b;
}

void BM_Backward(benchmark::State& state) {
  const auto b = make_batch(static_cast<std::size_t>(state.range(0)), 270);
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(backward(b.params, b.samples, threads));
  state.SetItemsProcessed(state.iterations() * 270);
}
BENCHMARK(BM_Backward)->Args({64, 1})->Args({2304, 1})->Args({2304, 4})->Unit(benchmark::kMillisecond);

void BM_FuseScene(benchmark::State& state) {
  PipelineConfig cfg;
  const FrameIndex scene_len = 9000;
  std::vector<SegmentProbabilities> segs;
  for (ViewId v = 0; v < 3; ++v) {
    for (FrameIndex t = 0; t + cfg.segment_len <= scene_len; ++t) {
      segs.push_back({0, v, t, std::vector<double>(18, 1.0 / 18)});
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(fuse_scene(segs, scene_len, cfg));
}
BENCHMARK(BM_FuseScene)->Unit(benchmark::kMillisecond);

void BM_LocalizeScene(benchmark::State& state) {
  const PipelineConfig cfg;
  SceneProbabilityMatrix m(0, 9000, 18);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t f = 0; f < m.frames(); ++f) {
    double sum = 0.0;
    for (auto& p : m.row(f)) sum += (p = u(rng));
    for (auto& p : m.row(f)) p /= sum;
  }
  for (auto _ : state) benchmark::DoNotOptimize(localize_scene(m, cfg));
}
BENCHMARK(BM_LocalizeScene)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
