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

#include "dgl/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dgl/error.hpp"
#include "dgl/parallel.hpp"
#include "dgl/smoothing.hpp"

namespace dgl {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct SceneOutput {
  std::vector<SegmentFeatureRecord> features;
  std::vector<AnnotationEvent> events;
  FrameLabelTimeline timeline;
};

// Events of one scene: every non-background class once, random order and
// lengths, random background gaps of at least min_gap between events.
std::vector<AnnotationEvent> place_events(SceneId scene, const SyntheticSpec& spec, int n_classes,
                                          Rng& rng) {
  std::vector<ClassId> order(static_cast<std::size_t>(n_classes - 1));
  std::iota(order.begin(), order.end(), 1);
  std::shuffle(order.begin(), order.end(), rng);

  std::uniform_int_distribution<std::int64_t> len_dist(spec.event_len_min, spec.event_len_max);
  std::vector<std::int64_t> lengths(order.size());
  for (auto& l : lengths) l = len_dist(rng);

  const std::int64_t occupied = std::accumulate(lengths.begin(), lengths.end(), std::int64_t{0});
  const std::int64_t inner_gaps = static_cast<std::int64_t>(order.size()) - 1;
  const std::int64_t extra = spec.scene_len - occupied - inner_gaps * spec.min_gap;
  if (extra < 0) {
    throw ValidationError("synth.scene_len " + std::to_string(spec.scene_len) +
                          " cannot hold " + std::to_string(order.size()) +
                          " events with the drawn lengths (needs " +
                          std::to_string(occupied + inner_gaps * spec.min_gap) + ")");
  }
  // Split `extra` free frames over the leading gap, inner gaps and trailing gap.
  std::uniform_int_distribution<std::int64_t> cut_dist(0, extra);
  std::vector<std::int64_t> cuts(order.size());
  for (auto& c : cuts) c = cut_dist(rng);
  std::sort(cuts.begin(), cuts.end());

  std::vector<AnnotationEvent> events;
  std::int64_t cursor = 0;
  std::int64_t prev_cut = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    cursor += cuts[i] - prev_cut + (i > 0 ? spec.min_gap : 0);
    prev_cut = cuts[i];
    events.push_back({scene, order[i], cursor, cursor + lengths[i] - 1});
    cursor += lengths[i];
  }
  return events;
}

// Per-frame class mixing weights (frames x classes). Without ramps each row is
// one-hot at the frame label.
std::vector<double> frame_weights(const FrameLabelTimeline& timeline,
                                  std::span<const AnnotationEvent> events, std::int64_t ramp,
                                  int n_classes) {
  const auto frames = static_cast<std::size_t>(timeline.size());
  const auto nc = static_cast<std::size_t>(n_classes);
  std::vector<double> w(frames * nc, 0.0);
  if (ramp == 0) {
    for (std::size_t f = 0; f < frames; ++f) w[f * nc + static_cast<std::size_t>(timeline.labels[f])] = 1.0;
    return w;
  }
  const double r = static_cast<double>(ramp);
  std::vector<double> active(frames, 0.0);
  for (const auto& e : events) {
    const std::int64_t lo = std::max<std::int64_t>(0, e.start_frame - ramp);
    const std::int64_t hi = std::min<std::int64_t>(timeline.size() - 1, e.end_frame + ramp);
    for (std::int64_t f = lo; f <= hi; ++f) {
      const double rise = (static_cast<double>(f) - (e.start_frame - 0.5)) / r + 0.5;
      const double fall = ((e.end_frame + 0.5) - static_cast<double>(f)) / r + 0.5;
      const double a = std::clamp(std::min(rise, fall), 0.0, 1.0);
      w[static_cast<std::size_t>(f) * nc + static_cast<std::size_t>(e.class_id)] += a;
      active[static_cast<std::size_t>(f)] += a;
    }
  }
  for (std::size_t f = 0; f < frames; ++f) {
    auto* row = &w[f * nc];
    if (active[f] > 1.0) {
      for (std::size_t c = 1; c < nc; ++c) row[c] /= active[f];
      row[0] = 0.0;
    } else {
      row[0] = 1.0 - active[f];
    }
  }
  return w;
}

SceneOutput generate_scene(SceneId scene, const SyntheticSpec& spec, const PipelineConfig& config,
                           const std::vector<std::vector<double>>& prototypes) {
  const std::uint64_t scene_seed = derive_seed(spec.seed, SeedStream::kScene, scene);
  Rng rng(scene_seed);
  SceneOutput out;
  out.events = place_events(scene, spec, config.n_classes, rng);
  out.timeline = frame_labels_from_annotations(scene, out.events, spec.scene_len);

  const auto nc = static_cast<std::size_t>(config.n_classes);
  const auto nf = static_cast<std::size_t>(config.feature_dim);
  const auto seg = static_cast<std::int64_t>(config.segment_len);
  if (spec.scene_len < seg) throw ValidationError("synth.scene_len shorter than segment_len");

  const auto weights = frame_weights(out.timeline, out.events, spec.ramp_len, config.n_classes);

  // Clean (noise-free) feature of every segment start.
  std::vector<std::int64_t> starts;
  for (std::int64_t t = 0; t + seg <= spec.scene_len; t += config.stride) starts.push_back(t);
  std::vector<std::vector<double>> clean(starts.size(), std::vector<double>(nf, 0.0));
  std::vector<double> mix(nc);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    std::fill(mix.begin(), mix.end(), 0.0);
    for (std::int64_t f = starts[i]; f < starts[i] + seg; ++f) {
      const auto* row = &weights[static_cast<std::size_t>(f) * nc];
      for (std::size_t c = 0; c < nc; ++c) mix[c] += row[c];
    }
    for (std::size_t c = 0; c < nc; ++c) {
      if (mix[c] == 0.0) continue;
      const double share = mix[c] / static_cast<double>(seg);
      for (std::size_t d = 0; d < nf; ++d) clean[i][d] += share * prototypes[c][d];
    }
  }

  out.features.reserve(starts.size() * static_cast<std::size_t>(spec.n_views));
  for (int view = 0; view < spec.n_views; ++view) {
    Rng noise_rng(derive_seed(scene_seed, SeedStream::kScene, static_cast<std::uint64_t>(view) + 1));
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    const bool noisy = spec.noise_sigma > 0.0;

    // Ring of the last `seg` per-frame noise vectors and their running sum.
    std::vector<double> ring(noisy ? static_cast<std::size_t>(seg) * nf : 0);
    std::vector<double> window_sum(nf, 0.0);
    std::int64_t generated = 0;
    auto advance_to = [&](std::int64_t end_frame) {
      for (; generated < end_frame; ++generated) {
        auto* slot = &ring[static_cast<std::size_t>(generated % seg) * nf];
        for (std::size_t d = 0; d < nf; ++d) {
          if (generated >= seg) window_sum[d] -= slot[d];
          slot[d] = noise(noise_rng);
          window_sum[d] += slot[d];
        }
      }
    };

    for (std::size_t i = 0; i < starts.size(); ++i) {
      SegmentFeatureRecord r;
      r.scene_id = scene;
      r.view_id = static_cast<ViewId>(view);
      r.start_frame = starts[i];
      r.features.resize(nf);
      if (noisy) {
        // Stride > 1 skips frames; the ring still sees every frame in order.
        advance_to(starts[i] + seg);
        for (std::size_t d = 0; d < nf; ++d) {
          r.features[d] = static_cast<float>(clean[i][d] + window_sum[d] / static_cast<double>(seg));
        }
      } else {
        for (std::size_t d = 0; d < nf; ++d) r.features[d] = static_cast<float>(clean[i][d]);
      }
      out.features.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream, std::uint64_t index) {
  std::uint64_t x = splitmix64(seed);
  x = splitmix64(x ^ static_cast<std::uint64_t>(stream));
  return splitmix64(x ^ index);
}

TrainingIndex::TrainingIndex(int n_classes, int n_views)
    : n_classes_(n_classes), n_views_(n_views),
      pools_(static_cast<std::size_t>(n_classes) * static_cast<std::size_t>(n_views)) {
  if (n_classes < 1 || n_views < 1) throw ValidationError("training index needs classes and views");
}

void TrainingIndex::add(ClassId cls, ViewId view, std::size_t record) {
  if (cls < 0 || cls >= n_classes_ || view >= n_views_) {
    throw ValidationError("(class, view) outside training index");
  }
  pools_[static_cast<std::size_t>(cls) * static_cast<std::size_t>(n_views_) + view].push_back(record);
}

std::span<const std::size_t> TrainingIndex::pool(ClassId cls, ViewId view) const {
  return pools_.at(static_cast<std::size_t>(cls) * static_cast<std::size_t>(n_views_) + view);
}

std::size_t TrainingIndex::size() const {
  std::size_t n = 0;
  for (const auto& p : pools_) n += p.size();
  return n;
}

TrainingIndex build_index(std::span<const SegmentFeatureRecord> features,
                          const TimelineMap& timelines, const PipelineConfig& config) {
  int n_views = 1;
  for (const auto& r : features) n_views = std::max(n_views, static_cast<int>(r.view_id) + 1);
  TrainingIndex index(config.n_classes, n_views);
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& r = features[i];
    const auto it = timelines.find(r.scene_id);
    if (it == timelines.end()) {
      throw ValidationError("no frame labels for scene " + std::to_string(r.scene_id));
    }
    const auto counts = count_labels(it->second, r.start_frame, config.segment_len, config.n_classes);
    index.add(majority_label(counts), r.view_id, i);
  }
  return index;
}

BalancedBatch sample_batch(const TrainingIndex& index, int k, Rng& rng) {
  if (k < 1) throw ValidationError("samples per (class, view) must be >= 1");
  BalancedBatch batch;
  std::vector<std::size_t> scratch;
  for (ClassId c = 0; c < index.n_classes(); ++c) {
    for (int v = 0; v < index.n_views(); ++v) {
      const auto pool = index.pool(c, static_cast<ViewId>(v));
      if (pool.empty()) {
        batch.empty_cells.emplace_back(c, static_cast<ViewId>(v));
        continue;
      }
      const auto kk = static_cast<std::size_t>(k);
      if (pool.size() < kk) {
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        for (std::size_t j = 0; j < kk; ++j) batch.records.push_back(pool[pick(rng)]);
        continue;
      }
      // Partial Fisher-Yates over positions, undone afterwards via the scratch copy.
      scratch.assign(pool.begin(), pool.end());
      for (std::size_t j = 0; j < kk; ++j) {
        std::uniform_int_distribution<std::size_t> pick(j, scratch.size() - 1);
        std::swap(scratch[j], scratch[pick(rng)]);
        batch.records.push_back(scratch[j]);
      }
    }
  }
  if (batch.records.empty()) throw ValidationError("every (class, view) pool is empty");
  return batch;
}

std::vector<std::vector<double>> synthetic_prototypes(const SyntheticSpec& spec,
                                                      const PipelineConfig& config) {
  Rng rng(derive_seed(spec.prototype_seed, SeedStream::kPrototypes));
  std::normal_distribution<double> dist(0.0, spec.prototype_scale);
  std::vector<std::vector<double>> protos(static_cast<std::size_t>(config.n_classes),
                                          std::vector<double>(static_cast<std::size_t>(config.feature_dim)));
  for (auto& p : protos) {
    for (auto& x : p) x = dist(rng);
  }
  return protos;
}

SyntheticData generate_synthetic(const SyntheticSpec& spec, const PipelineConfig& config,
                                 int threads) {
  config.validate();
  spec.validate();
  const auto prototypes = synthetic_prototypes(spec, config);

  std::vector<SceneOutput> scenes(static_cast<std::size_t>(spec.n_scenes));
  parallel_for(scenes.size(), threads, [&](std::size_t s) {
    scenes[s] = generate_scene(static_cast<SceneId>(s), spec, config, prototypes);
  });

  SyntheticData data;
  data.header = {1, static_cast<std::uint32_t>(config.feature_dim),
                 static_cast<std::uint32_t>(config.segment_len)};
  for (auto& s : scenes) {
    std::move(s.features.begin(), s.features.end(), std::back_inserter(data.features));
    data.annotations.insert(data.annotations.end(), s.events.begin(), s.events.end());
    const auto id = s.timeline.scene_id;
    data.timelines.emplace(id, std::move(s.timeline));
  }
  return data;
}

std::map<SceneId, FrameIndex> scene_lengths(std::span<const SegmentFeatureRecord> features,
                                            int segment_len) {
  std::map<SceneId, FrameIndex> out;
  for (const auto& r : features) {
    auto& len = out[r.scene_id];
    len = std::max(len, r.start_frame + segment_len);
  }
  return out;
}

TimelineMap timelines_from_annotations(std::span<const AnnotationEvent> events,
                                       const std::map<SceneId, FrameIndex>& lengths) {
  std::map<SceneId, std::vector<AnnotationEvent>> by_scene;
  for (const auto& e : events) {
    if (!lengths.contains(e.scene_id)) {
      throw ValidationError("annotation for scene " + std::to_string(e.scene_id) +
                            " which has no features");
    }
    by_scene[e.scene_id].push_back(e);
  }
  TimelineMap out;
  for (const auto& [scene, len] : lengths) {
    const auto it = by_scene.find(scene);
    const std::span<const AnnotationEvent> scene_events =
        it == by_scene.end() ? std::span<const AnnotationEvent>{} : std::span(it->second);
    out.emplace(scene, frame_labels_from_annotations(scene, scene_events, len));
  }
  return out;
}

}  // namespace dgl
