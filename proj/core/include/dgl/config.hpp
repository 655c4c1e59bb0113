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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace dgl {

// Which training target is built from a segment's frame labels.
enum class TargetMode {
  kDensityGuided,  // temperature softmax over per-class frame counts
  kClassic,        // uniform label smoothing of the majority label (epsilon=0 gives hard labels)
};

std::string_view to_string(TargetMode mode);
TargetMode parse_target_mode(std::string_view text);

struct PipelineConfig {
  int n_classes = 18;
  int segment_len = 64;  // frames per segment
  int stride = 1;
  int feature_dim = 2304;
  double fps = 30.0;

  // Targets.
  TargetMode target_mode = TargetMode::kDensityGuided;
  double beta = 5.0;
  double epsilon = 0.1;

  // Localization.
  double tau = 0.05;
  int min_peak_width = 200;
  int median_window = 301;
  double o_max = 0.5;

  // Evaluation.
  double tolerance_s = 1.0;

  // Classifier and optimizer.
  double learning_rate = 5e-5;
  double weight_decay = 5e-4;
  int hidden_dim = 64;
  int samples_per_class_per_view = 5;
  int epochs = 20;
  int batches_per_epoch = 50;

  std::uint64_t seed = 0;

  // Throws ValidationError naming the first violated invariant.
  void validate() const;

  // Boundary tolerance in frames, round(tolerance_s * fps).
  std::int64_t tolerance_frames() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

// Parameters of the synthetic scene generator that stands in for the backbone.
struct SyntheticSpec {
  int n_scenes = 5;
  int n_train_scenes = 5;  // used by the end-to-end pipeline only
  std::int64_t scene_len = 9000;
  int n_views = 3;
  double noise_sigma = 1.0;       // per-frame, per-dimension
  double prototype_scale = 1.0;   // class prototypes ~ N(0, scale^2)
  std::int64_t event_len_min = 300;
  std::int64_t event_len_max = 420;
  std::int64_t min_gap = 1;
  std::int64_t ramp_len = 0;      // 0: features switch class instantly at event edges
  std::uint64_t seed = 0;
  std::uint64_t prototype_seed = 0;

  void validate() const;

  friend bool operator==(const SyntheticSpec&, const SyntheticSpec&) = default;
};

// A config file may set both pipeline keys and generator keys (prefixed
// "synth.").
struct RunConfig {
  PipelineConfig pipeline;
  SyntheticSpec synth;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Applies one key=value assignment. Unknown keys and unparsable values throw
// ValidationError.
void apply_config_entry(RunConfig& config, std::string_view key, std::string_view value);

// Parses "key=value" lines on top of `base`. Blank lines and lines starting
// with '#' are ignored.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

// Every key, one per line, in a form parse_config reads back to an equal value.
std::string to_config_text(const RunConfig& config);

}  // namespace dgl
