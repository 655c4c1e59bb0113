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

#include "dgl/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <string>
#include <system_error>
#include <type_traits>
#include <utility>
#include <vector>

#include "dgl/error.hpp"
#include "dgl/io.hpp"

namespace dgl {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ValidationError("config key '" + std::string(key) + "': cannot parse '" +
                          std::string(text) + "'");
  }
  return value;
}

struct Field {
  std::string_view key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename Section, typename T>
Field make_field(std::string_view key, Section RunConfig::*section, T Section::*member) {
  return Field{
      key,
      [key, section, member](RunConfig& c, std::string_view v) {
        (c.*section).*member = parse_number<T>(key, v);
      },
      [section, member](const RunConfig& c) {
        if constexpr (std::is_floating_point_v<T>) {
          return format_double((c.*section).*member);
        } else {
          return std::to_string((c.*section).*member);
        }
      }};
}

const std::vector<Field>& fields() {
  using P = PipelineConfig;
  using S = SyntheticSpec;
  constexpr auto p = &RunConfig::pipeline;
  constexpr auto s = &RunConfig::synth;
  static const std::vector<Field> table = {
      make_field(std::string_view("n_classes"), p, &P::n_classes),
      make_field(std::string_view("segment_len"), p, &P::segment_len),
      make_field(std::string_view("stride"), p, &P::stride),
      make_field(std::string_view("feature_dim"), p, &P::feature_dim),
      make_field(std::string_view("fps"), p, &P::fps),
      Field{"target_mode",
            [](RunConfig& c, std::string_view v) { c.pipeline.target_mode = parse_target_mode(v); },
            [](const RunConfig& c) { return std::string(to_string(c.pipeline.target_mode)); }},
      make_field(std::string_view("beta"), p, &P::beta),
      make_field(std::string_view("epsilon"), p, &P::epsilon),
      make_field(std::string_view("tau"), p, &P::tau),
      make_field(std::string_view("min_peak_width"), p, &P::min_peak_width),
      make_field(std::string_view("median_window"), p, &P::median_window),
      make_field(std::string_view("o_max"), p, &P::o_max),
      make_field(std::string_view("tolerance_s"), p, &P::tolerance_s),
      make_field(std::string_view("learning_rate"), p, &P::learning_rate),
      make_field(std::string_view("weight_decay"), p, &P::weight_decay),
      make_field(std::string_view("hidden_dim"), p, &P::hidden_dim),
      make_field(std::string_view("samples_per_class_per_view"), p, &P::samples_per_class_per_view),
      make_field(std::string_view("epochs"), p, &P::epochs),
      make_field(std::string_view("batches_per_epoch"), p, &P::batches_per_epoch),
      make_field(std::string_view("seed"), p, &P::seed),
      make_field(std::string_view("synth.scenes"), s, &S::n_scenes),
      make_field(std::string_view("synth.train_scenes"), s, &S::n_train_scenes),
      make_field(std::string_view("synth.scene_len"), s, &S::scene_len),
      make_field(std::string_view("synth.views"), s, &S::n_views),
      make_field(std::string_view("synth.noise_sigma"), s, &S::noise_sigma),
      make_field(std::string_view("synth.prototype_scale"), s, &S::prototype_scale),
      make_field(std::string_view("synth.event_len_min"), s, &S::event_len_min),
      make_field(std::string_view("synth.event_len_max"), s, &S::event_len_max),
      make_field(std::string_view("synth.min_gap"), s, &S::min_gap),
      make_field(std::string_view("synth.ramp_len"), s, &S::ramp_len),
      make_field(std::string_view("synth.seed"), s, &S::seed),
      make_field(std::string_view("synth.prototype_seed"), s, &S::prototype_seed),
  };
  return table;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("invalid config: " + what);
}

}  // namespace

std::string_view to_string(TargetMode mode) {
  switch (mode) {
    case TargetMode::kDensityGuided:
      return "density";
    case TargetMode::kClassic:
      return "classic";
  }
  return "?";
}

TargetMode parse_target_mode(std::string_view text) {
  if (text == "density") return TargetMode::kDensityGuided;
  if (text == "classic") return TargetMode::kClassic;
  throw ValidationError("unknown target_mode '" + std::string(text) +
                        "' (expected density or classic)");
}

void PipelineConfig::validate() const {
  require(n_classes >= 2, "n_classes must be >= 2");
  require(segment_len >= 1, "segment_len must be >= 1");
  require(stride >= 1, "stride must be >= 1");
  require(feature_dim >= 1, "feature_dim must be >= 1");
  require(fps > 0.0 && std::isfinite(fps), "fps must be positive");
  require(beta > 0.0 && std::isfinite(beta), "beta must be positive");
  require(epsilon >= 0.0 && epsilon < 1.0, "epsilon must lie in [0, 1)");
  require(tau >= 0.0 && tau <= 1.0, "tau must lie in [0, 1]");
  require(min_peak_width >= 1, "min_peak_width must be >= 1");
  require(median_window >= 1 && median_window % 2 == 1, "median_window must be odd and >= 1");
  require(o_max >= 0.0 && o_max <= 1.0, "o_max must lie in [0, 1]");
  require(tolerance_s >= 0.0, "tolerance_s must be >= 0");
  require(learning_rate >= 0.0 && std::isfinite(learning_rate), "learning_rate must be >= 0");
  require(weight_decay >= 0.0 && std::isfinite(weight_decay), "weight_decay must be >= 0");
  require(hidden_dim >= 1, "hidden_dim must be >= 1");
  require(samples_per_class_per_view >= 1, "samples_per_class_per_view must be >= 1");
  require(epochs >= 0, "epochs must be >= 0");
  require(batches_per_epoch >= 1, "batches_per_epoch must be >= 1");
}

std::int64_t PipelineConfig::tolerance_frames() const {
  return std::llround(tolerance_s * fps);
}

void SyntheticSpec::validate() const {
  require(n_scenes >= 0, "synth.scenes must be >= 0");
  require(n_train_scenes >= 0, "synth.train_scenes must be >= 0");
  require(scene_len >= 1, "synth.scene_len must be >= 1");
  require(n_views >= 1 && n_views <= 65536, "synth.views must be in [1, 65536]");
  require(noise_sigma >= 0.0, "synth.noise_sigma must be >= 0");
  require(prototype_scale > 0.0, "synth.prototype_scale must be > 0");
  require(event_len_min >= 1, "synth.event_len_min must be >= 1");
  require(event_len_max >= event_len_min, "synth.event_len_max must be >= event_len_min");
  require(min_gap >= 1, "synth.min_gap must be >= 1");
  require(ramp_len >= 0, "synth.ramp_len must be >= 0");
}

void apply_config_entry(RunConfig& config, std::string_view key, std::string_view value) {
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.set(config, trim(value));
      return;
    }
  }
  throw ValidationError("unknown config key '" + std::string(key) + "'");
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_config_entry(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  return parse_config(read_text_file(path), std::move(base));
}

std::string to_config_text(const RunConfig& config) {
  std::string out;
  for (const auto& f : fields()) {
    out.append(f.key);
    out.push_back('=');
    out.append(f.get(config));
    out.push_back('\n');
  }
  return out;
}

}  // namespace dgl
