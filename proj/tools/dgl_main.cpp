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

// dgl: command-line front end for the temporal action localization pipeline.
//
//   dgl synth       generate a synthetic feature store + annotations
//   dgl train       fit the segment classifier
//   dgl infer       segment class probabilities from a feature store
//   dgl fuse        late-fuse segment probabilities into frame probabilities
//   dgl localize    peaks -> predictions (with overlap elimination)
//   dgl eval        precision / recall / F1 under the boundary tolerance
//   dgl pipeline    all of the above on freshly generated data
//   dgl smooth-demo density-guided target table

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dgl/classifier.hpp"
#include "dgl/config.hpp"
#include "dgl/dataset.hpp"
#include "dgl/error.hpp"
#include "dgl/evaluation.hpp"
#include "dgl/fusion.hpp"
#include "dgl/io.hpp"
#include "dgl/localization.hpp"
#include "dgl/pipeline.hpp"
#include "dgl/smoothing.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;

namespace dgl::cli {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Options every subcommand understands. Later sources win: defaults, then
// --config, then --set, then the dedicated flags.
struct CommonOptions {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<double> beta;
  std::optional<double> tau;
  std::optional<double> o_max;
  std::optional<double> fps;
  int threads = 1;

  // Keys given explicitly by any source.
  std::set<std::string> explicit_keys;

  void add_to(CLI::App& app) {
    app.add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
    app.add_option("--set", sets, "Override one config key (key=value); repeatable");
    app.add_option("--seed", seed, "Run seed");
    app.add_option("--beta", beta, "Temperature of the density-guided targets");
    app.add_option("--tau", tau, "Peak height threshold");
    app.add_option("--omax", o_max, "IoU threshold of overlap elimination");
    app.add_option("--fps", fps, "Frames per second (boundary tolerance conversion)");
    app.add_option("--threads", threads, "Worker threads; results do not depend on it")
        ->check(CLI::Range(1, 1024));
  }

  RunConfig resolve(RunConfig base = {}) {
    RunConfig cfg = std::move(base);
    auto note_keys = [&](std::string_view text) {
      std::istringstream lines{std::string(text)};
      for (std::string line; std::getline(lines, line);) {
        const auto eq = line.find('=');
        const auto first = line.find_first_not_of(" \t");
        if (eq == std::string::npos || first == std::string::npos || line[first] == '#') continue;
        auto key = line.substr(first, eq - first);
        key.erase(key.find_last_not_of(" \t") + 1);
        explicit_keys.insert(key);
      }
    };
    if (!config_path.empty()) {
      const auto text = read_text_file(config_path);
      cfg = parse_config(text, cfg);
      note_keys(text);
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + s + "'");
      apply_config_entry(cfg, s.substr(0, eq), s.substr(eq + 1));
      note_keys(s);
    }
    if (seed) {
      cfg = with_run_seed(cfg, *seed);
      explicit_keys.insert("seed");
    }
    if (beta) cfg.pipeline.beta = *beta;
    if (tau) cfg.pipeline.tau = *tau;
    if (o_max) cfg.pipeline.o_max = *o_max;
    if (fps) cfg.pipeline.fps = *fps;
    cfg.pipeline.validate();
    cfg.synth.validate();
    return cfg;
  }

  // Adopts the store's N_f and T_c unless the user asked for different ones.
  void adopt_store_dims(PipelineConfig& cfg, const FeatureStoreHeader& header) const {
    auto adopt = [&](int& value, std::uint32_t from_store, const char* key) {
      if (explicit_keys.contains(key) && value != static_cast<int>(from_store)) {
        throw ValidationError(std::string("config conflict: ") + key + "=" + std::to_string(value) +
                              " but the feature store has " + std::to_string(from_store));
      }
      value = static_cast<int>(from_store);
    };
    adopt(cfg.feature_dim, header.feature_dim, "feature_dim");
    adopt(cfg.segment_len, header.segment_len, "segment_len");
  }
};

struct SynthOptions {
  std::optional<int> scenes;
  std::optional<int> train_scenes;
  std::optional<std::int64_t> scene_len;
  std::optional<int> views;
  std::optional<double> noise;
  std::optional<std::int64_t> ramp;
  std::optional<std::uint64_t> prototype_seed;

  void add_to(CLI::App& app, bool with_train_scenes) {
    app.add_option("--scenes", scenes, "Number of scenes");
    if (with_train_scenes) app.add_option("--train-scenes", train_scenes, "Scenes in the training split");
    app.add_option("--scene-len", scene_len, "Frames per scene");
    app.add_option("--views", views, "Camera views per scene");
    app.add_option("--noise", noise, "Per-frame feature noise sigma");
    app.add_option("--ramp", ramp, "Frames over which features blend at event edges");
    app.add_option("--prototype-seed", prototype_seed, "Seed of the class prototypes (default: run seed)");
  }

  void apply(SyntheticSpec& s) const {
    if (scenes) s.n_scenes = *scenes;
    if (train_scenes) s.n_train_scenes = *train_scenes;
    if (scene_len) s.scene_len = *scene_len;
    if (views) s.n_views = *views;
    if (noise) s.noise_sigma = *noise;
    if (ramp) s.ramp_len = *ramp;
    if (prototype_seed) s.prototype_seed = *prototype_seed;
    s.validate();
  }
};

RunManifest make_manifest(const std::string& command, const RunConfig& cfg, int threads,
                          const std::vector<std::string>& argv) {
  RunManifest m;
  m.command = command;
  m.argv = argv;
  m.config = cfg;
  m.threads = threads;
  return m;
}

fs::path manifest_path_for(const fs::path& output) {
  auto p = output;
  p += ".manifest.json";
  return p;
}

void log_epoch(const EpochStats& s) {
  spdlog::info("epoch {:3d}  loss {:.5f}  acc {:.4f}  ({:.2f}s)", s.epoch, s.mean_loss, s.accuracy,
               s.seconds);
}

// ---------------------------------------------------------------------------

int run_synth(CommonOptions& common, const SynthOptions& synth_opts, const fs::path& out_features,
              const fs::path& out_annotations, const std::vector<std::string>& argv) {
  auto cfg = common.resolve();
  synth_opts.apply(cfg.synth);
  const auto t0 = Clock::now();
  const auto data = generate_synthetic(cfg.synth, cfg.pipeline, common.threads);
  write_feature_store(out_features, data.header, data.features);
  write_annotations(out_annotations, data.annotations);
  spdlog::info("wrote {} segment records and {} events", data.features.size(), data.annotations.size());

  auto m = make_manifest("synth", cfg, common.threads, argv);
  m.outputs = {{"features", out_features.string()}, {"annotations", out_annotations.string()}};
  m.timings = {{"synth", seconds_since(t0)}};
  write_manifest(manifest_path_for(out_features), m);
  return 0;
}

int run_train(CommonOptions& common, const fs::path& features_path, const fs::path& annotations_path,
              const fs::path& out_model, const std::vector<std::string>& argv) {
  auto cfg = common.resolve();
  const auto t0 = Clock::now();
  const auto store = read_feature_store(features_path);
  common.adopt_store_dims(cfg.pipeline, store.header);
  const auto events = read_annotations(annotations_path, cfg.pipeline.n_classes);
  const auto timelines =
      timelines_from_annotations(events, scene_lengths(store.records, cfg.pipeline.segment_len));
  const auto result = train(store.records, timelines, cfg.pipeline, common.threads, log_epoch);
  for (const auto& [cls, view] : result.report.empty_cells) {
    spdlog::warn("no training segments for class {} in view {}", cls, view);
  }
  write_checkpoint(out_model, result.params);

  auto m = make_manifest("train", cfg, common.threads, argv);
  m.inputs = {{"features", features_path.string()}, {"annotations", annotations_path.string()}};
  m.outputs = {{"model", out_model.string()}};
  if (!result.report.epochs.empty()) {
    const auto& last = result.report.epochs.back();
    m.extra = {{"final_loss", format_double(last.mean_loss)},
               {"final_accuracy", format_double(last.accuracy)}};
  }
  m.timings = {{"train", seconds_since(t0)}};
  write_manifest(manifest_path_for(out_model), m);
  return 0;
}

int run_infer(CommonOptions& common, const fs::path& model_path, const fs::path& features_path,
              const fs::path& out, const std::vector<std::string>& argv) {
  auto cfg = common.resolve();
  const auto t0 = Clock::now();
  const auto params = read_checkpoint(model_path);
  const auto store = read_feature_store(features_path);
  common.adopt_store_dims(cfg.pipeline, store.header);
  if (params.n_features() != store.header.feature_dim) {
    throw ValidationError("model expects " + std::to_string(params.n_features()) +
                          " features, store has " + std::to_string(store.header.feature_dim));
  }
  const auto segments = infer(params, store.records, common.threads);
  write_file_atomic(out, format_segment_probabilities(segments));

  auto m = make_manifest("infer", cfg, common.threads, argv);
  m.inputs = {{"model", model_path.string()}, {"features", features_path.string()}};
  m.outputs = {{"segment_probs", out.string()}};
  m.timings = {{"infer", seconds_since(t0)}};
  write_manifest(manifest_path_for(out), m);
  return 0;
}

int run_fuse(CommonOptions& common, const fs::path& in, const fs::path& out,
             const std::vector<std::string>& argv) {
  auto cfg = common.resolve();
  const auto t0 = Clock::now();
  const auto segments = parse_segment_probabilities(read_text_file(in), cfg.pipeline.n_classes);
  std::map<SceneId, FrameIndex> lengths;
  for (const auto& s : segments) {
    auto& len = lengths[s.scene_id];
    len = std::max(len, s.start_frame + cfg.pipeline.segment_len);
  }
  const auto matrices = fuse_all(segments, lengths, cfg.pipeline, common.threads);
  write_file_atomic(out, format_scene_matrices(matrices));

  auto m = make_manifest("fuse", cfg, common.threads, argv);
  m.inputs = {{"segment_probs", in.string()}};
  m.outputs = {{"scene_probs", out.string()}};
  m.timings = {{"fuse", seconds_since(t0)}};
  write_manifest(manifest_path_for(out), m);
  return 0;
}

std::string format_signals(const SceneProbabilityMatrix& matrix, const PipelineConfig& cfg) {
  const auto signals = filtered_signals(matrix, cfg);
  std::string out;
  for (std::size_t f = 0; f < matrix.frames(); ++f) {
    out += std::to_string(matrix.scene_id()) + ',' + std::to_string(f);
    for (const auto& s : signals) {
      out.push_back(',');
      out += format_double(s[f]);
    }
    out.push_back('\n');
  }
  return out;
}

int run_localize(CommonOptions& common, const fs::path& in, const fs::path& out,
                 const std::string& signals_path, bool no_eop, const std::vector<std::string>& argv) {
  auto cfg = common.resolve();
  const auto t0 = Clock::now();
  const auto matrices = parse_scene_matrices(read_text_file(in), cfg.pipeline.n_classes);
  const auto predictions = localize_all(matrices, cfg.pipeline, !no_eop, common.threads);
  write_predictions(out, predictions);
  if (!signals_path.empty()) {
    std::string text = "# scene_id,frame,filtered p_0..p_{N_c-1}\n";
    for (const auto& m : matrices) text += format_signals(m, cfg.pipeline);
    write_file_atomic(signals_path, text);
  }
  spdlog::info("{} predictions over {} scenes", predictions.size(), matrices.size());

  auto m = make_manifest("localize", cfg, common.threads, argv);
  m.inputs = {{"scene_probs", in.string()}};
  m.outputs = {{"predictions", out.string()}};
  if (!signals_path.empty()) m.outputs["signals"] = signals_path;
  m.extra = {{"eop", no_eop ? "off" : "on"}};
  m.timings = {{"localize", seconds_since(t0)}};
  write_manifest(manifest_path_for(out), m);
  return 0;
}

void print_metrics(std::ostream& os, const MatchResult& r, const Metrics& m) {
  os << "tp=" << r.tp << "\nfp=" << r.fp << "\nfn=" << r.fn
     << "\nprecision=" << format_double(m.precision) << "\nrecall=" << format_double(m.recall)
     << "\nf1=" << format_double(m.f1) << "\n";
}

int run_eval(CommonOptions& common, const fs::path& annotations_path, const fs::path& predictions_path,
             bool per_class) {
  auto cfg = common.resolve();
  const auto gts = read_annotations(annotations_path, cfg.pipeline.n_classes);
  const auto preds = read_predictions(predictions_path, cfg.pipeline.n_classes);
  const auto result = match(gts, preds, cfg.pipeline.fps, cfg.pipeline.tolerance_s);
  print_metrics(std::cout, result, metrics(result));
  if (per_class) {
    std::cout << "# class_id,tp,fp,fn,precision,recall,f1\n";
    for (const auto& c :
         per_class_metrics(gts, preds, cfg.pipeline.n_classes, cfg.pipeline.fps, cfg.pipeline.tolerance_s)) {
      std::cout << c.class_id << ',' << c.match.tp << ',' << c.match.fp << ',' << c.match.fn << ','
                << format_double(c.metrics.precision) << ',' << format_double(c.metrics.recall) << ','
                << format_double(c.metrics.f1) << '\n';
    }
  }
  return 0;
}

int run_pipeline_cmd(CommonOptions& common, const SynthOptions& synth_opts, const fs::path& out_dir,
                     const std::string& replay, bool no_eop, bool keep, const std::vector<std::string>& argv) {
  RunConfig cfg;
  if (!replay.empty()) {
    const auto manifest = read_manifest(replay);
    if (manifest.command != "pipeline") {
      throw ValidationError("--replay needs a pipeline manifest, got '" + manifest.command + "'");
    }
    cfg = manifest.config;
    if (const auto it = manifest.extra.find("eop"); it != manifest.extra.end()) no_eop = it->second == "off";
    spdlog::info("replaying {} (seed {})", replay, cfg.pipeline.seed);
  } else {
    cfg = common.resolve();
    synth_opts.apply(cfg.synth);
  }
  PipelineOptions options;
  options.threads = common.threads;
  options.eliminate_overlaps = !no_eop;
  options.keep_intermediates = keep;
  options.on_epoch = log_epoch;
  const auto report = run_pipeline(cfg, out_dir, options);
  print_metrics(std::cout, report.match, report.metrics);

  auto m = make_manifest("pipeline", cfg, common.threads, argv);
  for (const auto& [name, path] : report.outputs) m.outputs[name] = path.string();
  m.extra = {{"eop", no_eop ? "off" : "on"}, {"f1", format_double(report.metrics.f1)}};
  m.timings = report.timings;
  write_manifest(out_dir / "manifest.json", m);
  for (const auto& [stage, seconds] : report.timings) spdlog::info("{:<10} {:.2f}s", stage, seconds);
  return 0;
}

std::vector<int> parse_counts(const std::string& text) {
  std::vector<int> counts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      counts.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError("--counts expects non-negative integers, got '" + item + "'");
    }
  }
  if (counts.empty()) throw ValidationError("--counts is empty");
  return counts;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int run_smooth_demo(const std::vector<double>& betas, const std::string& counts_text, int n_classes,
                    int segment_len, int step) {
  if (!counts_text.empty()) {
    // One vector of counts: print the target for each beta, one row each.
    const LabelCounts counts{parse_counts(counts_text)};
    for (double beta : betas) {
      const auto q = density_guided_smooth(counts, beta);
      std::string row;
      for (std::size_t k = 0; k < q.probs.size(); ++k) row += (k ? "," : "") + fixed6(q.probs[k]);
      std::cout << row << '\n';
    }
    return 0;
  }
  if (n_classes < 2 || segment_len < 1 || step < 1) throw ValidationError("bad smooth-demo dimensions");
  // Every composition of segment_len into n_classes counts on a grid of `step`.
  std::cout << "beta";
  for (int k = 0; k < n_classes; ++k) std::cout << ",n_" << k;
  for (int k = 0; k < n_classes; ++k) std::cout << ",q_" << k;
  std::cout << '\n';
  std::vector<int> c(static_cast<std::size_t>(n_classes), 0);
  auto emit = [&](auto&& self, int k, int remaining) -> void {
    if (k == n_classes - 1) {
      c[k] = remaining;
      for (double beta : betas) {
        const auto q = density_guided_smooth(LabelCounts{c}, beta);
        std::cout << format_double(beta);
        for (int v : c) std::cout << ',' << v;
        for (double p : q.probs) std::cout << ',' << fixed6(p);
        std::cout << '\n';
      }
      return;
    }
    for (int v = remaining; v >= 0; v -= step) {
      c[k] = v;
      self(self, k + 1, remaining - v);
    }
  };
  emit(emit, 0, segment_len);
  return 0;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("dgl");
  logger->set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("DGL_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"; only honour it when asked for.
    if (level != spdlog::level::off || std::string_view(env) == "off") spdlog::set_level(level);
  }
}

}  // namespace
}  // namespace dgl::cli

int main(int argc, char** argv) {
  using namespace dgl::cli;
  configure_logging();
  const std::vector<std::string> args(argv, argv + argc);

  CLI::App app{"Temporal action localization with density-guided label smoothing"};
  app.require_subcommand(1);
  app.set_version_flag("--version", DGL_VERSION);

  CommonOptions common;
  SynthOptions synth_opts;

  fs::path out_features, out_annotations, features, annotations, out_model, model, in, out;
  fs::path predictions, out_dir = "dgl_run";
  std::string signals, replay;
  bool no_eop = false, per_class = false, keep = false;
  std::vector<double> betas;
  std::string counts;
  int demo_classes = 3, demo_len = 64, demo_step = 16;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic feature store and annotations");
  common.add_to(*synth);
  synth_opts.add_to(*synth, false);
  synth->add_option("--out-features", out_features, "Feature store to write")->required();
  synth->add_option("--out-annotations", out_annotations, "Annotations to write")->required();

  auto* train = app.add_subcommand("train", "Train the segment classifier");
  common.add_to(*train);
  train->add_option("--features", features, "Feature store")->required()->check(CLI::ExistingFile);
  train->add_option("--annotations", annotations, "Annotations")->required()->check(CLI::ExistingFile);
  train->add_option("--out", out_model, "Checkpoint to write")->required();

  auto* inf = app.add_subcommand("infer", "Segment class probabilities");
  common.add_to(*inf);
  inf->add_option("--model", model, "Checkpoint")->required()->check(CLI::ExistingFile);
  inf->add_option("--features", features, "Feature store")->required()->check(CLI::ExistingFile);
  inf->add_option("--out", out, "Segment probabilities to write")->required();

  auto* fuse = app.add_subcommand("fuse", "Fuse segment probabilities into scene probabilities");
  common.add_to(*fuse);
  fuse->add_option("--in", in, "Segment probabilities")->required()->check(CLI::ExistingFile);
  fuse->add_option("--out", out, "Scene matrices to write")->required();

  auto* loc = app.add_subcommand("localize", "Detect actions in scene probabilities");
  common.add_to(*loc);
  loc->add_option("--in", in, "Scene matrices")->required()->check(CLI::ExistingFile);
  loc->add_option("--out", out, "Predictions to write")->required();
  loc->add_option("--emit-signals", signals, "Also write the median-filtered class signals");
  loc->add_flag("--no-eop", no_eop, "Skip overlap elimination");

  auto* ev = app.add_subcommand("eval", "Score predictions against annotations");
  common.add_to(*ev);
  ev->add_option("--annotations", annotations, "Ground truth")->required()->check(CLI::ExistingFile);
  ev->add_option("--predictions", predictions, "Predictions")->required()->check(CLI::ExistingFile);
  ev->add_flag("--per-class", per_class, "Print a per-class table");

  auto* pipe = app.add_subcommand("pipeline", "synth -> train -> infer -> fuse -> localize -> eval");
  common.add_to(*pipe);
  synth_opts.add_to(*pipe, true);
  pipe->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  pipe->add_option("--replay", replay, "Re-run the configuration recorded in a pipeline manifest")
      ->check(CLI::ExistingFile);
  pipe->add_flag("--no-eop", no_eop, "Skip overlap elimination");
  pipe->add_flag("--keep-intermediates", keep, "Also write segment and scene probabilities");

  auto* demo = app.add_subcommand("smooth-demo", "Print density-guided targets");
  demo->add_option("--beta", betas, "Temperature(s); default 10 20 30");
  demo->add_option("--counts", counts, "Comma-separated frame counts, e.g. 64,0,0");
  demo->add_option("--classes", demo_classes, "Classes in the table mode")->capture_default_str();
  demo->add_option("--segment-len", demo_len, "Frames per segment in the table mode")->capture_default_str();
  demo->add_option("--step", demo_step, "Count grid step in the table mode")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (synth->parsed()) return run_synth(common, synth_opts, out_features, out_annotations, args);
    if (train->parsed()) return run_train(common, features, annotations, out_model, args);
    if (inf->parsed()) return run_infer(common, model, features, out, args);
    if (fuse->parsed()) return run_fuse(common, in, out, args);
    if (loc->parsed()) return run_localize(common, in, out, signals, no_eop, args);
    if (ev->parsed()) return run_eval(common, annotations, predictions, per_class);
    if (pipe->parsed()) return run_pipeline_cmd(common, synth_opts, out_dir, replay, no_eop, keep, args);
    if (demo->parsed()) {
      if (betas.empty()) betas = {10.0, 20.0, 30.0};
      return run_smooth_demo(betas, counts, demo_classes, demo_len, demo_step);
    }
  } catch (const dgl::ValidationError& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 1;
}
