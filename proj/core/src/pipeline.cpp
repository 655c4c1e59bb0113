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

#include "dgl/pipeline.hpp"

#include <chrono>
#include <string>

#include "dgl/dataset.hpp"
#include "dgl/fusion.hpp"
#include "dgl/io.hpp"
#include "dgl/localization.hpp"

namespace dgl {
namespace {

class StageTimer {
 public:
  explicit StageTimer(std::vector<std::pair<std::string, double>>& sink) : sink_(sink) {}

  template <typename Fn>
  auto run(std::string name, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    struct Record {
      StageTimer* self;
      std::string name;
      std::chrono::steady_clock::time_point t0;
      ~Record() {
        self->sink_.emplace_back(
            std::move(name),
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      }
    } record{this, std::move(name), t0};
    return fn();
  }

 private:
  std::vector<std::pair<std::string, double>>& sink_;
};

}  // namespace

RunConfig with_run_seed(RunConfig config, std::uint64_t seed) {
  config.pipeline.seed = seed;
  config.synth.seed = seed;
  config.synth.prototype_seed = seed;
  return config;
}

PipelineReport run_pipeline(const RunConfig& config, const std::filesystem::path& out_dir,
                            const PipelineOptions& options) {
  const auto& pc = config.pipeline;
  pc.validate();
  config.synth.validate();
  const bool write = !out_dir.empty();
  if (write) std::filesystem::create_directories(out_dir);

  PipelineReport report;
  StageTimer timer(report.timings);
  auto output = [&](const std::string& name, const char* file) {
    return report.outputs[name] = out_dir / file;
  };

  SyntheticSpec train_spec = config.synth;
  train_spec.n_scenes = config.synth.n_train_scenes;
  train_spec.seed = derive_seed(config.synth.seed, SeedStream::kTrainSplit);
  SyntheticSpec test_spec = config.synth;
  test_spec.seed = derive_seed(config.synth.seed, SeedStream::kTestSplit);

  const auto train_data =
      timer.run("synth", [&] { return generate_synthetic(train_spec, pc, options.threads); });
  const auto test_data =
      timer.run("synth-test", [&] { return generate_synthetic(test_spec, pc, options.threads); });
  if (write) {
    write_feature_store(output("train_features", "train_features.dgf"), train_data.header,
                        train_data.features);
    write_annotations(output("train_annotations", "train_annotations.csv"), train_data.annotations);
    write_feature_store(output("test_features", "test_features.dgf"), test_data.header,
                        test_data.features);
    write_annotations(output("test_annotations", "test_annotations.csv"), test_data.annotations);
  }

  const auto trained = timer.run("train", [&] {
    return train(train_data.features, train_data.timelines, pc, options.threads, options.on_epoch);
  });
  report.train = trained.report;
  if (write) write_checkpoint(output("model", "model.dgm"), trained.params);

  const auto segments =
      timer.run("infer", [&] { return infer(trained.params, test_data.features, options.threads); });
  if (write && options.keep_intermediates) {
    write_file_atomic(output("segment_probs", "segment_probs.csv"),
                      format_segment_probabilities(segments));
  }

  const auto matrices = timer.run("fuse", [&] {
    return fuse_all(segments, scene_lengths(test_data.features, pc.segment_len), pc, options.threads);
  });
  if (write && options.keep_intermediates) {
    write_file_atomic(output("scene_probs", "scene_probs.csv"), format_scene_matrices(matrices));
  }

  report.predictions = timer.run("localize", [&] {
    return localize_all(matrices, pc, options.eliminate_overlaps, options.threads);
  });
  if (write) write_predictions(output("predictions", "predictions.csv"), report.predictions);

  timer.run("eval", [&] {
    report.match = match(test_data.annotations, report.predictions, pc.fps, pc.tolerance_s);
    report.metrics = metrics(report.match);
    return 0;
  });
  if (write) {
    const std::string text = "tp=" + std::to_string(report.match.tp) + "\nfp=" +
                             std::to_string(report.match.fp) + "\nfn=" +
                             std::to_string(report.match.fn) +
                             "\nprecision=" + format_double(report.metrics.precision) +
                             "\nrecall=" + format_double(report.metrics.recall) +
                             "\nf1=" + format_double(report.metrics.f1) + "\n";
    write_file_atomic(output("metrics", "metrics.txt"), text);
  }
  return report;
}

}  // namespace dgl
