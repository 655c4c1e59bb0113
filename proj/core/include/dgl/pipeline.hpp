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

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dgl/classifier.hpp"
#include "dgl/config.hpp"
#include "dgl/evaluation.hpp"

namespace dgl {

struct PipelineOptions {
  int threads = 1;
  bool eliminate_overlaps = true;
  // Also write segment probabilities and fused scene matrices.
  bool keep_intermediates = false;
  EpochCallback on_epoch;
};

struct PipelineReport {
  MatchResult match;
  Metrics metrics;
  TrainReport train;
  std::vector<Prediction> predictions;
  // Stage name -> wall seconds, in execution order.
  std::vector<std::pair<std::string, double>> timings;
  // Output name -> path.
  std::map<std::string, std::filesystem::path> outputs;
};


// Sets every seed of the run (generator, prototypes, training) to `seed`.
// Stages draw from distinct derive_seed() streams of it.
RunConfig with_run_seed(RunConfig config, std::uint64_t seed);

// synth -> train -> infer -> fuse -> localize -> eval. With an empty
// `out_dir` nothing is written.
PipelineReport run_pipeline(const RunConfig& config, const std::filesystem::path& out_dir,
                            const PipelineOptions& options = {});

}  // namespace dgl
