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

#include "manifest.hpp"

#include <json.hpp>

#include "dgl/error.hpp"
#include "dgl/io.hpp"

namespace dgl::cli {

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool"] = "dgl";
  j["version"] = DGL_VERSION;
  j["command"] = m.command;
  j["argv"] = m.argv;
  j["seed"] = m.config.pipeline.seed;
  j["threads"] = m.threads;
  j["config"] = to_config_text(m.config);
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  if (!m.extra.empty()) j["extra"] = m.extra;
  auto& timings = j["timings_s"] = nlohmann::ordered_json::array();
  for (const auto& [stage, seconds] : m.timings) timings.push_back({{"stage", stage}, {"seconds", seconds}});
  write_file_atomic(path, j.dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("manifest " + path.string() + ": " + e.what());
  }
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.argv = j.value("argv", std::vector<std::string>{});
    m.threads = j.value("threads", 1);
    m.config = parse_config(j.at("config").get<std::string>());
    m.inputs = j.value("inputs", std::map<std::string, std::string>{});
    m.outputs = j.value("outputs", std::map<std::string, std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("manifest " + path.string() + ": " + e.what());
  }
  return m;
}

}  // namespace dgl::cli
