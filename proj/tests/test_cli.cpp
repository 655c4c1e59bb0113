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

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "dgl/io.hpp"

namespace dgl {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int exit_code = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(DGL_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) r.out += buf.data();
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  fs::path dir;

  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() / (std::string("dgl_cli_") + info->name() + "_" +
                                       std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string p(const std::string& name) const { return (dir / name).string(); }
};

TEST_F(CliTest, SmoothDemoPrintsTargets) {
  const auto r = run_cli("smooth-demo --beta 10 --counts 64,0,0");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "0.996688,0.001656,0.001656\n");
  const auto multi = run_cli("smooth-demo --beta 10 20 --counts 32,32,0");
  EXPECT_EQ(multi.out, "0.490013,0.490013,0.019974\n0.454154,0.454154,0.091692\n");
}

TEST_F(CliTest, EvalWithEmptyPredictions) {
  const std::vector<AnnotationEvent> gts = {{0, 1, 10, 400}, {0, 2, 500, 900}};
  write_annotations(p("gt.csv"), gts);
  write_predictions(p("pred.csv"), {});
  const auto r = run_cli("eval --annotations " + p("gt.csv") + " --predictions " + p("pred.csv"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("f1=0\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("fn=2\n"), std::string::npos) << r.out;
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run_cli("smooth-demo --beta -1 --counts 1,2").exit_code, 2);
  EXPECT_EQ(run_cli("smooth-demo --no-such-flag").exit_code, 2);
  EXPECT_EQ(run_cli("pipeline --set no_such_key=1 --out-dir " + p("x")).exit_code, 2);
  EXPECT_EQ(run_cli("eval --annotations " + p("missing.csv") + " --predictions " + p("missing.csv")).exit_code, 2);
  std::ofstream(p("bad.csv")) << "0,1,50,10\n";
  write_predictions(p("pred.csv"), {});
  EXPECT_EQ(run_cli("eval --annotations " + p("bad.csv") + " --predictions " + p("pred.csv")).exit_code, 2);
  EXPECT_EQ(run_cli("synth --scenes 1 --scene-len 9000 --out-features " + p("nodir/f.dgf") +
                    " --out-annotations " + p("nodir/a.csv") + " --set feature_dim=8")
                .exit_code,
            1);
}

const char* kSmall =
    " --set n_classes=5 --set feature_dim=12 --set hidden_dim=12 --set epochs=3"
    " --set batches_per_epoch=5 --set learning_rate=0.003 --set segment_len=32"
    " --set median_window=51 --set min_peak_width=100"
    " --set synth.event_len_min=200 --set synth.event_len_max=260";

TEST_F(CliTest, PipelineDeterministicAcrossThreadsAndReplay) {
  const std::string common = std::string(kSmall) + " --scenes 2 --train-scenes 2 --scene-len 1600 --views 2 --seed 11";
  const auto a = run_cli("pipeline --keep-intermediates --threads 1 --out-dir " + p("a") + common);
  const auto b = run_cli("pipeline --keep-intermediates --threads 8 --out-dir " + p("b") + common);
  ASSERT_EQ(a.exit_code, 0);
  ASSERT_EQ(b.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("f1="), std::string::npos);
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename();
    if (name == "manifest.json") continue;
    EXPECT_EQ(slurp(entry.path()), slurp(dir / "b" / name)) << name;
    ++compared;
  }
  EXPECT_EQ(compared, 9);

  const auto c = run_cli("pipeline --keep-intermediates --replay " + p("a/manifest.json") + " --out-dir " + p("c"));
  ASSERT_EQ(c.exit_code, 0);
  EXPECT_EQ(c.out, a.out);
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename();
    if (name != "manifest.json") EXPECT_EQ(slurp(entry.path()), slurp(dir / "c" / name)) << name;
  }
}

TEST_F(CliTest, StagewiseCommandsMatchAcrossThreads) {
  for (const std::string t : {"1", "8"}) {
    const std::string d = p("run" + t + "_");
    const std::string opts = std::string(kSmall) + " --seed 3 --threads " + t;
    ASSERT_EQ(run_cli("synth --scenes 2 --scene-len 1600 --views 2 --out-features " + d + "f.dgf" +
                      " --out-annotations " + d + "a.csv" + opts).exit_code, 0);
    ASSERT_EQ(run_cli("train --features " + d + "f.dgf --annotations " + d + "a.csv --out " + d + "m.dgm" + opts)
                  .exit_code, 0);
    ASSERT_EQ(run_cli("infer --model " + d + "m.dgm --features " + d + "f.dgf --out " + d + "s.csv" + opts)
                  .exit_code, 0);
    ASSERT_EQ(run_cli("fuse --in " + d + "s.csv --out " + d + "x.csv" + opts).exit_code, 0);
    ASSERT_EQ(run_cli("localize --in " + d + "x.csv --out " + d + "p.csv" + opts).exit_code, 0);
    ASSERT_EQ(run_cli("eval --annotations " + d + "a.csv --predictions " + d + "p.csv --per-class" + opts)
                  .exit_code, 0);
  }
  for (const std::string f : {"f.dgf", "a.csv", "m.dgm", "s.csv", "x.csv", "p.csv"}) {
    EXPECT_EQ(slurp(p("run1_" + f)), slurp(p("run8_" + f))) << f;
    // One manifest per command, next to its primary output.
    if (f != "a.csv") EXPECT_TRUE(fs::exists(p("run1_" + f + ".manifest.json"))) << f;
  }
}

}  // namespace
}  // namespace dgl
