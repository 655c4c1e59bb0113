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
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dgl/types.hpp"

namespace dgl {

// Binary feature store, little-endian:
//   "DGF1" | u32 version=1 | u32 N_f | u32 T_c | u32 record_count
//   record_count x { u32 scene_id | u16 view_id | u32 start_frame | N_f x f32 }
struct FeatureStoreHeader {
  std::uint32_t version = 1;
  std::uint32_t feature_dim = 0;
  std::uint32_t segment_len = 0;

  friend bool operator==(const FeatureStoreHeader&, const FeatureStoreHeader&) = default;
};

struct FeatureStore {
  FeatureStoreHeader header;
  std::vector<SegmentFeatureRecord> records;
};

void write_feature_store(std::ostream& out, const FeatureStoreHeader& header,
                         std::span<const SegmentFeatureRecord> records);
FeatureStore read_feature_store(std::istream& in);

void write_feature_store(const std::filesystem::path& path, const FeatureStoreHeader& header,
                         std::span<const SegmentFeatureRecord> records);
FeatureStore read_feature_store(const std::filesystem::path& path);

// Annotations: "scene_id,class_id,start_frame,end_frame" per line; '#' lines
// are comments. Class ids must lie in [1, n_classes-1].
std::vector<AnnotationEvent> parse_annotations(std::string_view text, int n_classes);
std::string format_annotations(std::span<const AnnotationEvent> events);
std::vector<AnnotationEvent> read_annotations(const std::filesystem::path& path, int n_classes);
void write_annotations(const std::filesystem::path& path, std::span<const AnnotationEvent> events);

// Predictions: "scene_id,class_id,start_frame,end_frame,peak_prob".
std::vector<Prediction> parse_predictions(std::string_view text, int n_classes);
std::string format_predictions(std::span<const Prediction> predictions);
std::vector<Prediction> read_predictions(const std::filesystem::path& path, int n_classes);
void write_predictions(const std::filesystem::path& path, std::span<const Prediction> predictions);

// Segment probabilities: "scene_id,view_id,start_frame,p_0,...,p_{N_c-1}".
std::vector<SegmentProbabilities> parse_segment_probabilities(std::string_view text, int n_classes);
std::string format_segment_probabilities(std::span<const SegmentProbabilities> segments);

// Scene matrices: "scene_id,frame,p_0,...,p_{N_c-1}", frames of a scene in
// order starting at 0.
std::vector<SceneProbabilityMatrix> parse_scene_matrices(std::string_view text, int n_classes);
std::string format_scene_matrices(std::span<const SceneProbabilityMatrix> matrices);

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

std::string read_text_file(const std::filesystem::path& path);
// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace dgl
