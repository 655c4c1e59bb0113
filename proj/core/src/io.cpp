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

#include "dgl/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>

#include "dgl/error.hpp"

namespace dgl {
namespace {

constexpr std::array<char, 4> kFeatureMagic = {'D', 'G', 'F', '1'};
constexpr std::uint32_t kFeatureVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFFu);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in, const char* what) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw FormatError(std::string("feature store truncated while reading ") + what);
  }
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

template <typename T>
T to_unsigned(std::int64_t v, const char* what) {
  if (v < 0 || static_cast<std::uint64_t>(v) > std::numeric_limits<T>::max()) {
    throw ValidationError(std::string(what) + " does not fit the feature store layout");
  }
  return static_cast<T>(v);
}

// Splits one delimited line into fields.
std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    auto field = line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
      field.remove_suffix(1);
    }
    out.push_back(field);
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

class LineReader {
 public:
  LineReader(std::string_view text, std::string name) : text_(text), name_(std::move(name)) {}

  // Next non-blank, non-comment line; false at end.
  bool next(std::string_view& line) {
    while (!text_.empty()) {
      const auto nl = text_.find('\n');
      line = text_.substr(0, nl);
      text_ = nl == std::string_view::npos ? std::string_view{} : text_.substr(nl + 1);
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string_view::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError(name_ + " line " + std::to_string(line_no_) + ": " + what);
  }

  template <typename T>
  T integer(std::string_view field, const char* what) const {
    T value{};
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc{} || ptr != end) {
      fail(std::string("non-integer ") + what + " '" + std::string(field) + "'");
    }
    return value;
  }

  double real(std::string_view field, const char* what) const {
    double value{};
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
      fail(std::string("bad ") + what + " '" + std::string(field) + "'");
    }
    return value;
  }

  std::vector<std::string_view> fields(std::string_view line, std::size_t expected) const {
    auto f = split(line);
    if (f.size() != expected) {
      fail("expected " + std::to_string(expected) + " fields, found " + std::to_string(f.size()));
    }
    return f;
  }

  ClassId class_id(std::string_view field, int n_classes, bool allow_background) const {
    const auto c = integer<ClassId>(field, "class_id");
    if (c < (allow_background ? 0 : 1) || c >= n_classes) {
      fail("unknown class id " + std::to_string(c));
    }
    return c;
  }

 private:
  std::string_view text_;
  std::string name_;
  std::size_t line_no_ = 0;
};

void append_probs(std::string& out, std::span<const double> probs) {
  for (double p : probs) {
    out.push_back(',');
    out += format_double(p);
  }
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), ptr);
}

void write_feature_store(std::ostream& out, const FeatureStoreHeader& header,
                         std::span<const SegmentFeatureRecord> records) {
  out.write(kFeatureMagic.data(), kFeatureMagic.size());
  put_le<std::uint32_t>(out, header.version);
  put_le<std::uint32_t>(out, header.feature_dim);
  put_le<std::uint32_t>(out, header.segment_len);
  put_le<std::uint32_t>(out, to_unsigned<std::uint32_t>(static_cast<std::int64_t>(records.size()),
                                                        "record count"));
  for (const auto& r : records) {
    if (r.features.size() != header.feature_dim) {
      throw ValidationError("record has " + std::to_string(r.features.size()) +
                            " features, header says " + std::to_string(header.feature_dim));
    }
    put_le<std::uint32_t>(out, r.scene_id);
    put_le<std::uint16_t>(out, r.view_id);
    put_le<std::uint32_t>(out, to_unsigned<std::uint32_t>(r.start_frame, "start_frame"));
    for (float v : r.features) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  }
  if (!out) throw IoError("feature store write failed");
}

FeatureStore read_feature_store(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4 || magic != kFeatureMagic) throw FormatError("not a feature store (bad magic)");
  FeatureStore store;
  store.header.version = get_le<std::uint32_t>(in, "version");
  if (store.header.version != kFeatureVersion) {
    throw FormatError("unsupported feature store version " + std::to_string(store.header.version));
  }
  store.header.feature_dim = get_le<std::uint32_t>(in, "N_f");
  store.header.segment_len = get_le<std::uint32_t>(in, "T_c");
  const auto count = get_le<std::uint32_t>(in, "record_count");
  if (store.header.feature_dim == 0) throw FormatError("feature store has N_f = 0");

  const std::size_t payload = 4u * store.header.feature_dim;
  std::vector<char> raw(payload);
  store.records.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    SegmentFeatureRecord r;
    r.scene_id = get_le<std::uint32_t>(in, "scene_id");
    r.view_id = get_le<std::uint16_t>(in, "view_id");
    r.start_frame = get_le<std::uint32_t>(in, "start_frame");
    in.read(raw.data(), static_cast<std::streamsize>(payload));
    if (in.gcount() != static_cast<std::streamsize>(payload)) {
      throw FormatError("feature store truncated in record " + std::to_string(i));
    }
    r.features.resize(store.header.feature_dim);
    for (std::size_t k = 0; k < r.features.size(); ++k) {
      std::uint32_t bits = 0;
      for (std::size_t b = 0; b < 4; ++b) {
        bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(raw[4 * k + b])) << (8 * b);
      }
      r.features[k] = std::bit_cast<float>(bits);
      if (!std::isfinite(r.features[k])) {
        throw FormatError("non-finite feature in record " + std::to_string(i));
      }
    }
    store.records.push_back(std::move(r));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("trailing bytes after last record (N_f mismatch?)");
  }
  return store;
}

void write_feature_store(const std::filesystem::path& path, const FeatureStoreHeader& header,
                         std::span<const SegmentFeatureRecord> records) {
  std::ostringstream buf(std::ios::binary);
  write_feature_store(buf, header, records);
  write_file_atomic(path, buf.view());
}

FeatureStore read_feature_store(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_feature_store(in);
}

std::vector<AnnotationEvent> parse_annotations(std::string_view text, int n_classes) {
  std::vector<AnnotationEvent> events;
  LineReader reader(text, "annotations");
  std::string_view line;
  while (reader.next(line)) {
    const auto f = reader.fields(line, 4);
    AnnotationEvent e;
    e.scene_id = reader.integer<SceneId>(f[0], "scene_id");
    e.class_id = reader.class_id(f[1], n_classes, false);
    e.start_frame = reader.integer<FrameIndex>(f[2], "start_frame");
    e.end_frame = reader.integer<FrameIndex>(f[3], "end_frame");
    if (e.start_frame < 0 || e.end_frame < e.start_frame) reader.fail("invalid interval");
    events.push_back(e);
  }
  return events;
}

std::string format_annotations(std::span<const AnnotationEvent> events) {
  std::string out = "# scene_id,class_id,start_frame,end_frame\n";
  for (const auto& e : events) {
    out += std::to_string(e.scene_id) + ',' + std::to_string(e.class_id) + ',' +
           std::to_string(e.start_frame) + ',' + std::to_string(e.end_frame) + '\n';
  }
  return out;
}

std::vector<AnnotationEvent> read_annotations(const std::filesystem::path& path, int n_classes) {
  return parse_annotations(read_text_file(path), n_classes);
}

void write_annotations(const std::filesystem::path& path, std::span<const AnnotationEvent> events) {
  write_file_atomic(path, format_annotations(events));
}

std::vector<Prediction> parse_predictions(std::string_view text, int n_classes) {
  std::vector<Prediction> preds;
  LineReader reader(text, "predictions");
  std::string_view line;
  while (reader.next(line)) {
    const auto f = reader.fields(line, 5);
    Prediction p;
    p.scene_id = reader.integer<SceneId>(f[0], "scene_id");
    p.class_id = reader.class_id(f[1], n_classes, false);
    p.start_frame = reader.integer<FrameIndex>(f[2], "start_frame");
    p.end_frame = reader.integer<FrameIndex>(f[3], "end_frame");
    p.peak_prob = reader.real(f[4], "peak_prob");
    if (p.start_frame < 0 || p.end_frame < p.start_frame) reader.fail("invalid interval");
    if (p.peak_prob < 0.0 || p.peak_prob > 1.0) reader.fail("peak_prob outside [0, 1]");
    preds.push_back(p);
  }
  return preds;
}

std::string format_predictions(std::span<const Prediction> predictions) {
  std::string out = "# scene_id,class_id,start_frame,end_frame,peak_prob\n";
  for (const auto& p : predictions) {
    out += std::to_string(p.scene_id) + ',' + std::to_string(p.class_id) + ',' +
           std::to_string(p.start_frame) + ',' + std::to_string(p.end_frame) + ',' +
           format_double(p.peak_prob) + '\n';
  }
  return out;
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path, int n_classes) {
  return parse_predictions(read_text_file(path), n_classes);
}

void write_predictions(const std::filesystem::path& path, std::span<const Prediction> predictions) {
  write_file_atomic(path, format_predictions(predictions));
}

std::vector<SegmentProbabilities> parse_segment_probabilities(std::string_view text, int n_classes) {
  std::vector<SegmentProbabilities> out;
  LineReader reader(text, "segment probabilities");
  std::string_view line;
  while (reader.next(line)) {
    const auto f = reader.fields(line, 3 + static_cast<std::size_t>(n_classes));
    SegmentProbabilities s;
    s.scene_id = reader.integer<SceneId>(f[0], "scene_id");
    s.view_id = reader.integer<ViewId>(f[1], "view_id");
    s.start_frame = reader.integer<FrameIndex>(f[2], "start_frame");
    s.probs.resize(static_cast<std::size_t>(n_classes));
    for (int c = 0; c < n_classes; ++c) s.probs[c] = reader.real(f[3 + c], "probability");
    try {
      check_distribution(s.probs);
    } catch (const ValidationError& e) {
      reader.fail(e.what());
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string format_segment_probabilities(std::span<const SegmentProbabilities> segments) {
  std::string out;
  for (const auto& s : segments) {
    out += std::to_string(s.scene_id) + ',' + std::to_string(s.view_id) + ',' +
           std::to_string(s.start_frame);
    append_probs(out, s.probs);
    out.push_back('\n');
  }
  return out;
}

std::vector<SceneProbabilityMatrix> parse_scene_matrices(std::string_view text, int n_classes) {
  // scene -> rows in file order
  std::map<SceneId, std::vector<std::vector<double>>> rows;
  LineReader reader(text, "scene matrices");
  std::string_view line;
  while (reader.next(line)) {
    const auto f = reader.fields(line, 2 + static_cast<std::size_t>(n_classes));
    const auto scene = reader.integer<SceneId>(f[0], "scene_id");
    const auto frame = reader.integer<FrameIndex>(f[1], "frame");
    auto& scene_rows = rows[scene];
    if (frame != static_cast<FrameIndex>(scene_rows.size())) {
      reader.fail("frames of scene " + std::to_string(scene) + " must be consecutive from 0");
    }
    std::vector<double> probs(static_cast<std::size_t>(n_classes));
    for (int c = 0; c < n_classes; ++c) probs[c] = reader.real(f[2 + c], "probability");
    scene_rows.push_back(std::move(probs));
  }
  std::vector<SceneProbabilityMatrix> out;
  for (auto& [scene, scene_rows] : rows) {
    SceneProbabilityMatrix m(scene, scene_rows.size(), static_cast<std::size_t>(n_classes));
    for (std::size_t f = 0; f < scene_rows.size(); ++f) {
      std::copy(scene_rows[f].begin(), scene_rows[f].end(), m.row(f).begin());
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::string format_scene_matrices(std::span<const SceneProbabilityMatrix> matrices) {
  std::string out;
  for (const auto& m : matrices) {
    for (std::size_t f = 0; f < m.frames(); ++f) {
      out += std::to_string(m.scene_id()) + ',' + std::to_string(f);
      append_probs(out, m.row(f));
      out.push_back('\n');
    }
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " -> " + path.string() + ": " + ec.message());
}

}  // namespace dgl
