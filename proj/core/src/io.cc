// Copyright 2026 The zsl-birds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>
#include <unordered_set>

#include "json.hpp"
#include "zsl/io.h"

namespace zsl {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::string_view kModelMagic = "zsl-projection-model";
constexpr int kModelVersion = 1;

std::string location(const std::string& origin, std::size_t line, std::size_t column) {
  return origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": ";
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_number(std::string_view text, double& value) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end && std::isfinite(value);
}

template <typename Int>
bool parse_integer(std::string_view text, Int& value) {
  text = trim(text);
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return !text.empty() && ec == std::errc() && ptr == end;
}

// Splits one delimited line, honouring double quotes ("" escapes a quote).
// Returns false on an unterminated quote.
bool split_fields(std::string_view line, char delimiter, std::vector<std::string>& fields) {
  fields.clear();
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"' && trim(current).empty()) {
      current.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == delimiter) {
      fields.push_back(was_quoted ? current : std::string(trim(current)));
      current.clear();
      was_quoted = false;
    } else {
      current.push_back(c);
    }
  }
  if (quoted) return false;
  fields.push_back(was_quoted ? current : std::string(trim(current)));
  return true;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

void check_field_text(const std::string& text, const char* what) {
  if (text.find_first_of(",\n\r") != std::string::npos) {
    throw InputError(std::string(what) + " '" + text +
                     "' contains a comma or line break and cannot be written");
  }
}

ordered_json metrics_json(const MetricsReport& m, bool with_classes) {
  ordered_json j;
  j["acc"] = m.acc;
  j["uar"] = m.uar;
  j["f1"] = m.macro_f1;
  if (with_classes) {
    ordered_json classes = ordered_json::object();
    for (const auto& [name, c] : m.per_class) {
      classes[name] = {{"precision", c.precision},
                       {"recall", c.recall},
                       {"f1", c.f1},
                       {"support", c.support}};
    }
    j["per_class"] = classes;
  }
  return j;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string metric_columns(const MetricsReport& dev, const MetricsReport& test) {
  std::string row;
  for (double v : {dev.acc, dev.uar, dev.macro_f1, test.acc, test.uar, test.macro_f1}) {
    row += "  " + pad(format_table_value(v), 6);
  }
  return row;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("cannot format number");
  return std::string(buf, ptr);
}

std::string format_table_value(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  std::string s(buf);
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  if (s.rfind("-0.", 0) == 0) s.erase(1, 1);
  return s;
}

EmbeddingFile parse_embedding_file(std::istream& in, const std::string& origin) {
  EmbeddingFile file;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool infer_dim = false;
  std::vector<std::string> fields;
  std::unordered_set<std::string> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto content = trim(line);
    if (content.empty()) continue;
    if (content.front() == '#') {
      file.comments.emplace_back(trim(content.substr(1)));
      continue;
    }
    if (!split_fields(line, ',', fields)) {
      throw InputError(location(origin, line_no, 1) + "unterminated quote");
    }
    if (!have_header) {
      if (fields.size() != 3 || fields[0] != "id" || fields[1] != "label") {
        throw InputError(location(origin, line_no, 1) +
                         "expected header 'id,label,<dim>'");
      }
      if (fields[2] == "dim") {
        infer_dim = true;
      } else if (!parse_integer(fields[2], file.dim) || file.dim <= 0) {
        throw InputError(location(origin, line_no, 3) + "invalid dimension '" +
                         fields[2] + "'");
      }
      have_header = true;
      continue;
    }
    if (infer_dim) {
      if (fields.size() < 3) {
        throw InputError(location(origin, line_no, fields.size() + 1) +
                         "row has no vector values");
      }
      file.dim = static_cast<Index>(fields.size() - 2);
      infer_dim = false;
    }
    if (fields.size() != static_cast<std::size_t>(file.dim) + 2) {
      throw InputError(location(origin, line_no, fields.size()) +
                       "expected " + std::to_string(file.dim + 2) + " fields, found " +
                       std::to_string(fields.size()));
    }
    EmbeddingRow row;
    row.id = fields[0];
    row.label = fields[1];
    if (row.id.empty()) throw InputError(location(origin, line_no, 1) + "empty id");
    row.vector.resize(file.dim);
    for (Index j = 0; j < file.dim; ++j) {
      const auto& text = fields[static_cast<std::size_t>(j) + 2];
      if (!parse_number(text, row.vector[j])) {
        throw InputError(location(origin, line_no, static_cast<std::size_t>(j) + 3) +
                         "invalid number '" + text + "'");
      }
    }
    if (!ids.insert(row.id).second) {
      file.warnings.push_back(location(origin, line_no, 1) + "duplicate id '" + row.id + "'");
    }
    file.rows.push_back(std::move(row));
  }
  if (!have_header) throw InputError(origin + ": missing header line");
  return file;
}

EmbeddingFile read_embedding_file(const fs::path& path) {
  auto in = open_input(path);
  return parse_embedding_file(in, path.string());
}

void write_embedding_file(std::ostream& out, const EmbeddingFile& file) {
  for (const auto& c : file.comments) out << "# " << c << '\n';
  out << "id,label," << file.dim << '\n';
  for (const auto& row : file.rows) {
    check_field_text(row.id, "id");
    check_field_text(row.label, "label");
    if (row.vector.size() != file.dim) {
      throw InputError("row '" + row.id + "' has dimension " +
                       std::to_string(row.vector.size()) + ", file declares " +
                       std::to_string(file.dim));
    }
    out << row.id << ',' << row.label;
    for (Index j = 0; j < row.vector.size(); ++j) out << ',' << format_double(row.vector[j]);
    out << '\n';
  }
}

void write_embedding_file(const fs::path& path, const EmbeddingFile& file) {
  std::ostringstream buffer;
  write_embedding_file(buffer, file);
  write_text_file(path, buffer.str());
}

std::vector<AcousticEmbedding> audio_from_file(const EmbeddingFile& file,
                                               const std::string& origin) {
  std::vector<AcousticEmbedding> out;
  out.reserve(file.rows.size());
  for (const auto& row : file.rows) {
    if (row.label.empty()) {
      throw InputError(origin + ": sample '" + row.id + "' has no species label");
    }
    out.push_back({row.id, row.label, row.vector});
  }
  return out;
}

std::vector<AcousticEmbedding> read_audio_embeddings(const fs::path& path) {
  return audio_from_file(read_embedding_file(path), path.string());
}

ClassEmbeddingTable class_table_from_file(const EmbeddingFile& file,
                                          const std::string& source_name,
                                          const std::string& origin) {
  std::vector<ClassEmbedding> entries;
  entries.reserve(file.rows.size());
  for (const auto& row : file.rows) entries.push_back({row.id, row.vector});
  try {
    return ClassEmbeddingTable(source_name, std::move(entries));
  } catch (const InputError& e) {
    throw InputError(origin + ": " + e.what());
  }
}

ClassEmbeddingTable read_class_table(const fs::path& path, const std::string& source_name) {
  return class_table_from_file(read_embedding_file(path), source_name, path.string());
}

EmbeddingFile to_embedding_file(const ClassEmbeddingTable& table) {
  EmbeddingFile file;
  file.dim = table.dim();
  for (const auto& e : table.entries()) file.rows.push_back({e.species_id, "", e.vector});
  return file;
}

EmbeddingFile to_embedding_file(std::span<const AcousticEmbedding> audio) {
  EmbeddingFile file;
  file.dim = audio.empty() ? 0 : audio.front().vector.size();
  for (const auto& a : audio) file.rows.push_back({a.sample_id, a.species_id, a.vector});
  return file;
}

RawAttributeTable parse_attribute_table(std::istream& in, const std::string& origin,
                                        char delimiter) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> fields;
  std::vector<std::string> columns;
  std::vector<std::string> species;
  std::vector<Cell> cells;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (!split_fields(line, delimiter, fields)) {
      throw InputError(location(origin, line_no, 1) + "unterminated quote");
    }
    if (!have_header) {
      if (fields.size() < 2) {
        throw InputError(location(origin, line_no, 1) +
                         "header needs a species column and at least one attribute");
      }
      columns.assign(fields.begin() + 1, fields.end());
      have_header = true;
      continue;
    }
    if (fields.size() != columns.size() + 1) {
      throw InputError(location(origin, line_no, 1) + "expected " +
                       std::to_string(columns.size() + 1) + " fields, found " +
                       std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw InputError(location(origin, line_no, 1) + "empty species id");
    species.push_back(fields[0]);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const std::string& text = fields[c];
      double value = 0.0;
      if (text.empty() || text == "NA" || text == "NaN" || text == "nan") {
        cells.emplace_back(Missing{});
      } else if (parse_number(text, value)) {
        cells.emplace_back(value);
      } else {
        cells.emplace_back(text);
      }
    }
  }
  if (!have_header) throw InputError(origin + ": missing header line");
  try {
    return RawAttributeTable(std::move(species), std::move(columns), std::move(cells));
  } catch (const InputError& e) {
    throw InputError(origin + ": " + e.what());
  }
}

RawAttributeTable read_attribute_table(const fs::path& path, char delimiter) {
  auto in = open_input(path);
  return parse_attribute_table(in, path.string(), delimiter);
}

std::vector<std::string> read_name_list(const fs::path& path) {
  auto in = open_input(path);
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    const auto name = trim(line);
    if (name.empty() || name.front() == '#') continue;
    names.emplace_back(name);
  }
  return names;
}

std::string manifest_to_json(const SplitManifest& manifest) {
  ordered_json j;
  j["seed"] = manifest.seed;
  j["folds"] = ordered_json::array();
  for (const auto& f : manifest.folds) {
    ordered_json fold;
    fold["train"] = f.train;
    fold["dev"] = f.dev;
    fold["test"] = f.test;
    j["folds"].push_back(std::move(fold));
  }
  return j.dump(2) + "\n";
}

SplitManifest manifest_from_json(std::string_view text, const std::string& origin) {
  SplitManifest manifest;
  try {
    const json j = json::parse(text);
    manifest.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& f : j.at("folds")) {
      Fold fold;
      fold.train = f.at("train").get<std::vector<std::string>>();
      fold.dev = f.at("dev").get<std::vector<std::string>>();
      fold.test = f.at("test").get<std::vector<std::string>>();
      std::sort(fold.train.begin(), fold.train.end());
      std::sort(fold.dev.begin(), fold.dev.end());
      std::sort(fold.test.begin(), fold.test.end());
      manifest.folds.push_back(std::move(fold));
    }
  } catch (const json::exception& e) {
    throw InputError(origin + ": invalid manifest: " + e.what());
  }
  return manifest;
}

SplitManifest read_manifest(const fs::path& path) {
  auto in = open_input(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return manifest_from_json(buffer.str(), path.string());
}

void write_manifest(const fs::path& path, const SplitManifest& manifest) {
  write_text_file(path, manifest_to_json(manifest));
}

void write_model(std::ostream& out, const ProjectionModel& model) {
  model.validate();
  out << kModelMagic << ' ' << kModelVersion << '\n'
      << "d_a " << model.d_a() << '\n'
      << "d_c " << model.d_c() << '\n'
      << "seed " << model.seed << '\n'
      << "trained_epochs " << model.trained_epochs << '\n';
  for (Index i = 0; i < model.d_a(); ++i) {
    for (Index j = 0; j < model.d_c(); ++j) {
      if (j > 0) out << ' ';
      out << format_double(model.weights(i, j));
    }
    out << '\n';
  }
}

void write_model(const fs::path& path, const ProjectionModel& model) {
  std::ostringstream buffer;
  write_model(buffer, model);
  write_text_file(path, buffer.str());
}

ProjectionModel parse_model(std::istream& in, const std::string& origin) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> std::string {
    if (!std::getline(in, line)) {
      throw InputError(origin + ":" + std::to_string(line_no + 1) + ": unexpected end of file");
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  };
  auto keyed = [&](std::string_view key, auto& value) {
    const std::string l = next_line();
    std::istringstream ss(l);
    std::string k, v, rest;
    ss >> k >> v;
    if (k != key || v.empty() || (ss >> rest) || !parse_integer(v, value)) {
      throw InputError(location(origin, line_no, 1) + "expected '" + std::string(key) +
                       " <integer>'");
    }
  };

  {
    std::istringstream ss(next_line());
    std::string magic;
    int version = 0;
    ss >> magic >> version;
    if (magic != kModelMagic || version != kModelVersion) {
      throw InputError(location(origin, line_no, 1) + "not a version " +
                       std::to_string(kModelVersion) + " model file");
    }
  }
  Index d_a = 0, d_c = 0;
  ProjectionModel model;
  keyed("d_a", d_a);
  keyed("d_c", d_c);
  keyed("seed", model.seed);
  keyed("trained_epochs", model.trained_epochs);
  if (d_a <= 0 || d_c <= 0) throw InputError(origin + ": dimensions must be positive");
  model.weights.resize(d_a, d_c);
  for (Index i = 0; i < d_a; ++i) {
    std::istringstream ss(next_line());
    std::string token;
    Index j = 0;
    while (ss >> token) {
      if (j >= d_c) {
        throw InputError(location(origin, line_no, static_cast<std::size_t>(j) + 1) +
                         "too many weights in row");
      }
      if (!parse_number(token, model.weights(i, j))) {
        throw InputError(location(origin, line_no, static_cast<std::size_t>(j) + 1) +
                         "invalid weight '" + token + "'");
      }
      ++j;
    }
    if (j != d_c) {
      throw InputError(location(origin, line_no, static_cast<std::size_t>(j) + 1) +
                       "expected " + std::to_string(d_c) + " weights");
    }
  }
  model.validate();
  return model;
}

ProjectionModel read_model(const fs::path& path) {
  auto in = open_input(path);
  return parse_model(in, path.string());
}

void write_similarity_grid(std::ostream& out, const SimilarityMatrix& matrix) {
  out << "species";
  for (const auto& id : matrix.species_ids) {
    check_field_text(id, "species id");
    out << ',' << id;
  }
  out << '\n';
  for (Index i = 0; i < matrix.values.rows(); ++i) {
    out << matrix.species_ids[static_cast<std::size_t>(i)];
    for (Index j = 0; j < matrix.values.cols(); ++j) {
      out << ',' << format_double(matrix.values(i, j));
    }
    out << '\n';
  }
}

std::string audit_to_json(const PreprocessAudit& audit, const std::string& source_name) {
  ordered_json j;
  j["source"] = source_name;
  j["excluded_columns"] = audit.excluded;
  j["exclusions_not_found"] = audit.exclusions_not_found;
  j["dropped_columns"] = audit.dropped;
  j["kept_columns"] = audit.kept_columns;
  ordered_json mappings = ordered_json::object();
  for (const auto& [column, values] : audit.label_mappings) {
    ordered_json codes = ordered_json::object();
    for (std::size_t i = 0; i < values.size(); ++i) codes[values[i]] = i;
    mappings[column] = codes;
  }
  j["label_encodings"] = mappings;
  ordered_json ranges = ordered_json::array();
  for (const auto& r : audit.ranges) {
    ranges.push_back({{"column", r.column}, {"min", r.min}, {"max", r.max}});
  }
  j["column_ranges"] = ranges;
  j["warnings"] = audit.warnings;
  return j.dump(2) + "\n";
}

void write_epoch_history(std::ostream& out, const ExperimentResult& result) {
  for (std::size_t f = 0; f < result.folds.size(); ++f) {
    for (const auto& e : result.folds[f].history) {
      ordered_json j;
      j["source"] = result.source;
      j["fold"] = f;
      j["epoch"] = e.epoch;
      j["train_loss"] = e.train_loss;
      j["dev"] = metrics_json(e.dev_metrics, false);
      out << j.dump() << '\n';
    }
  }
}

std::string report_to_json(const std::vector<ExperimentResult>& results) {
  ordered_json j = ordered_json::array();
  for (const auto& r : results) {
    ordered_json source;
    source["source"] = r.source;
    ordered_json folds = ordered_json::array();
    for (std::size_t f = 0; f < r.folds.size(); ++f) {
      ordered_json fold;
      fold["fold"] = f;
      fold["best_epoch"] = r.folds[f].best_epoch;
      fold["dev"] = metrics_json(r.folds[f].dev, true);
      fold["test"] = metrics_json(r.folds[f].test, true);
      folds.push_back(std::move(fold));
    }
    source["folds"] = folds;
    source["mean"] = {{"dev", metrics_json(r.dev_mean, false)},
                      {"test", metrics_json(r.test_mean, false)}};
    j.push_back(std::move(source));
  }
  return j.dump(2) + "\n";
}

std::string report_to_text(const std::vector<ExperimentResult>& results) {
  std::size_t name_width = 10;
  for (const auto& r : results) name_width = std::max(name_width, r.source.size());
  const std::string header = "  " + pad("ACC", 6) + "  " + pad("UAR", 6) + "  " +
                             pad("F1", 6) + "  " + pad("ACC", 6) + "  " + pad("UAR", 6) +
                             "  " + pad("F1", 6) + "\n";
  const std::string group =
      "  " + pad("Dev", 22) + "  " + pad("Test", 22) + "\n";

  std::ostringstream out;
  for (const auto& r : results) {
    out << "[" << r.source << "]\n";
    out << pad("", name_width) << group << pad("split", name_width) << header;
    for (std::size_t f = 0; f < r.folds.size(); ++f) {
      out << pad("fold " + std::to_string(f), name_width)
          << metric_columns(r.folds[f].dev, r.folds[f].test) << '\n';
    }
    out << pad("mean", name_width) << metric_columns(r.dev_mean, r.test_mean) << "\n\n";
  }
  out << "[summary]\n";
  out << pad("", name_width) << group << pad("Embeddings", name_width) << header;
  for (const auto& r : results) {
    out << pad(r.source, name_width) << metric_columns(r.dev_mean, r.test_mean) << '\n';
  }
  std::istringstream padded(out.str());
  std::string text;
  std::string line;
  while (std::getline(padded, line)) {
    text.append(line, 0, line.find_last_not_of(' ') + 1);
    text.push_back('\n');
  }
  return text;
}

void write_text_file(const fs::path& path, std::string_view contents) {
  auto out = open_output(path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace zsl
