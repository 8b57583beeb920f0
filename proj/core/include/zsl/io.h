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

#ifndef ZSL_IO_H_
#define ZSL_IO_H_

// On-disk formats.
//
// Embedding file (audio samples and class tables alike):
//   # free-form comment lines, anywhere
//   id,label,<dim>
//   <id>,<label>,<v_1>,...,<v_dim>
// Audio rows carry the species in `label`; class-table rows are keyed by the
// species id in `id` and leave `label` empty. Values are written in shortest
// round-trip form. The header's third field may also be the literal `dim`,
// in which case the dimension is taken from the first row.
//
// Attribute table: delimiter-separated with a header row; the first column
// holds species ids; `NA`, `NaN` and empty cells are missing. Fields may be
// double-quoted.
//
// Manifest: JSON {"seed": n, "folds": [{"train": [...], "dev": [...],
// "test": [...]}, ...]}.
//
// Model file:
//   zsl-projection-model 1
//   d_a <int>
//   d_c <int>
//   seed <uint64>
//   trained_epochs <int>
//   <d_a lines of d_c space-separated weights, row-major>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "zsl/experiment.h"
#include "zsl/metadata.h"
#include "zsl/model.h"
#include "zsl/types.h"

namespace zsl {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Fixed three-decimal rendering used in printed tables (".233", "1.000").
std::string format_table_value(double value);

struct EmbeddingRow {
  std::string id;
  std::string label;
  Vector vector;
};

struct EmbeddingFile {
  Index dim = 0;
  std::vector<std::string> comments;  // without the leading '#'
  std::vector<EmbeddingRow> rows;
  std::vector<std::string> warnings;
};

EmbeddingFile parse_embedding_file(std::istream& in, const std::string& origin);
EmbeddingFile read_embedding_file(const std::filesystem::path& path);
void write_embedding_file(std::ostream& out, const EmbeddingFile& file);
void write_embedding_file(const std::filesystem::path& path, const EmbeddingFile& file);

/// Rows become samples; every row needs a species label.
std::vector<AcousticEmbedding> read_audio_embeddings(const std::filesystem::path& path);
std::vector<AcousticEmbedding> audio_from_file(const EmbeddingFile& file,
                                               const std::string& origin);

ClassEmbeddingTable read_class_table(const std::filesystem::path& path,
                                     const std::string& source_name);
ClassEmbeddingTable class_table_from_file(const EmbeddingFile& file,
                                          const std::string& source_name,
                                          const std::string& origin);
EmbeddingFile to_embedding_file(const ClassEmbeddingTable& table);
EmbeddingFile to_embedding_file(std::span<const AcousticEmbedding> audio);

RawAttributeTable parse_attribute_table(std::istream& in, const std::string& origin,
                                        char delimiter = ',');
RawAttributeTable read_attribute_table(const std::filesystem::path& path,
                                       char delimiter = ',');

/// One name per line; blank lines and '#' comments ignored.
std::vector<std::string> read_name_list(const std::filesystem::path& path);

std::string manifest_to_json(const SplitManifest& manifest);
SplitManifest manifest_from_json(std::string_view text, const std::string& origin);
SplitManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const SplitManifest& manifest);

void write_model(std::ostream& out, const ProjectionModel& model);
void write_model(const std::filesystem::path& path, const ProjectionModel& model);
ProjectionModel parse_model(std::istream& in, const std::string& origin);
ProjectionModel read_model(const std::filesystem::path& path);

/// Square grid: header "species,<id_1>,...,<id_n>", then one row per species.
void write_similarity_grid(std::ostream& out, const SimilarityMatrix& matrix);

/// Audit record of one preprocessing run, as JSON.
std::string audit_to_json(const PreprocessAudit& audit, const std::string& source_name);

/// One JSON object per line and epoch.
void write_epoch_history(std::ostream& out, const ExperimentResult& result);

/// Full-precision report: one block per fold and an aggregate block per source.
std::string report_to_json(const std::vector<ExperimentResult>& results);

/// Human-readable Dev/Test ACC/UAR/F1 tables at three decimals.
std::string report_to_text(const std::vector<ExperimentResult>& results);

/// Writes `contents` to `path` (creating parent directories).
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace zsl

#endif  // ZSL_IO_H_
