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

#ifndef ZSL_METADATA_H_
#define ZSL_METADATA_H_

// Attribute-table preprocessing (column exclusion, sparse-column dropping,
// zero imputation, label encoding, min/max scaling), class-table
// concatenation and cosine-similarity analysis.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "zsl/types.h"

namespace zsl {

struct Missing {
  bool operator==(const Missing&) const = default;
};

/// One attribute value: missing, numeric or a categorical string.
using Cell = std::variant<Missing, double, std::string>;

inline bool is_missing(const Cell& c) { return std::holds_alternative<Missing>(c); }
inline bool is_number(const Cell& c) { return std::holds_alternative<double>(c); }
inline bool is_string(const Cell& c) { return std::holds_alternative<std::string>(c); }

/// species x column grid of raw attribute cells, stored row-major.
class RawAttributeTable {
 public:
  RawAttributeTable() = default;
  /// Throws InputError on a size mismatch or duplicate species/column names.
  RawAttributeTable(std::vector<std::string> species_ids,
                    std::vector<std::string> column_names, std::vector<Cell> cells);

  std::size_t num_rows() const { return species_ids_.size(); }
  std::size_t num_cols() const { return column_names_.size(); }
  const std::vector<std::string>& species_ids() const { return species_ids_; }
  const std::vector<std::string>& column_names() const { return column_names_; }
  const std::vector<Cell>& cells() const { return cells_; }

  const Cell& at(std::size_t row, std::size_t col) const {
    return cells_[row * num_cols() + col];
  }

  /// Copy keeping only the listed column positions, in the given order.
  RawAttributeTable select_columns(const std::vector<std::size_t>& cols) const;

  bool operator==(const RawAttributeTable&) const = default;

 private:
  std::vector<std::string> species_ids_;
  std::vector<std::string> column_names_;
  std::vector<Cell> cells_;
};

std::size_t count_missing(const RawAttributeTable& table, std::size_t col);

struct ExcludeResult {
  RawAttributeTable table;
  std::vector<std::string> removed;
  std::vector<std::string> not_found;
};

/// Removes named columns (identity, taxonomy, geography, ...).
ExcludeResult exclude_columns(const RawAttributeTable& table,
                              const std::vector<std::string>& names);

struct DropResult {
  RawAttributeTable table;
  std::vector<std::string> dropped;
  /// Set when every column was dropped.
  std::vector<std::string> warnings;
};

inline constexpr std::size_t kDefaultMaxMissing = 10;

/// Keeps exactly the columns with at most `max_missing` missing cells.
DropResult drop_sparse_columns(const RawAttributeTable& table,
                               std::size_t max_missing = kDefaultMaxMissing);

/// Missing cells become 0 in numeric columns and "" in string columns. A
/// column with no present value at all is treated as numeric.
RawAttributeTable impute_missing(const RawAttributeTable& table);

struct EncodeResult {
  RawAttributeTable table;
  /// column name -> sorted distinct values; a value's code is its position.
  std::map<std::string, std::vector<std::string>> mappings;
};

/// Label-encodes string columns by lexicographic order of their distinct
/// values. Throws InputError for a column that mixes numbers and strings, or
/// that still holds missing cells.
EncodeResult encode_strings(const RawAttributeTable& table);

struct ColumnRange {
  std::string column;
  double min = 0.0;
  double max = 0.0;
};

struct NormalizeResult {
  ClassEmbeddingTable table;
  std::vector<ColumnRange> ranges;
};

/// Per column x -> (x - min) / (max - min); constant columns become 0.
NormalizeResult minmax_normalize(const RawAttributeTable& table,
                                 const std::string& source_name);

struct PreprocessOptions {
  std::string source_name;
  std::size_t max_missing = kDefaultMaxMissing;
  std::vector<std::string> excluded_columns;
};

struct PreprocessAudit {
  std::vector<std::string> excluded;
  std::vector<std::string> exclusions_not_found;
  std::vector<std::string> dropped;
  std::map<std::string, std::vector<std::string>> label_mappings;
  std::vector<ColumnRange> ranges;
  std::vector<std::string> kept_columns;
  std::vector<std::string> warnings;
};

struct PreprocessResult {
  ClassEmbeddingTable table;
  PreprocessAudit audit;
};

/// exclude -> drop sparse -> impute -> encode -> normalize.
PreprocessResult preprocess_attributes(const RawAttributeTable& table,
                                       const PreprocessOptions& options);

/// Numeric attribute table holding a class table's vectors, so the
/// pipeline can be re-applied to its own output.
RawAttributeTable to_attribute_table(const ClassEmbeddingTable& table,
                                     const std::vector<std::string>& column_names);

/// Per-species concatenation in the given order; source names joined by "+".
/// Every table must cover the same species set; the first table's species
/// order is kept.
ClassEmbeddingTable concat_tables(std::span<const ClassEmbeddingTable> tables);

struct SimilarityMatrix {
  std::vector<std::string> species_ids;
  Matrix values;
  /// Species whose vector is all zeros; their rows and columns are 0.
  std::vector<std::string> zero_vectors;
};

SimilarityMatrix cosine_similarity_matrix(const ClassEmbeddingTable& table);

}  // namespace zsl

#endif  // ZSL_METADATA_H_
