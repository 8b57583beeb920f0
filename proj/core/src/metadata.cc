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
#include <cmath>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "zsl/metadata.h"

namespace zsl {

RawAttributeTable::RawAttributeTable(std::vector<std::string> species_ids,
                                     std::vector<std::string> column_names,
                                     std::vector<Cell> cells)
    : species_ids_(std::move(species_ids)),
      column_names_(std::move(column_names)),
      cells_(std::move(cells)) {
  if (cells_.size() != species_ids_.size() * column_names_.size()) {
    throw InputError("attribute table: " + std::to_string(cells_.size()) +
                     " cells for " + std::to_string(species_ids_.size()) + " rows x " +
                     std::to_string(column_names_.size()) + " columns");
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : species_ids_) {
    if (!seen.insert(id).second) {
      throw InputError("attribute table: duplicate species '" + id + "'");
    }
  }
  seen.clear();
  for (const auto& name : column_names_) {
    if (!seen.insert(name).second) {
      throw InputError("attribute table: duplicate column '" + name + "'");
    }
  }
}

RawAttributeTable RawAttributeTable::select_columns(
    const std::vector<std::size_t>& cols) const {
  std::vector<std::string> names;
  names.reserve(cols.size());
  for (auto c : cols) names.push_back(column_names_.at(c));
  std::vector<Cell> cells;
  cells.reserve(num_rows() * cols.size());
  for (std::size_t r = 0; r < num_rows(); ++r) {
    for (auto c : cols) cells.push_back(at(r, c));
  }
  return RawAttributeTable(species_ids_, std::move(names), std::move(cells));
}

std::size_t count_missing(const RawAttributeTable& table, std::size_t col) {
  std::size_t n = 0;
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    if (is_missing(table.at(r, col))) ++n;
  }
  return n;
}

ExcludeResult exclude_columns(const RawAttributeTable& table,
                              const std::vector<std::string>& names) {
  const std::set<std::string> wanted(names.begin(), names.end());
  ExcludeResult out;
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < table.num_cols(); ++c) {
    if (wanted.count(table.column_names()[c]) != 0) {
      out.removed.push_back(table.column_names()[c]);
    } else {
      keep.push_back(c);
    }
  }
  for (const auto& name : names) {
    if (std::find(out.removed.begin(), out.removed.end(), name) == out.removed.end()) {
      out.not_found.push_back(name);
    }
  }
  out.table = table.select_columns(keep);
  return out;
}

DropResult drop_sparse_columns(const RawAttributeTable& table, std::size_t max_missing) {
  DropResult out;
  std::vector<std::size_t> keep;
  for (std::size_t c = 0; c < table.num_cols(); ++c) {
    if (count_missing(table, c) > max_missing) {
      out.dropped.push_back(table.column_names()[c]);
    } else {
      keep.push_back(c);
    }
  }
  if (keep.empty() && table.num_cols() > 0) {
    out.warnings.push_back("all " + std::to_string(table.num_cols()) +
                           " columns have more than " + std::to_string(max_missing) +
                           " missing values; table is empty");
  }
  out.table = table.select_columns(keep);
  return out;
}

namespace {

bool column_has_strings(const RawAttributeTable& table, std::size_t col) {
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    if (is_string(table.at(r, col))) return true;
  }
  return false;
}

}  // namespace

RawAttributeTable impute_missing(const RawAttributeTable& table) {
  std::vector<bool> string_col(table.num_cols());
  for (std::size_t c = 0; c < table.num_cols(); ++c) {
    string_col[c] = column_has_strings(table, c);
  }
  std::vector<Cell> cells = table.cells();
  for (std::size_t r = 0; r < table.num_rows(); ++r) {
    for (std::size_t c = 0; c < table.num_cols(); ++c) {
      Cell& cell = cells[r * table.num_cols() + c];
      if (!is_missing(cell)) continue;
      if (string_col[c]) {
        cell = std::string();
      } else {
        cell = 0.0;
      }
    }
  }
  return RawAttributeTable(table.species_ids(), table.column_names(), std::move(cells));
}

EncodeResult encode_strings(const RawAttributeTable& table) {
  EncodeResult out;
  std::vector<Cell> cells = table.cells();
  const std::size_t ncols = table.num_cols();
  for (std::size_t c = 0; c < ncols; ++c) {
    const std::string& name = table.column_names()[c];
    std::size_t numbers = 0;
    std::size_t strings = 0;
    std::set<std::string> distinct;
    for (std::size_t r = 0; r < table.num_rows(); ++r) {
      const Cell& cell = table.at(r, c);
      if (is_missing(cell)) {
        throw InputError("encode: column '" + name + "' has missing cells; impute first");
      }
      if (is_number(cell)) {
        ++numbers;
      } else {
        ++strings;
        distinct.insert(std::get<std::string>(cell));
      }
    }
    if (strings == 0) continue;
    if (numbers != 0) {
      throw InputError("encode: column '" + name + "' mixes numeric and string values");
    }
    std::vector<std::string> sorted(distinct.begin(), distinct.end());
    std::unordered_map<std::string, double> code;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      code.emplace(sorted[i], static_cast<double>(i));
    }
    for (std::size_t r = 0; r < table.num_rows(); ++r) {
      Cell& cell = cells[r * ncols + c];
      cell = code.at(std::get<std::string>(cell));
    }
    out.mappings.emplace(name, std::move(sorted));
  }
  out.table = RawAttributeTable(table.species_ids(), table.column_names(), std::move(cells));
  return out;
}

NormalizeResult minmax_normalize(const RawAttributeTable& table,
                                 const std::string& source_name) {
  const std::size_t rows = table.num_rows();
  const std::size_t cols = table.num_cols();
  if (cols == 0) {
    throw InputError("normalize: table '" + source_name + "' has no columns left");
  }
  NormalizeResult out;
  Matrix values(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) {
      const Cell& cell = table.at(r, c);
      if (!is_number(cell)) {
        throw InputError("normalize: non-numeric cell in column '" +
                         table.column_names()[c] + "' for species '" +
                         table.species_ids()[r] + "'");
      }
      values(static_cast<Index>(r), static_cast<Index>(c)) = std::get<double>(cell);
    }
  }
  for (Index c = 0; c < values.cols(); ++c) {
    ColumnRange range{table.column_names()[static_cast<std::size_t>(c)], 0.0, 0.0};
    if (rows > 0) {
      range.min = values.col(c).minCoeff();
      range.max = values.col(c).maxCoeff();
    }
    const double span = range.max - range.min;
    if (span > 0.0) {
      values.col(c) = (values.col(c).array() - range.min) / span;
    } else {
      values.col(c).setZero();
    }
    out.ranges.push_back(std::move(range));
  }
  std::vector<ClassEmbedding> entries;
  entries.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    entries.push_back({table.species_ids()[r], values.row(static_cast<Index>(r)).transpose()});
  }
  out.table = ClassEmbeddingTable(source_name, std::move(entries));
  return out;
}

PreprocessResult preprocess_attributes(const RawAttributeTable& table,
                                       const PreprocessOptions& options) {
  PreprocessAudit audit;
  auto excluded = exclude_columns(table, options.excluded_columns);
  audit.excluded = std::move(excluded.removed);
  audit.exclusions_not_found = std::move(excluded.not_found);
  for (const auto& name : audit.exclusions_not_found) {
    audit.warnings.push_back("excluded column '" + name + "' not present in table");
  }

  auto dropped = drop_sparse_columns(excluded.table, options.max_missing);
  audit.dropped = std::move(dropped.dropped);
  audit.warnings.insert(audit.warnings.end(), dropped.warnings.begin(),
                        dropped.warnings.end());

  auto encoded = encode_strings(impute_missing(dropped.table));
  audit.label_mappings = std::move(encoded.mappings);

  auto normalized = minmax_normalize(encoded.table, options.source_name);
  audit.ranges = std::move(normalized.ranges);
  audit.kept_columns = encoded.table.column_names();
  return {std::move(normalized.table), std::move(audit)};
}

RawAttributeTable to_attribute_table(const ClassEmbeddingTable& table,
                                     const std::vector<std::string>& column_names) {
  if (static_cast<Index>(column_names.size()) != table.dim()) {
    throw InputError("to_attribute_table: " + std::to_string(column_names.size()) +
                     " column names for dimension " + std::to_string(table.dim()));
  }
  std::vector<Cell> cells;
  cells.reserve(table.size() * column_names.size());
  for (const auto& e : table.entries()) {
    for (Index j = 0; j < e.vector.size(); ++j) cells.emplace_back(e.vector[j]);
  }
  return RawAttributeTable(table.species_ids(), column_names, std::move(cells));
}

ClassEmbeddingTable concat_tables(std::span<const ClassEmbeddingTable> tables) {
  if (tables.empty()) throw InputError("concat: no tables given");
  const auto& first = tables.front();
  const auto first_ids = first.species_ids();
  const std::set<std::string> reference(first_ids.begin(), first_ids.end());

  std::string name = first.source_name();
  Index total_dim = first.dim();
  for (std::size_t t = 1; t < tables.size(); ++t) {
    const auto ids = tables[t].species_ids();
    const std::set<std::string> other(ids.begin(), ids.end());
    if (other != reference) {
      std::vector<std::string> diff;
      std::set_symmetric_difference(reference.begin(), reference.end(), other.begin(),
                                    other.end(), std::back_inserter(diff));
      std::string listed;
      for (const auto& d : diff) listed += (listed.empty() ? "" : ", ") + d;
      throw InputError("concat: species of '" + tables[t].source_name() +
                       "' differ from '" + first.source_name() + "': " + listed);
    }
    name += "+" + tables[t].source_name();
    total_dim += tables[t].dim();
  }

  std::vector<ClassEmbedding> entries;
  entries.reserve(first.size());
  for (const auto& id : first_ids) {
    Vector v(total_dim);
    Index offset = 0;
    for (const auto& table : tables) {
      const Vector& part = table.at(id).vector;
      v.segment(offset, part.size()) = part;
      offset += part.size();
    }
    entries.push_back({id, std::move(v)});
  }
  return ClassEmbeddingTable(name, std::move(entries));
}

SimilarityMatrix cosine_similarity_matrix(const ClassEmbeddingTable& table) {
  SimilarityMatrix out;
  out.species_ids = table.species_ids();
  const Index n = static_cast<Index>(table.size());
  out.values = Matrix::Zero(n, n);
  const Matrix& rows = table.stacked();
  Vector norms(n);
  for (Index i = 0; i < n; ++i) {
    norms[i] = rows.row(i).norm();
    if (norms[i] == 0.0) out.zero_vectors.push_back(out.species_ids[static_cast<std::size_t>(i)]);
  }
  for (Index i = 0; i < n; ++i) {
    if (norms[i] == 0.0) continue;
    for (Index j = i; j < n; ++j) {
      if (norms[j] == 0.0) continue;
      const double s =
          std::clamp(rows.row(i).dot(rows.row(j)) / (norms[i] * norms[j]), -1.0, 1.0);
      out.values(i, j) = s;
      out.values(j, i) = s;
    }
  }
  return out;
}

}  // namespace zsl
