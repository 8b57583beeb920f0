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

#ifndef ZSL_TYPES_H_
#define ZSL_TYPES_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace zsl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Thrown when caller-supplied data violates an operation's contract
/// (dimension mismatch, unknown class, malformed file, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One time-averaged audio embedding together with its species label.
struct AcousticEmbedding {
  std::string sample_id;
  std::string species_id;
  Vector vector;
};

/// Metadata vector describing one species.
struct ClassEmbedding {
  std::string species_id;
  Vector vector;
};

/// Per-species class embeddings from one metadata source.
///
/// All entries share one dimension, ids are unique and every coordinate is
/// finite; the constructor rejects anything else. Entry order is preserved
/// and also exposed as a row-stacked matrix for batched scoring.
class ClassEmbeddingTable {
 public:
  ClassEmbeddingTable() = default;
  ClassEmbeddingTable(std::string source_name, std::vector<ClassEmbedding> entries);

  const std::string& source_name() const { return source_name_; }
  Index dim() const { return stacked_.cols(); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const std::vector<ClassEmbedding>& entries() const { return entries_; }
  const ClassEmbedding& entry(std::size_t i) const { return entries_[i]; }

  /// Rows follow entries() order; shape size() x dim().
  const Matrix& stacked() const { return stacked_; }

  bool contains(std::string_view species_id) const;
  /// Position of species_id in entries(); throws InputError when absent.
  std::size_t index_of(std::string_view species_id) const;
  const ClassEmbedding& at(std::string_view species_id) const;

  std::vector<std::string> species_ids() const;

  /// Table restricted to `species_ids`, kept in the order given. Throws
  /// InputError naming the first id that is not present.
  ClassEmbeddingTable subset(const std::vector<std::string>& species_ids) const;

 private:
  std::string source_name_;
  std::vector<ClassEmbedding> entries_;
  Matrix stacked_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Throws InputError unless every coefficient is finite.
void require_finite(const Vector& v, std::string_view what);

}  // namespace zsl

#endif  // ZSL_TYPES_H_
