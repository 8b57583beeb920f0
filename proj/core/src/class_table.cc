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

#include <cmath>
#include <string>
#include <utility>

#include "zsl/types.h"

namespace zsl {

void require_finite(const Vector& v, std::string_view what) {
  for (Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw InputError(std::string(what) + ": non-finite value at coordinate " +
                       std::to_string(i));
    }
  }
}

ClassEmbeddingTable::ClassEmbeddingTable(std::string source_name,
                                         std::vector<ClassEmbedding> entries)
    : source_name_(std::move(source_name)), entries_(std::move(entries)) {
  if (entries_.empty()) return;
  const Index d = entries_.front().vector.size();
  if (d == 0) {
    throw InputError("class table '" + source_name_ + "': zero-dimensional vectors");
  }
  stacked_.resize(static_cast<Index>(entries_.size()), d);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.vector.size() != d) {
      throw InputError("class table '" + source_name_ + "': species '" +
                       e.species_id + "' has dimension " +
                       std::to_string(e.vector.size()) + ", expected " +
                       std::to_string(d));
    }
    require_finite(e.vector, "class embedding '" + e.species_id + "'");
    if (!index_.emplace(e.species_id, i).second) {
      throw InputError("class table '" + source_name_ + "': duplicate species '" +
                       e.species_id + "'");
    }
    stacked_.row(static_cast<Index>(i)) = e.vector.transpose();
  }
}

bool ClassEmbeddingTable::contains(std::string_view species_id) const {
  return index_.find(std::string(species_id)) != index_.end();
}

std::size_t ClassEmbeddingTable::index_of(std::string_view species_id) const {
  auto it = index_.find(std::string(species_id));
  if (it == index_.end()) {
    throw InputError("class table '" + source_name_ + "' has no species '" +
                     std::string(species_id) + "'");
  }
  return it->second;
}

const ClassEmbedding& ClassEmbeddingTable::at(std::string_view species_id) const {
  return entries_[index_of(species_id)];
}

std::vector<std::string> ClassEmbeddingTable::species_ids() const {
  std::vector<std::string> ids;
  ids.reserve(entries_.size());
  for (const auto& e : entries_) ids.push_back(e.species_id);
  return ids;
}

ClassEmbeddingTable ClassEmbeddingTable::subset(
    const std::vector<std::string>& species_ids) const {
  std::vector<ClassEmbedding> picked;
  picked.reserve(species_ids.size());
  for (const auto& id : species_ids) picked.push_back(at(id));
  return ClassEmbeddingTable(source_name_, std::move(picked));
}

}  // namespace zsl
