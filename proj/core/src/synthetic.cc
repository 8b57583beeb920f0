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
#include <cstdio>
#include <string>

#include "zsl/random.h"
#include "zsl/synthetic.h"

namespace zsl {

SyntheticTask make_synthetic_task(const SyntheticTaskConfig& cfg) {
  if (cfg.num_species == 0 || cfg.class_dim <= 0 || cfg.audio_dim <= 0) {
    throw InputError("synthetic task: sizes must be positive");
  }
  Rng rng(cfg.seed);
  SyntheticTask task;
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.class_dim));
  const double class_scale = cfg.class_scale > 0.0 ? cfg.class_scale : scale;

  std::vector<ClassEmbedding> entries;
  for (std::size_t s = 0; s < cfg.num_species; ++s) {
    char name[16];
    std::snprintf(name, sizeof(name), "sp%03zu", s);
    Vector c(cfg.class_dim);
    for (Index j = 0; j < c.size(); ++j) c[j] = class_scale * rng.normal();
    entries.push_back({name, std::move(c)});
  }
  task.classes = ClassEmbeddingTable("synthetic", std::move(entries));

  task.hidden_map.resize(cfg.audio_dim, cfg.class_dim);
  for (Index i = 0; i < cfg.audio_dim; ++i) {
    for (Index j = 0; j < cfg.class_dim; ++j) task.hidden_map(i, j) = scale * rng.normal();
  }

  for (const auto& e : task.classes.entries()) {
    const Vector clean = task.hidden_map * e.vector;
    for (std::size_t k = 0; k < cfg.samples_per_species; ++k) {
      Vector a = clean;
      for (Index i = 0; i < a.size(); ++i) a[i] += cfg.noise * rng.normal();
      task.audio.push_back({e.species_id + "_" + std::to_string(k), e.species_id, std::move(a)});
    }
  }
  return task;
}

}  // namespace zsl
