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

#ifndef ZSL_SYNTHETIC_H_
#define ZSL_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "zsl/types.h"

namespace zsl {

// Linear zero-shot task with a known generator: class vectors c_y have
// i.i.d. N(0, class_scale^2) entries (class_scale <= 0 selects 1/sqrt(d_c),
// i.e. roughly unit-norm classes), a hidden map M (d_a x d_c) has
// N(0, 1/d_c) entries, and each sample is a = M c_y + eps with
// eps ~ N(0, noise^2 I). Species are
// named "sp000", "sp001", ...
struct SyntheticTaskConfig {
  std::size_t num_species = 30;
  std::size_t samples_per_species = 40;
  Index class_dim = 16;
  Index audio_dim = 32;
  double noise = 0.1;
  double class_scale = 0.0;
  std::uint64_t seed = 0;
};

struct SyntheticTask {
  ClassEmbeddingTable classes;
  std::vector<AcousticEmbedding> audio;
  Matrix hidden_map;
};

SyntheticTask make_synthetic_task(const SyntheticTaskConfig& cfg);

}  // namespace zsl

#endif  // ZSL_SYNTHETIC_H_
