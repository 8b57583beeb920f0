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

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "zsl/metadata.h"
#include "zsl/model.h"
#include "zsl/random.h"

namespace zsl {
namespace {

Vector random_vector(Rng& rng, Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

ClassEmbeddingTable random_classes(Rng& rng, std::size_t count, Index dim) {
  std::vector<ClassEmbedding> entries;
  for (std::size_t i = 0; i < count; ++i) {
    entries.push_back({"sp" + std::to_string(i), random_vector(rng, dim)});
  }
  return ClassEmbeddingTable("bench", std::move(entries));
}

// One training step's worth of work: 16 samples of 768-d audio against the
// training classes of a fold.
void BM_WarpLossAndGradient(benchmark::State& state) {
  const auto num_classes = static_cast<std::size_t>(state.range(0));
  const auto class_dim = static_cast<Index>(state.range(1));
  Rng rng(1);
  const auto classes = random_classes(rng, num_classes, class_dim);
  const auto model = ProjectionModel::initialize(768, class_dim, 2);
  std::vector<AcousticEmbedding> batch;
  for (int n = 0; n < 16; ++n) {
    batch.push_back({"s" + std::to_string(n), "sp" + std::to_string(rng.uniform_index(num_classes)),
                     random_vector(rng, 768)});
  }
  const std::vector<SampleRef> refs(batch.begin(), batch.end());
  for (auto _ : state) {
    auto result = warp_loss_and_gradient(model, refs, classes);
    benchmark::DoNotOptimize(result.loss);
  }
}
BENCHMARK(BM_WarpLossAndGradient)->Args({76, 23})->Args({76, 768})->Args({76, 868});

void BM_Predict(benchmark::State& state) {
  Rng rng(3);
  const auto classes = random_classes(rng, 10, 768);
  const auto model = ProjectionModel::initialize(768, 768, 4);
  const Vector audio = random_vector(rng, 768);
  for (auto _ : state) benchmark::DoNotOptimize(predict(model, audio, classes).data());
}
BENCHMARK(BM_Predict);

void BM_CosineSimilarity(benchmark::State& state) {
  Rng rng(5);
  const auto classes = random_classes(rng, 95, static_cast<Index>(state.range(0)));
  for (auto _ : state) {
    auto sim = cosine_similarity_matrix(classes);
    benchmark::DoNotOptimize(sim.values.data());
  }
}
BENCHMARK(BM_CosineSimilarity)->Arg(23)->Arg(768);

}  // namespace
}  // namespace zsl

BENCHMARK_MAIN();
