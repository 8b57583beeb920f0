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

#ifndef ZSL_EXPERIMENT_H_
#define ZSL_EXPERIMENT_H_

// Five-fold disjoint species splits, SGD training with the WARP loss,
// dev-based model selection and zero-shot evaluation.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zsl/metrics.h"
#include "zsl/model.h"
#include "zsl/types.h"

namespace zsl {

inline constexpr std::size_t kNumFolds = 5;
inline constexpr std::size_t kNumBuckets = 2 * kNumFolds;
inline constexpr std::size_t kMinSpecies = 20;

/// Species roles for one fold; each list is sorted.
struct Fold {
  std::vector<std::string> train;
  std::vector<std::string> dev;
  std::vector<std::string> test;

  bool operator==(const Fold&) const = default;
};

struct SplitManifest {
  std::uint64_t seed = 0;
  std::vector<Fold> folds;

  bool operator==(const SplitManifest&) const = default;
};

/// Shuffles the (sorted, de-duplicated) species with `seed` and cuts them
/// into ten near-equal contiguous buckets. Buckets 0-4 are the dev sets and
/// 5-9 the test sets of folds 0-4; everything else trains.
SplitManifest make_splits(std::vector<std::string> species, std::uint64_t seed);

/// Checks the manifest invariants against `species`: five folds, roles
/// disjoint and covering within a fold, dev sets pairwise disjoint, test sets
/// pairwise disjoint and every dev set disjoint from every test set. Throws
/// InputError describing the first violation.
void validate_manifest(const SplitManifest& manifest,
                       const std::vector<std::string>& species);

/// Which classes the ranking loss is scored against during training.
enum class LossClassScope {
  kAllTraining,  // every training species of the fold
  kBatchLocal,   // only species present in the current batch
};

/// Candidate classes for the per-epoch dev evaluation.
enum class DevCandidateScope {
  kDevOnly,      // the fold's dev species
  kTrainAndDev,  // dev plus training species
};

struct TrainingConfig {
  int epochs = 30;
  double learning_rate = 1e-4;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;
  LossClassScope loss_classes = LossClassScope::kAllTraining;
  DevCandidateScope dev_candidates = DevCandidateScope::kDevOnly;

  void validate() const;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  MetricsReport dev_metrics;
};

struct TrainingResult {
  ProjectionModel final_model;
  /// Earliest epoch with maximal dev macro-F1; the initialisation when no
  /// epoch was run.
  ProjectionModel best_model;
  int best_epoch = 0;
  std::vector<EpochRecord> history;
};

/// Samples whose species is in `species`, in input order.
std::vector<SampleRef> samples_of(std::span<const AcousticEmbedding> audio,
                                  const std::vector<std::string>& species);

/// Plain SGD on the fold's training species. Weights start from
/// ProjectionModel::initialize(d_a, d_c, cfg.seed); each epoch shuffles the
/// training samples, steps through batches of cfg.batch_size (the last one
/// may be short) and then scores the dev set zero-shot. Only training-species
/// audio and class embeddings take part in gradient steps.
TrainingResult train(const Fold& fold, std::span<const AcousticEmbedding> audio,
                     const ClassEmbeddingTable& classes, const TrainingConfig& cfg);

/// Snapshot with the highest dev macro-F1; earliest epoch wins ties.
const ProjectionModel& select_best(std::span<const EpochRecord> history,
                                   std::span<const ProjectionModel> snapshots);

struct Evaluation {
  std::vector<PredictionRecord> records;
  MetricsReport metrics;
};

/// Zero-shot predictions restricted to `candidates`; metrics use the
/// candidate species as the class set.
Evaluation evaluate(const ProjectionModel& model, std::span<const SampleRef> samples,
                    const ClassEmbeddingTable& candidates);

struct FoldResult {
  ProjectionModel model;
  int best_epoch = 0;
  std::vector<EpochRecord> history;
  MetricsReport dev;
  MetricsReport test;
};

struct ExperimentResult {
  std::string source;
  std::vector<FoldResult> folds;
  MetricsReport dev_mean;
  MetricsReport test_mean;
};

/// Produces the model to evaluate on one fold. The default is train().
using Trainer = std::function<TrainingResult(
    const Fold&, std::span<const AcousticEmbedding>, const ClassEmbeddingTable&,
    const TrainingConfig&)>;

struct ExperimentOptions {
  /// Run the folds on separate threads; results do not depend on it.
  bool parallel_folds = false;
  Trainer trainer;
};

/// Checks that every sample's species belongs to exactly one role of every
/// fold and that `classes` covers every species in the manifest.
void validate_experiment_inputs(const SplitManifest& manifest,
                                std::span<const AcousticEmbedding> audio,
                                const ClassEmbeddingTable& classes);

/// Train, select and evaluate every fold, then average dev and test metrics.
ExperimentResult run_experiment(const SplitManifest& manifest,
                                std::span<const AcousticEmbedding> audio,
                                const ClassEmbeddingTable& classes,
                                const TrainingConfig& cfg,
                                const ExperimentOptions& options = {});

}  // namespace zsl

#endif  // ZSL_EXPERIMENT_H_
