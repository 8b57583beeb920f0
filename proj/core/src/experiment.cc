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
#include <future>
#include <iterator>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>

#include "zsl/experiment.h"
#include "zsl/random.h"

namespace zsl {

namespace {

// Keeps the shuffle stream independent of the weight-initialisation stream.
constexpr std::uint64_t kShuffleStream = 0x9E3779B97F4A7C15ULL;

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool disjoint(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return common.empty();
}

std::string fold_name(std::size_t i) { return "fold " + std::to_string(i); }

enum class Role { kTrain, kDev, kTest };

std::unordered_map<std::string, Role> roles_of(const Fold& fold) {
  std::unordered_map<std::string, Role> roles;
  for (const auto& s : fold.train) roles.emplace(s, Role::kTrain);
  for (const auto& s : fold.dev) {
    if (!roles.emplace(s, Role::kDev).second) {
      throw InputError("species '" + s + "' has more than one role in a fold");
    }
  }
  for (const auto& s : fold.test) {
    if (!roles.emplace(s, Role::kTest).second) {
      throw InputError("species '" + s + "' has more than one role in a fold");
    }
  }
  return roles;
}

void check_fold_inputs(const Fold& fold, std::span<const AcousticEmbedding> audio,
                       const ClassEmbeddingTable& classes) {
  const auto roles = roles_of(fold);
  for (const auto& [species, role] : roles) {
    if (!classes.contains(species)) {
      throw InputError("class table '" + classes.source_name() +
                       "' has no embedding for species '" + species + "'");
    }
  }
  if (audio.empty()) throw InputError("no audio samples");
  const Index d_a = audio.front().vector.size();
  if (d_a == 0) throw InputError("audio embeddings are empty vectors");
  for (const auto& a : audio) {
    if (roles.find(a.species_id) == roles.end()) {
      throw InputError("sample '" + a.sample_id + "' has species '" + a.species_id +
                       "' which has no role in the fold");
    }
    if (a.vector.size() != d_a) {
      throw InputError("sample '" + a.sample_id + "' has dimension " +
                       std::to_string(a.vector.size()) + ", expected " +
                       std::to_string(d_a));
    }
  }
}

std::vector<std::string> merged(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::string> dev_candidate_species(const Fold& fold, DevCandidateScope scope) {
  return scope == DevCandidateScope::kDevOnly ? fold.dev : merged(fold.train, fold.dev);
}

}  // namespace

SplitManifest make_splits(std::vector<std::string> species, std::uint64_t seed) {
  species = sorted_unique(std::move(species));
  if (species.size() < kMinSpecies) {
    throw InputError("too few species: need at least " + std::to_string(kMinSpecies) +
                     ", got " + std::to_string(species.size()));
  }
  Rng rng(seed);
  rng.shuffle(std::span<std::string>(species));

  const std::size_t base = species.size() / kNumBuckets;
  const std::size_t extra = species.size() % kNumBuckets;
  std::vector<std::vector<std::string>> buckets(kNumBuckets);
  std::size_t pos = 0;
  for (std::size_t b = 0; b < kNumBuckets; ++b) {
    const std::size_t n = base + (b < extra ? 1 : 0);
    buckets[b].assign(species.begin() + static_cast<std::ptrdiff_t>(pos),
                      species.begin() + static_cast<std::ptrdiff_t>(pos + n));
    std::sort(buckets[b].begin(), buckets[b].end());
    pos += n;
  }

  SplitManifest manifest;
  manifest.seed = seed;
  for (std::size_t f = 0; f < kNumFolds; ++f) {
    Fold fold;
    fold.dev = buckets[f];
    fold.test = buckets[kNumFolds + f];
    for (std::size_t b = 0; b < kNumBuckets; ++b) {
      if (b == f || b == kNumFolds + f) continue;
      fold.train.insert(fold.train.end(), buckets[b].begin(), buckets[b].end());
    }
    std::sort(fold.train.begin(), fold.train.end());
    manifest.folds.push_back(std::move(fold));
  }
  return manifest;
}

void validate_manifest(const SplitManifest& manifest,
                       const std::vector<std::string>& species) {
  if (manifest.folds.size() != kNumFolds) {
    throw InputError("manifest: expected " + std::to_string(kNumFolds) + " folds, got " +
                     std::to_string(manifest.folds.size()));
  }
  const auto all = sorted_unique(species);
  for (std::size_t i = 0; i < manifest.folds.size(); ++i) {
    const Fold& f = manifest.folds[i];
    const auto train = sorted_unique(f.train);
    const auto dev = sorted_unique(f.dev);
    const auto test = sorted_unique(f.test);
    if (train.size() != f.train.size() || dev.size() != f.dev.size() ||
        test.size() != f.test.size()) {
      throw InputError("manifest: " + fold_name(i) + " lists a species twice");
    }
    if (dev.empty() || test.empty()) {
      throw InputError("manifest: " + fold_name(i) + " has an empty dev or test set");
    }
    if (!disjoint(train, dev) || !disjoint(train, test) || !disjoint(dev, test)) {
      throw InputError("manifest: " + fold_name(i) + " roles overlap");
    }
    if (merged(merged(train, dev), test) != all) {
      throw InputError("manifest: " + fold_name(i) +
                       " does not cover exactly the species set");
    }
  }
  for (std::size_t i = 0; i < manifest.folds.size(); ++i) {
    const auto dev_i = sorted_unique(manifest.folds[i].dev);
    const auto test_i = sorted_unique(manifest.folds[i].test);
    for (std::size_t j = 0; j < manifest.folds.size(); ++j) {
      const auto dev_j = sorted_unique(manifest.folds[j].dev);
      const auto test_j = sorted_unique(manifest.folds[j].test);
      if (!disjoint(dev_i, test_j)) {
        throw InputError("manifest: dev set of " + fold_name(i) +
                         " overlaps test set of " + fold_name(j));
      }
      if (i < j && !disjoint(dev_i, dev_j)) {
        throw InputError("manifest: dev sets of " + fold_name(i) + " and " +
                         fold_name(j) + " overlap");
      }
      if (i < j && !disjoint(test_i, test_j)) {
        throw InputError("manifest: test sets of " + fold_name(i) + " and " +
                         fold_name(j) + " overlap");
      }
    }
  }
}

void TrainingConfig::validate() const {
  if (epochs < 0) throw InputError("training: epochs must be non-negative");
  if (!std::isfinite(learning_rate) || learning_rate < 0.0) {
    throw InputError("training: learning rate must be finite and non-negative");
  }
  if (batch_size == 0) throw InputError("training: batch size must be positive");
}

std::vector<SampleRef> samples_of(std::span<const AcousticEmbedding> audio,
                                  const std::vector<std::string>& species) {
  const std::set<std::string> wanted(species.begin(), species.end());
  std::vector<SampleRef> out;
  for (const auto& a : audio) {
    if (wanted.count(a.species_id) != 0) out.emplace_back(a);
  }
  return out;
}

Evaluation evaluate(const ProjectionModel& model, std::span<const SampleRef> samples,
                    const ClassEmbeddingTable& candidates) {
  Evaluation out;
  out.records.reserve(samples.size());
  for (const AcousticEmbedding& a : samples) {
    out.records.push_back({a.sample_id, a.species_id, predict(model, a, candidates)});
  }
  out.metrics = compute_metrics(out.records, candidates.species_ids());
  return out;
}

TrainingResult train(const Fold& fold, std::span<const AcousticEmbedding> audio,
                     const ClassEmbeddingTable& classes, const TrainingConfig& cfg) {
  cfg.validate();
  check_fold_inputs(fold, audio, classes);

  // Everything the gradient steps may touch is restricted to training species.
  std::vector<SampleRef> train_samples = samples_of(audio, fold.train);
  const ClassEmbeddingTable train_classes = classes.subset(fold.train);

  const auto dev_species = dev_candidate_species(fold, cfg.dev_candidates);
  const std::vector<SampleRef> dev_samples = samples_of(audio, fold.dev);
  const ClassEmbeddingTable dev_classes = classes.subset(dev_species);

  if (cfg.epochs > 0 && train_samples.empty()) {
    throw InputError("training: fold has no training samples");
  }
  if (cfg.epochs > 0 && dev_samples.empty()) {
    throw InputError("training: fold has no dev samples");
  }

  TrainingResult result;
  ProjectionModel model =
      ProjectionModel::initialize(audio.front().vector.size(), classes.dim(), cfg.seed);
  result.best_model = model;

  Rng shuffle_rng(cfg.seed ^ kShuffleStream);
  std::vector<SampleRef> batch;
  batch.reserve(cfg.batch_size);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(std::span<SampleRef>(train_samples));
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < train_samples.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(start + cfg.batch_size, train_samples.size());
      batch.assign(train_samples.begin() + static_cast<std::ptrdiff_t>(start),
                   train_samples.begin() + static_cast<std::ptrdiff_t>(stop));
      LossAndGradient step;
      if (cfg.loss_classes == LossClassScope::kBatchLocal) {
        std::vector<std::string> present;
        for (const AcousticEmbedding& a : batch) present.push_back(a.species_id);
        step = warp_loss_and_gradient(model, batch,
                                      train_classes.subset(sorted_unique(present)));
      } else {
        step = warp_loss_and_gradient(model, batch, train_classes);
      }
      loss_sum += step.loss * static_cast<double>(batch.size());
      model.weights.noalias() -= cfg.learning_rate * step.gradient;
    }
    model.trained_epochs = epoch;

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(train_samples.size());
    record.dev_metrics = evaluate(model, dev_samples, dev_classes).metrics;
    // Best-so-far replacement; strict '>' keeps the earliest of equal epochs.
    if (result.history.empty() ||
        record.dev_metrics.macro_f1 >
            result.history[static_cast<std::size_t>(result.best_epoch - 1)]
                .dev_metrics.macro_f1) {
      result.best_model = model;
      result.best_epoch = epoch;
    }
    result.history.push_back(std::move(record));
  }
  result.final_model = std::move(model);
  return result;
}

const ProjectionModel& select_best(std::span<const EpochRecord> history,
                                   std::span<const ProjectionModel> snapshots) {
  if (history.empty()) throw InputError("select_best: empty history");
  if (snapshots.size() != history.size()) {
    throw InputError("select_best: " + std::to_string(snapshots.size()) +
                     " snapshots for " + std::to_string(history.size()) + " epochs");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < history.size(); ++i) {
    if (history[i].dev_metrics.macro_f1 > history[best].dev_metrics.macro_f1) best = i;
  }
  return snapshots[best];
}

void validate_experiment_inputs(const SplitManifest& manifest,
                                std::span<const AcousticEmbedding> audio,
                                const ClassEmbeddingTable& classes) {
  if (manifest.folds.empty()) throw InputError("manifest has no folds");
  std::vector<std::string> species;
  const Fold& first = manifest.folds.front();
  species.insert(species.end(), first.train.begin(), first.train.end());
  species.insert(species.end(), first.dev.begin(), first.dev.end());
  species.insert(species.end(), first.test.begin(), first.test.end());
  validate_manifest(manifest, species);
  for (std::size_t i = 0; i < manifest.folds.size(); ++i) {
    const Fold& fold = manifest.folds[i];
    try {
      check_fold_inputs(fold, audio, classes);
    } catch (const InputError& e) {
      throw InputError(fold_name(i) + ": " + e.what());
    }
    if (samples_of(audio, fold.dev).empty() || samples_of(audio, fold.test).empty()) {
      throw InputError(fold_name(i) + ": dev or test species have no audio samples");
    }
  }
}

ExperimentResult run_experiment(const SplitManifest& manifest,
                                std::span<const AcousticEmbedding> audio,
                                const ClassEmbeddingTable& classes,
                                const TrainingConfig& cfg,
                                const ExperimentOptions& options) {
  cfg.validate();
  validate_experiment_inputs(manifest, audio, classes);
  const Trainer trainer = options.trainer ? options.trainer : Trainer(train);

  auto run_fold = [&](std::size_t i) {
    const Fold& fold = manifest.folds[i];
    TrainingResult trained = trainer(fold, audio, classes, cfg);
    FoldResult out;
    out.best_epoch = trained.best_epoch;
    out.history = std::move(trained.history);
    out.model = std::move(trained.best_model);
    const ClassEmbeddingTable dev_classes =
        classes.subset(dev_candidate_species(fold, cfg.dev_candidates));
    out.dev = evaluate(out.model, samples_of(audio, fold.dev), dev_classes).metrics;
    out.test = evaluate(out.model, samples_of(audio, fold.test),
                        classes.subset(fold.test)).metrics;
    return out;
  };

  ExperimentResult result;
  result.source = classes.source_name();
  if (options.parallel_folds) {
    std::vector<std::future<FoldResult>> pending;
    for (std::size_t i = 0; i < manifest.folds.size(); ++i) {
      pending.push_back(std::async(std::launch::async, run_fold, i));
    }
    for (auto& p : pending) result.folds.push_back(p.get());
  } else {
    for (std::size_t i = 0; i < manifest.folds.size(); ++i) {
      result.folds.push_back(run_fold(i));
    }
  }

  std::vector<MetricsReport> dev;
  std::vector<MetricsReport> test;
  for (const auto& f : result.folds) {
    dev.push_back(f.dev);
    test.push_back(f.test);
  }
  result.dev_mean = aggregate_splits(dev);
  result.test_mean = aggregate_splits(test);
  return result;
}

}  // namespace zsl
