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

#include "zsl/model.h"
#include "zsl/random.h"

namespace zsl {

namespace {

void check_length(Index expected, Index actual, const char* what) {
  if (expected != actual) {
    throw InputError(std::string(what) + ": expected length " +
                     std::to_string(expected) + ", got " + std::to_string(actual));
  }
}

void check_batch(const ProjectionModel& model, std::span<const SampleRef> batch,
                 const ClassEmbeddingTable& classes) {
  if (batch.empty()) throw InputError("warp loss: empty batch");
  if (classes.empty()) throw InputError("warp loss: empty class table");
  check_length(model.d_c(), classes.dim(), "warp loss: class embedding");
  for (const AcousticEmbedding& a : batch) {
    check_length(model.d_a(), a.vector.size(), "warp loss: acoustic embedding");
    if (!classes.contains(a.species_id)) {
      throw InputError("warp loss: sample '" + a.sample_id + "' has class '" +
                       a.species_id + "' which is not in table '" +
                       classes.source_name() + "'");
    }
  }
}

std::vector<SampleRef> as_refs(std::span<const AcousticEmbedding> batch) {
  return {batch.begin(), batch.end()};
}

// Shared kernel for loss and gradient. `gradient` may be null.
double accumulate_warp(const ProjectionModel& model, std::span<const SampleRef> batch,
                       const ClassEmbeddingTable& classes, Matrix* gradient) {
  check_batch(model, batch, classes);
  const Matrix& class_rows = classes.stacked();
  const auto n_classes = static_cast<std::size_t>(class_rows.rows());
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  if (gradient != nullptr) gradient->setZero(model.d_a(), model.d_c());

  double total = 0.0;
  Vector scores(class_rows.rows());
  Vector direction(model.d_c());
  for (const AcousticEmbedding& sample : batch) {
    const std::size_t t = classes.index_of(sample.species_id);
    scores.noalias() = class_rows * (model.weights.transpose() * sample.vector);
    const double true_score = scores[static_cast<Index>(t)];

    std::size_t rank = 0;
    double hinge_sum = 0.0;
    direction.setZero();
    for (std::size_t y = 0; y < n_classes; ++y) {
      if (y == t) continue;  // h(t, t) == 0
      const double h = 1.0 + scores[static_cast<Index>(y)] - true_score;
      if (h > 0.0) {
        ++rank;
        hinge_sum += h;
        direction += class_rows.row(static_cast<Index>(y)).transpose();
      }
    }
    if (rank == 0) continue;

    const double weight = rank_penalty(rank) / static_cast<double>(rank);
    total += weight * hinge_sum;
    if (gradient != nullptr) {
      direction -= static_cast<double>(rank) *
                   class_rows.row(static_cast<Index>(t)).transpose();
      gradient->noalias() += (weight * inv_n) * sample.vector * direction.transpose();
    }
  }
  return total * inv_n;
}

}  // namespace

ProjectionModel ProjectionModel::initialize(Index d_a, Index d_c, std::uint64_t seed) {
  if (d_a <= 0 || d_c <= 0) {
    throw InputError("projection model: dimensions must be positive, got " +
                     std::to_string(d_a) + "x" + std::to_string(d_c));
  }
  Rng rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(d_a));
  ProjectionModel model;
  model.weights.resize(d_a, d_c);
  // Row-major fill so the draw order matches the on-disk layout.
  for (Index i = 0; i < d_a; ++i) {
    for (Index j = 0; j < d_c; ++j) model.weights(i, j) = rng.uniform(-bound, bound);
  }
  model.seed = seed;
  model.trained_epochs = 0;
  return model;
}

void ProjectionModel::validate() const {
  if (d_a() <= 0 || d_c() <= 0) throw InputError("projection model: empty weights");
  if (!weights.allFinite()) throw InputError("projection model: non-finite weights");
  if (trained_epochs < 0) throw InputError("projection model: negative epoch count");
}

Vector project(const ProjectionModel& model, const Vector& acoustic) {
  check_length(model.d_a(), acoustic.size(), "project: acoustic embedding");
  return model.weights.transpose() * acoustic;
}

double compatibility(const Vector& projected, const Vector& class_vector) {
  check_length(projected.size(), class_vector.size(), "compatibility");
  return projected.dot(class_vector);
}

double rank_penalty(std::size_t r) {
  // Neumaier summation, largest terms first.
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t i = 1; i <= r; ++i) {
    const double term = 1.0 / static_cast<double>(i);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      carry += (sum - t) + term;
    } else {
      carry += (term - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

HingeTerm hinge(double true_score, double candidate_score, bool candidate_is_true) {
  HingeTerm term;
  term.margin_indicator = candidate_is_true ? 0 : 1;
  term.value = candidate_is_true
                   ? 0.0
                   : static_cast<double>(term.margin_indicator) + candidate_score - true_score;
  return term;
}

std::size_t rank_of_true_class(const std::map<std::string, double>& scores,
                               const std::string& true_class) {
  auto it = scores.find(true_class);
  if (it == scores.end()) {
    throw InputError("rank: true class '" + true_class + "' has no score");
  }
  std::size_t rank = 0;
  for (const auto& [id, score] : scores) {
    if (id != true_class && hinge(it->second, score, false).value > 0.0) ++rank;
  }
  return rank;
}

std::size_t rank_of_true_class(std::span<const double> scores, std::size_t true_index) {
  if (true_index >= scores.size()) {
    throw InputError("rank: true class index " + std::to_string(true_index) +
                     " out of range for " + std::to_string(scores.size()) + " scores");
  }
  std::size_t rank = 0;
  for (std::size_t y = 0; y < scores.size(); ++y) {
    if (y != true_index && hinge(scores[true_index], scores[y], false).value > 0.0) {
      ++rank;
    }
  }
  return rank;
}

double warp_loss(const ProjectionModel& model, std::span<const SampleRef> batch,
                 const ClassEmbeddingTable& classes) {
  return accumulate_warp(model, batch, classes, nullptr);
}

double warp_loss(const ProjectionModel& model, std::span<const AcousticEmbedding> batch,
                 const ClassEmbeddingTable& classes) {
  const auto refs = as_refs(batch);
  return accumulate_warp(model, refs, classes, nullptr);
}

Matrix warp_gradient(const ProjectionModel& model, std::span<const SampleRef> batch,
                     const ClassEmbeddingTable& classes) {
  Matrix gradient;
  accumulate_warp(model, batch, classes, &gradient);
  return gradient;
}

Matrix warp_gradient(const ProjectionModel& model,
                     std::span<const AcousticEmbedding> batch,
                     const ClassEmbeddingTable& classes) {
  const auto refs = as_refs(batch);
  return warp_gradient(model, refs, classes);
}

LossAndGradient warp_loss_and_gradient(const ProjectionModel& model,
                                       std::span<const SampleRef> batch,
                                       const ClassEmbeddingTable& classes) {
  LossAndGradient out;
  out.loss = accumulate_warp(model, batch, classes, &out.gradient);
  return out;
}

const std::string& predict(const ProjectionModel& model, const Vector& acoustic,
                           const ClassEmbeddingTable& candidates) {
  if (candidates.empty()) throw InputError("predict: empty candidate set");
  check_length(model.d_c(), candidates.dim(), "predict: class embedding");
  const Vector scores = candidates.stacked() * project(model, acoustic);
  std::size_t best = 0;
  for (std::size_t y = 1; y < candidates.size(); ++y) {
    const double s = scores[static_cast<Index>(y)];
    const double b = scores[static_cast<Index>(best)];
    if (s > b || (s == b && candidates.entry(y).species_id < candidates.entry(best).species_id)) {
      best = y;
    }
  }
  return candidates.entry(best).species_id;
}

}  // namespace zsl
