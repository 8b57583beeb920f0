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

#ifndef ZSL_MODEL_H_
#define ZSL_MODEL_H_

// Linear acoustic-to-semantic projection, dot-product compatibility and the
// WARP-weighted ranking hinge loss used to train it.
//
// For a sample x with true class t, candidate scores are
//   s_y = (W^T a)^T c_y,
// the hinge for candidate y is h_y = [y != t] + s_y - s_t, the rank r is the
// number of candidates with h_y > 0 (strict), and the per-sample loss is
//   H(r) / r * sum_y max(0, h_y),   with H(0) / 0 := 0,
// where H(r) is the r-th harmonic number. Batch loss is the mean over samples.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "zsl/types.h"

namespace zsl {

/// Weight matrix W (d_a x d_c) plus provenance.
struct ProjectionModel {
  Matrix weights;
  std::uint64_t seed = 0;
  int trained_epochs = 0;

  Index d_a() const { return weights.rows(); }
  Index d_c() const { return weights.cols(); }

  /// I.i.d. uniform weights on [-1/sqrt(d_a), 1/sqrt(d_a)] drawn from `seed`.
  static ProjectionModel initialize(Index d_a, Index d_c, std::uint64_t seed);

  /// Throws InputError on non-positive shape or non-finite weights.
  void validate() const;
};

/// W^T a. Throws InputError when a has the wrong length.
Vector project(const ProjectionModel& model, const Vector& acoustic);
inline Vector project(const ProjectionModel& model, const AcousticEmbedding& a) {
  return project(model, a.vector);
}

/// Dot product of a projected embedding and a class embedding.
double compatibility(const Vector& projected, const Vector& class_vector);
inline double compatibility(const Vector& projected, const ClassEmbedding& c) {
  return compatibility(projected, c.vector);
}

/// Harmonic number H(r) = sum_{i=1}^{r} 1/i, with H(0) = 0. Uses compensated
/// summation so that large r stays within a few ulps of the exact value.
double rank_penalty(std::size_t r);

/// Margin term for one (sample, candidate) pair.
struct HingeTerm {
  int margin_indicator = 0;  // 0 iff candidate is the true class
  double value = 0.0;
};
HingeTerm hinge(double true_score, double candidate_score, bool candidate_is_true);

/// Number of classes y != true_class with 1 + scores[y] - scores[true] > 0.
std::size_t rank_of_true_class(const std::map<std::string, double>& scores,
                               const std::string& true_class);
/// Same, over a dense score vector.
std::size_t rank_of_true_class(std::span<const double> scores, std::size_t true_index);

/// Batch element; the true class is the sample's species_id.
using SampleRef = std::reference_wrapper<const AcousticEmbedding>;

struct LossAndGradient {
  double loss = 0.0;
  Matrix gradient;  // d_a x d_c
};

/// Mean WARP loss over the batch, scored against every class in `classes`.
double warp_loss(const ProjectionModel& model, std::span<const SampleRef> batch,
                 const ClassEmbeddingTable& classes);
double warp_loss(const ProjectionModel& model, std::span<const AcousticEmbedding> batch,
                 const ClassEmbeddingTable& classes);

/// d(loss)/dW with the rank weight H(r)/r held constant: each active hinge
/// (n, y) contributes (H(r_n)/r_n / N) * a_n (c_y - c_{t_n})^T.
Matrix warp_gradient(const ProjectionModel& model, std::span<const SampleRef> batch,
                     const ClassEmbeddingTable& classes);
Matrix warp_gradient(const ProjectionModel& model,
                     std::span<const AcousticEmbedding> batch,
                     const ClassEmbeddingTable& classes);

/// Loss and gradient in one pass; what the trainer calls.
LossAndGradient warp_loss_and_gradient(const ProjectionModel& model,
                                       std::span<const SampleRef> batch,
                                       const ClassEmbeddingTable& classes);

/// Highest-compatibility candidate; ties go to the lexicographically smallest
/// species id. Throws InputError when `candidates` is empty.
const std::string& predict(const ProjectionModel& model, const Vector& acoustic,
                           const ClassEmbeddingTable& candidates);
inline const std::string& predict(const ProjectionModel& model,
                                  const AcousticEmbedding& a,
                                  const ClassEmbeddingTable& candidates) {
  return predict(model, a.vector, candidates);
}

}  // namespace zsl

#endif  // ZSL_MODEL_H_
