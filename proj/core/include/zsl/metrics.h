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

#ifndef ZSL_METRICS_H_
#define ZSL_METRICS_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace zsl {

struct PredictionRecord {
  std::string sample_id;
  std::string true_class;
  std::string predicted_class;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct MetricsReport {
  double acc = 0.0;
  double uar = 0.0;       // unweighted mean recall
  double macro_f1 = 0.0;  // unweighted mean F1
  std::map<std::string, ClassMetrics> per_class;  // empty for aggregates
};

// Accuracy, UAR and macro-F1 over `classes`. Every 0/0 (precision of a
// never-predicted class, recall of an unsupported class, F1 with P + R = 0)
// is taken as 0, and every listed class enters the averages. A prediction
// outside `classes` counts as an error but as no class's false positive.
// Throws InputError for empty records or a true class not in `classes`.
MetricsReport compute_metrics(std::span<const PredictionRecord> records,
                              const std::vector<std::string>& classes);

// Arithmetic mean of acc, uar and macro_f1; per_class is left empty.
MetricsReport aggregate_splits(std::span<const MetricsReport> reports);

}  // namespace zsl

#endif  // ZSL_METRICS_H_
