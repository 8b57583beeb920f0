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

#include <set>

#include "zsl/metrics.h"
#include "zsl/types.h"

namespace zsl {

namespace {

double safe_ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

}  // namespace

MetricsReport compute_metrics(std::span<const PredictionRecord> records,
                              const std::vector<std::string>& classes) {
  if (records.empty()) throw InputError("metrics: no prediction records");
  const std::set<std::string> class_set(classes.begin(), classes.end());
  if (class_set.empty()) throw InputError("metrics: empty class set");

  std::map<std::string, Counts> counts;
  for (const auto& c : class_set) counts[c];

  std::size_t correct = 0;
  for (const auto& rec : records) {
    auto truth = counts.find(rec.true_class);
    if (truth == counts.end()) {
      throw InputError("metrics: record '" + rec.sample_id + "' has unknown class '" +
                       rec.true_class + "'");
    }
    if (rec.predicted_class == rec.true_class) {
      ++correct;
      ++truth->second.tp;
      continue;
    }
    ++truth->second.fn;
    auto predicted = counts.find(rec.predicted_class);
    if (predicted != counts.end()) ++predicted->second.fp;
  }

  MetricsReport report;
  report.acc = safe_ratio(correct, records.size());
  double recall_sum = 0.0;
  double f1_sum = 0.0;
  for (const auto& [name, c] : counts) {
    ClassMetrics m;
    m.support = c.tp + c.fn;
    m.precision = safe_ratio(c.tp, c.tp + c.fp);
    m.recall = safe_ratio(c.tp, m.support);
    // 2PR / (P + R) == 2TP / (2TP + FP + FN), which avoids a second rounding.
    m.f1 = safe_ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
    recall_sum += m.recall;
    f1_sum += m.f1;
    report.per_class.emplace(name, m);
  }
  const auto k = static_cast<double>(counts.size());
  report.uar = recall_sum / k;
  report.macro_f1 = f1_sum / k;
  return report;
}

MetricsReport aggregate_splits(std::span<const MetricsReport> reports) {
  if (reports.empty()) throw InputError("aggregate: no reports");
  MetricsReport mean;
  for (const auto& r : reports) {
    mean.acc += r.acc;
    mean.uar += r.uar;
    mean.macro_f1 += r.macro_f1;
  }
  const auto n = static_cast<double>(reports.size());
  mean.acc /= n;
  mean.uar /= n;
  mean.macro_f1 /= n;
  return mean;
}

}  // namespace zsl
