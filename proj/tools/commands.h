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

#ifndef ZSL_TOOLS_COMMANDS_H_
#define ZSL_TOOLS_COMMANDS_H_

// Subcommands of the `zsl` tool. Each one reads and validates every input
// before it writes anything, and throws on failure.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zsl/experiment.h"
#include "zsl/metadata.h"

namespace zsl::cli {

namespace fs = std::filesystem;

struct NamedPath {
  std::string name;
  fs::path path;
};

/// Parses "NAME=PATH".
NamedPath parse_named_path(const std::string& spec);

enum class InputKind { kAttributes, kEmbeddings };

struct PreprocessArgs {
  fs::path input;
  std::string name;
  InputKind kind = InputKind::kAttributes;
  std::size_t max_missing = kDefaultMaxMissing;
  std::optional<fs::path> exclude_columns;
  char delimiter = ',';
  fs::path out;
};

/// Writes <out>/<name>.emb and <out>/<name>.audit.json.
void cmd_preprocess(const PreprocessArgs& args, std::ostream& log);

struct SplitArgs {
  fs::path audio_embeddings;
  std::uint64_t seed = 0;
  /// Defaults to <out>/manifest.json.
  std::optional<fs::path> manifest;
  fs::path out = ".";
};

void cmd_split(const SplitArgs& args, std::ostream& log);

struct TrainEvalArgs {
  fs::path audio_embeddings;
  std::vector<NamedPath> class_sources;
  /// Each entry is "NAME1+NAME2[+...]" over names in class_sources.
  std::vector<std::string> concat;
  /// When absent the splits are generated from training.seed and written
  /// to <out>/manifest.json.
  std::optional<fs::path> manifest;
  TrainingConfig training;
  bool parallel_folds = false;
  fs::path out;
};

/// Writes report.json, report.txt, history.jsonl and
/// models/<source>/fold<i>.model under `out`.
void cmd_train_eval(const TrainEvalArgs& args, std::ostream& log);

struct SimilarityArgs {
  NamedPath source;
  fs::path out;
};

/// Writes <out>/<name>.similarity.csv.
void cmd_similarity(const SimilarityArgs& args, std::ostream& log);

struct SynthArgs {
  std::size_t species = 30;
  std::size_t samples_per_species = 40;
  long class_dim = 16;
  long audio_dim = 32;
  double noise = 0.1;
  std::uint64_t seed = 0;
  fs::path out;
};

/// Writes audio.emb, classes.emb and the two halves of the class vectors as
/// classes.part1.emb / classes.part2.emb.
void cmd_synth(const SynthArgs& args, std::ostream& log);

}  // namespace zsl::cli

#endif  // ZSL_TOOLS_COMMANDS_H_
