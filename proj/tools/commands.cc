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

#include "commands.h"

#include <algorithm>
#include <map>
#include <ostream>
#include <sstream>

#include "zsl/io.h"
#include "zsl/metadata.h"
#include "zsl/synthetic.h"

namespace zsl::cli {

namespace {

std::vector<std::string> split_plus(const std::string& spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = spec.find('+', start);
    parts.push_back(spec.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<std::string> species_of(const std::vector<AcousticEmbedding>& audio) {
  std::vector<std::string> species;
  for (const auto& a : audio) species.push_back(a.species_id);
  std::sort(species.begin(), species.end());
  species.erase(std::unique(species.begin(), species.end()), species.end());
  return species;
}

void report_warnings(const EmbeddingFile& file, std::ostream& log) {
  for (const auto& w : file.warnings) log << "warning: " << w << '\n';
}

// Halves of each class vector, used to fake two metadata sources.
ClassEmbeddingTable slice_table(const ClassEmbeddingTable& table, Index start, Index len,
                                const std::string& name) {
  std::vector<ClassEmbedding> entries;
  for (const auto& e : table.entries()) {
    entries.push_back({e.species_id, e.vector.segment(start, len)});
  }
  return ClassEmbeddingTable(name, std::move(entries));
}

}  // namespace

NamedPath parse_named_path(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw InputError("expected NAME=PATH, got '" + spec + "'");
  }
  NamedPath np{spec.substr(0, eq), spec.substr(eq + 1)};
  if (np.name.find('+') != std::string::npos) {
    throw InputError("source name '" + np.name + "' must not contain '+'");
  }
  return np;
}

void cmd_preprocess(const PreprocessArgs& args, std::ostream& log) {
  if (args.name.empty()) throw InputError("preprocess: --name is required");
  EmbeddingFile output;
  std::string audit;
  if (args.kind == InputKind::kAttributes) {
    PreprocessOptions options;
    options.source_name = args.name;
    options.max_missing = args.max_missing;
    if (args.exclude_columns) options.excluded_columns = read_name_list(*args.exclude_columns);
    const auto raw = read_attribute_table(args.input, args.delimiter);
    auto result = preprocess_attributes(raw, options);
    for (const auto& w : result.audit.warnings) log << "warning: " << w << '\n';
    output = to_embedding_file(result.table);
    std::string columns;
    for (const auto& c : result.audit.kept_columns) columns += (columns.empty() ? "" : ";") + c;
    output.comments = {"source: " + args.name, "columns: " + columns};
    audit = audit_to_json(result.audit, args.name);
  } else {
    // Text embeddings are taken as they are; only validated.
    const auto file = read_embedding_file(args.input);
    report_warnings(file, log);
    const auto table = class_table_from_file(file, args.name, args.input.string());
    output = to_embedding_file(table);
    output.comments = {"source: " + args.name};
    PreprocessAudit empty;
    empty.warnings = file.warnings;
    audit = audit_to_json(empty, args.name);
  }
  write_embedding_file(args.out / (args.name + ".emb"), output);
  write_text_file(args.out / (args.name + ".audit.json"), audit);
}

void cmd_split(const SplitArgs& args, std::ostream& log) {
  const auto file = read_embedding_file(args.audio_embeddings);
  report_warnings(file, log);
  const auto audio = audio_from_file(file, args.audio_embeddings.string());
  const auto manifest = make_splits(species_of(audio), args.seed);
  write_manifest(args.manifest.value_or(args.out / "manifest.json"), manifest);
  for (std::size_t i = 0; i < manifest.folds.size(); ++i) {
    const auto& f = manifest.folds[i];
    log << "fold " << i << ": train " << f.train.size() << ", dev " << f.dev.size()
        << ", test " << f.test.size() << '\n';
  }
}

void cmd_train_eval(const TrainEvalArgs& args, std::ostream& log) {
  args.training.validate();
  if (args.class_sources.empty()) {
    throw InputError("train-eval: at least one --class-source is required");
  }

  // Load and validate everything before computing or writing.
  const auto audio_file = read_embedding_file(args.audio_embeddings);
  report_warnings(audio_file, log);
  const auto audio = audio_from_file(audio_file, args.audio_embeddings.string());

  std::vector<ClassEmbeddingTable> tables;
  std::map<std::string, std::size_t> by_name;
  for (const auto& src : args.class_sources) {
    if (by_name.count(src.name) != 0) {
      throw InputError("train-eval: duplicate source name '" + src.name + "'");
    }
    const auto file = read_embedding_file(src.path);
    report_warnings(file, log);
    by_name[src.name] = tables.size();
    tables.push_back(class_table_from_file(file, src.name, src.path.string()));
  }
  for (const auto& spec : args.concat) {
    std::vector<ClassEmbeddingTable> parts;
    for (const auto& name : split_plus(spec)) {
      auto it = by_name.find(name);
      if (it == by_name.end()) {
        throw InputError("--concat " + spec + ": unknown source '" + name + "'");
      }
      parts.push_back(tables[it->second]);
    }
    tables.push_back(concat_tables(parts));
  }

  const bool generated_manifest = !args.manifest.has_value();
  const SplitManifest manifest = generated_manifest
                                     ? make_splits(species_of(audio), args.training.seed)
                                     : read_manifest(*args.manifest);
  for (const auto& table : tables) {
    try {
      validate_experiment_inputs(manifest, audio, table);
    } catch (const InputError& e) {
      throw InputError("source '" + table.source_name() + "': " + e.what());
    }
  }

  ExperimentOptions options;
  options.parallel_folds = args.parallel_folds;
  std::vector<ExperimentResult> results;
  for (const auto& table : tables) {
    try {
      results.push_back(run_experiment(manifest, audio, table, args.training, options));
    } catch (const InputError& e) {
      throw InputError("source '" + table.source_name() + "': " + e.what());
    }
  }

  std::ostringstream history;
  for (const auto& r : results) write_epoch_history(history, r);
  const std::string text = report_to_text(results);

  if (generated_manifest) write_manifest(args.out / "manifest.json", manifest);
  for (const auto& r : results) {
    for (std::size_t f = 0; f < r.folds.size(); ++f) {
      write_model(args.out / "models" / r.source / ("fold" + std::to_string(f) + ".model"),
                  r.folds[f].model);
    }
  }
  write_text_file(args.out / "history.jsonl", history.str());
  write_text_file(args.out / "report.json", report_to_json(results));
  write_text_file(args.out / "report.txt", text);

  log << text;
  const auto best = std::max_element(
      results.begin(), results.end(), [](const auto& a, const auto& b) {
        return a.test_mean.macro_f1 < b.test_mean.macro_f1;
      });
  log << "best source by test F1: " << best->source << " ("
      << format_table_value(best->test_mean.macro_f1) << ")\n";
}

void cmd_similarity(const SimilarityArgs& args, std::ostream& log) {
  const auto file = read_embedding_file(args.source.path);
  report_warnings(file, log);
  const auto table = class_table_from_file(file, args.source.name, args.source.path.string());
  const auto matrix = cosine_similarity_matrix(table);
  for (const auto& id : matrix.zero_vectors) {
    log << "warning: species '" << id << "' has an all-zero vector; similarities set to 0\n";
  }
  std::ostringstream grid;
  write_similarity_grid(grid, matrix);
  write_text_file(args.out / (args.source.name + ".similarity.csv"), grid.str());
}

void cmd_synth(const SynthArgs& args, std::ostream& log) {
  SyntheticTaskConfig cfg;
  cfg.num_species = args.species;
  cfg.samples_per_species = args.samples_per_species;
  cfg.class_dim = args.class_dim;
  cfg.audio_dim = args.audio_dim;
  cfg.noise = args.noise;
  cfg.seed = args.seed;
  if (cfg.class_dim < 2) throw InputError("synth: class dimension must be at least 2");
  const auto task = make_synthetic_task(cfg);
  const Index half = cfg.class_dim / 2;
  write_embedding_file(args.out / "audio.emb", to_embedding_file(task.audio));
  write_embedding_file(args.out / "classes.emb", to_embedding_file(task.classes));
  write_embedding_file(args.out / "classes.part1.emb",
                       to_embedding_file(slice_table(task.classes, 0, half, "part1")));
  write_embedding_file(
      args.out / "classes.part2.emb",
      to_embedding_file(slice_table(task.classes, half, cfg.class_dim - half, "part2")));
  log << "wrote " << task.audio.size() << " samples of " << cfg.num_species
      << " species to " << args.out.string() << '\n';
}

}  // namespace zsl::cli
