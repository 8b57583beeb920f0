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

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.h"
#include "zsl/types.h"

namespace {

using namespace zsl::cli;

zsl::LossClassScope parse_loss_scope(const std::string& s) {
  if (s == "all") return zsl::LossClassScope::kAllTraining;
  if (s == "batch") return zsl::LossClassScope::kBatchLocal;
  throw zsl::InputError("--loss-classes must be 'all' or 'batch'");
}

zsl::DevCandidateScope parse_dev_scope(const std::string& s) {
  if (s == "dev") return zsl::DevCandidateScope::kDevOnly;
  if (s == "train+dev") return zsl::DevCandidateScope::kTrainAndDev;
  throw zsl::InputError("--dev-candidates must be 'dev' or 'train+dev'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero-shot audio classification with metadata class embeddings"};
  app.require_subcommand(1);

  PreprocessArgs pre;
  std::string pre_kind = "attributes";
  std::string pre_delim = ",";
  std::string pre_exclude;
  auto* preprocess = app.add_subcommand(
      "preprocess", "Normalise an attribute table or validate an embedding dump");
  preprocess->add_option("--input", pre.input, "Attribute table or embedding file")
      ->required()->check(CLI::ExistingFile);
  preprocess->add_option("--name", pre.name, "Source name used for output files")->required();
  preprocess->add_option("--kind", pre_kind, "attributes | embeddings")
      ->check(CLI::IsMember({"attributes", "embeddings"}));
  preprocess->add_option("--max-missing", pre.max_missing,
                         "Drop columns with more missing cells than this");
  preprocess->add_option("--exclude-columns", pre_exclude,
                         "File listing columns to remove first")
      ->check(CLI::ExistingFile);
  preprocess->add_option("--delimiter", pre_delim, "Attribute table field delimiter");
  preprocess->add_option("--out", pre.out, "Output directory")->required();

  SplitArgs split;
  std::string split_manifest;
  auto* split_cmd = app.add_subcommand("split", "Create five disjoint species folds");
  split_cmd->add_option("--audio-embeddings", split.audio_embeddings)
      ->required()->check(CLI::ExistingFile);
  split_cmd->add_option("--seed", split.seed);
  split_cmd->add_option("--manifest", split_manifest, "Manifest output path");
  split_cmd->add_option("--out", split.out, "Output directory");

  TrainEvalArgs te;
  std::vector<std::string> te_sources;
  std::string te_manifest;
  std::string te_loss = "all";
  std::string te_dev = "dev";
  auto* train_eval = app.add_subcommand(
      "train-eval", "Train and evaluate every class source on every fold");
  train_eval->add_option("--audio-embeddings", te.audio_embeddings)
      ->required()->check(CLI::ExistingFile);
  train_eval->add_option("--class-source", te_sources, "NAME=PATH (repeatable)")->required();
  train_eval->add_option("--concat", te.concat, "NAME1+NAME2 (repeatable)");
  train_eval->add_option("--manifest", te_manifest, "Split manifest")
      ->check(CLI::ExistingFile);
  train_eval->add_option("--epochs", te.training.epochs)->capture_default_str();
  train_eval->add_option("--lr", te.training.learning_rate)->capture_default_str();
  train_eval->add_option("--batch-size", te.training.batch_size)->capture_default_str();
  train_eval->add_option("--seed", te.training.seed)->capture_default_str();
  train_eval->add_option("--loss-classes", te_loss, "all | batch");
  train_eval->add_option("--dev-candidates", te_dev, "dev | train+dev");
  train_eval->add_flag("--parallel-folds", te.parallel_folds);
  train_eval->add_option("--out", te.out, "Output directory")->required();

  SimilarityArgs sim;
  std::string sim_source;
  auto* similarity =
      app.add_subcommand("similarity", "Pairwise cosine similarities of a class table");
  similarity->add_option("--class-source", sim_source, "NAME=PATH")->required();
  similarity->add_option("--out", sim.out, "Output directory")->required();

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic zero-shot task");
  synth_cmd->add_option("--species", synth.species)->capture_default_str();
  synth_cmd->add_option("--samples", synth.samples_per_species)->capture_default_str();
  synth_cmd->add_option("--class-dim", synth.class_dim)->capture_default_str();
  synth_cmd->add_option("--audio-dim", synth.audio_dim)->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise)->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*preprocess) {
      pre.kind = pre_kind == "embeddings" ? InputKind::kEmbeddings : InputKind::kAttributes;
      if (pre_delim == "\\t" || pre_delim == "tab") pre_delim = "\t";
      if (pre_delim.size() != 1) throw zsl::InputError("--delimiter must be one character");
      pre.delimiter = pre_delim.front();
      if (!pre_exclude.empty()) pre.exclude_columns = pre_exclude;
      cmd_preprocess(pre, std::cerr);
    } else if (*split_cmd) {
      if (!split_manifest.empty()) split.manifest = split_manifest;
      cmd_split(split, std::cout);
    } else if (*train_eval) {
      for (const auto& s : te_sources) te.class_sources.push_back(parse_named_path(s));
      if (!te_manifest.empty()) te.manifest = te_manifest;
      te.training.loss_classes = parse_loss_scope(te_loss);
      te.training.dev_candidates = parse_dev_scope(te_dev);
      cmd_train_eval(te, std::cout);
    } else if (*similarity) {
      sim.source = parse_named_path(sim_source);
      cmd_similarity(sim, std::cerr);
    } else if (*synth_cmd) {
      cmd_synth(synth, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
