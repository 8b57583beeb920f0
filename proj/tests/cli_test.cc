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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "commands.h"
#include "zsl/io.h"

namespace zsl::cli {
namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("zsl_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string species_name(int i) { return "Species " + std::to_string(1000 + i); }

// Trait table in the shape of a bird trait database: identity columns, a
// numeric trait, a categorical trait, a sparse column and an empty column.
void write_trait_table(const fs::path& path, int rows) {
  std::ofstream out(path);
  out << "species,Species1,Family1,Mass,Habitat,Beak.Depth,Notes\n";
  const char* habitats[] = {"Forest", "Wetland", "Grassland"};
  for (int i = 0; i < rows; ++i) {
    out << '"' << species_name(i) << "\"," << species_name(i) << ",Fam" << i % 7 << ','
        << 10.0 + 3.5 * i << ',' << (i % 13 == 5 ? "NA" : habitats[i % 3]) << ','
        << (i % 2 == 0 ? "NA" : std::to_string(i)) << ",\n";
  }
}

void write_synth(const fs::path& dir, std::size_t species) {
  SynthArgs args;
  args.species = species;
  args.samples_per_species = 8;
  args.class_dim = 8;
  args.audio_dim = 12;
  args.out = dir;
  std::ostringstream log;
  cmd_synth(args, log);
}

TEST(NamedPathTest, Parses) {
  const auto np = parse_named_path("avonet=data/avonet.emb");
  EXPECT_EQ(np.name, "avonet");
  EXPECT_EQ(np.path, fs::path("data/avonet.emb"));
  EXPECT_THROW(parse_named_path("avonet"), InputError);
  EXPECT_THROW(parse_named_path("=x"), InputError);
  EXPECT_THROW(parse_named_path("a+b=x"), InputError);
}

TEST(PreprocessCommandTest, DropsSparseColumnsAndRecordsThem) {
  const auto dir = scratch_dir("preprocess");
  write_trait_table(dir / "traits.csv", 95);
  std::ofstream(dir / "exclude.txt") << "Species1\nFamily1\nNotThere\n";
  PreprocessArgs args;
  args.input = dir / "traits.csv";
  args.name = "traits";
  args.exclude_columns = dir / "exclude.txt";
  args.out = dir / "out";
  std::ostringstream log;
  cmd_preprocess(args, log);

  const auto file = read_embedding_file(dir / "out" / "traits.emb");
  EXPECT_EQ(file.dim, 2);
  EXPECT_EQ(file.rows.size(), 95u);
  EXPECT_EQ(file.rows[0].id, species_name(0));
  ASSERT_EQ(file.comments.size(), 2u);
  EXPECT_EQ(file.comments[1], "columns: Mass;Habitat");
  for (const auto& row : file.rows) {
    EXPECT_GE(row.vector.minCoeff(), 0.0);
    EXPECT_LE(row.vector.maxCoeff(), 1.0);
  }
  EXPECT_EQ(file.rows[0].vector[0], 0.0);
  EXPECT_EQ(file.rows[94].vector[0], 1.0);

  const auto audit = slurp(dir / "out" / "traits.audit.json");
  EXPECT_NE(audit.find("Beak.Depth"), std::string::npos);
  EXPECT_NE(audit.find("Notes"), std::string::npos);
  EXPECT_NE(audit.find("NotThere"), std::string::npos);
}

TEST(PreprocessCommandTest, NormalizedInputPassesThroughUnchanged) {
  const auto dir = scratch_dir("normalized");
  {
    std::ofstream out(dir / "t.csv");
    out << "species,a,b\n";
    for (int i = 0; i <= 4; ++i) out << "s" << i << ',' << i / 4.0 << ',' << (i % 2) << '\n';
  }
  PreprocessArgs args;
  args.input = dir / "t.csv";
  args.name = "t";
  args.out = dir;
  std::ostringstream log;
  cmd_preprocess(args, log);
  const auto file = read_embedding_file(dir / "t.emb");
  for (int i = 0; i <= 4; ++i) {
    EXPECT_EQ(file.rows[i].vector[0], i / 4.0);
    EXPECT_EQ(file.rows[i].vector[1], static_cast<double>(i % 2));
  }
}

TEST(PreprocessCommandTest, EmbeddingsPassThrough) {
  const auto dir = scratch_dir("embeddings");
  std::ofstream(dir / "bert.txt") << "id,label,dim\nsp_a,,0.25,-1\nsp_b,,3,4\n";
  PreprocessArgs args;
  args.input = dir / "bert.txt";
  args.name = "bert";
  args.kind = InputKind::kEmbeddings;
  args.out = dir;
  std::ostringstream log;
  cmd_preprocess(args, log);
  const auto table = read_class_table(dir / "bert.emb", "bert");
  EXPECT_EQ(table.at("sp_a").vector[0], 0.25);
  EXPECT_EQ(table.at("sp_b").vector[1], 4.0);
}

TEST(SplitCommandTest, WritesReproducibleManifest) {
  const auto dir = scratch_dir("split");
  write_synth(dir, 95);
  SplitArgs args;
  args.audio_embeddings = dir / "audio.emb";
  args.seed = 17;
  args.out = dir / "a";
  std::ostringstream log;
  cmd_split(args, log);
  args.out = dir / "b";
  cmd_split(args, log);
  const auto first = slurp(dir / "a" / "manifest.json");
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, slurp(dir / "b" / "manifest.json"));
  EXPECT_NE(log.str().find("fold 0: train 76, dev 10, test 9"), std::string::npos);

  const auto m = read_manifest(dir / "a" / "manifest.json");
  EXPECT_EQ(m.seed, 17u);
}

TEST(SplitCommandTest, TooFewSpecies) {
  const auto dir = scratch_dir("split_small");
  write_synth(dir, 10);
  SplitArgs args;
  args.audio_embeddings = dir / "audio.emb";
  args.out = dir;
  std::ostringstream log;
  EXPECT_THROW(cmd_split(args, log), InputError);
  EXPECT_FALSE(fs::exists(dir / "manifest.json"));
}

TrainEvalArgs train_eval_args(const fs::path& dir, const fs::path& out) {
  TrainEvalArgs args;
  args.audio_embeddings = dir / "audio.emb";
  args.class_sources = {{"a", dir / "classes.part1.emb"}, {"b", dir / "classes.part2.emb"}};
  args.concat = {"a+b"};
  args.training.epochs = 3;
  args.training.learning_rate = 0.01;
  args.out = out;
  return args;
}

TEST(TrainEvalCommandTest, ReportsEverySource) {
  const auto dir = scratch_dir("train_eval");
  write_synth(dir, 24);
  std::ostringstream log;
  cmd_train_eval(train_eval_args(dir, dir / "run"), log);

  const auto text = slurp(dir / "run" / "report.txt");
  EXPECT_NE(text.find("[a]"), std::string::npos);
  EXPECT_NE(text.find("[b]"), std::string::npos);
  EXPECT_NE(text.find("[a+b]"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "run" / "manifest.json"));
  EXPECT_TRUE(fs::exists(dir / "run" / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "run" / "history.jsonl"));
  for (const char* source : {"a", "b", "a+b"}) {
    for (int f = 0; f < 5; ++f) {
      const auto path =
          dir / "run" / "models" / source / ("fold" + std::to_string(f) + ".model");
      ASSERT_TRUE(fs::exists(path)) << path;
    }
  }
  const auto model = read_model(dir / "run" / "models" / "a+b" / "fold0.model");
  EXPECT_EQ(model.d_a(), 12);
  EXPECT_EQ(model.d_c(), 8);
  EXPECT_NE(log.str().find("best source by test F1"), std::string::npos);
}

TEST(TrainEvalCommandTest, ByteIdenticalReruns) {
  const auto dir = scratch_dir("rerun");
  write_synth(dir, 24);
  std::ostringstream log;
  cmd_train_eval(train_eval_args(dir, dir / "one"), log);
  auto args = train_eval_args(dir, dir / "two");
  args.manifest = dir / "one" / "manifest.json";
  cmd_train_eval(args, log);
  args.out = dir / "three";
  args.parallel_folds = true;
  cmd_train_eval(args, log);
  for (const char* file : {"report.json", "report.txt", "history.jsonl"}) {
    EXPECT_EQ(slurp(dir / "one" / file), slurp(dir / "two" / file)) << file;
    EXPECT_EQ(slurp(dir / "one" / file), slurp(dir / "three" / file)) << file;
  }
}

TEST(TrainEvalCommandTest, ZeroEpochsRuns) {
  const auto dir = scratch_dir("zero_epochs");
  write_synth(dir, 24);
  auto args = train_eval_args(dir, dir / "run");
  args.training.epochs = 0;
  std::ostringstream log;
  cmd_train_eval(args, log);
  const auto model = read_model(dir / "run" / "models" / "a" / "fold3.model");
  EXPECT_EQ(model.trained_epochs, 0);
  EXPECT_EQ(model.weights, ProjectionModel::initialize(12, 4, 0).weights);
}

TEST(TrainEvalCommandTest, MissingSpeciesFailsBeforeWriting) {
  const auto dir = scratch_dir("missing");
  write_synth(dir, 24);
  // Drop one species from source b.
  auto file = read_embedding_file(dir / "classes.part2.emb");
  const std::string removed = file.rows.back().id;
  file.rows.pop_back();
  write_embedding_file(dir / "classes.part2.emb", file);

  std::ostringstream log;
  try {
    cmd_train_eval(train_eval_args(dir, dir / "run"), log);
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find(removed), std::string::npos) << e.what();
  }
  EXPECT_FALSE(fs::exists(dir / "run"));
}

TEST(TrainEvalCommandTest, RejectsBadArguments) {
  const auto dir = scratch_dir("bad_args");
  write_synth(dir, 24);
  std::ostringstream log;
  auto args = train_eval_args(dir, dir / "run");
  args.concat = {"a+c"};
  EXPECT_THROW(cmd_train_eval(args, log), InputError);
  args = train_eval_args(dir, dir / "run");
  args.training.batch_size = 0;
  EXPECT_THROW(cmd_train_eval(args, log), InputError);
  args = train_eval_args(dir, dir / "run");
  args.class_sources.clear();
  EXPECT_THROW(cmd_train_eval(args, log), InputError);
  EXPECT_FALSE(fs::exists(dir / "run"));
}

std::vector<std::vector<std::string>> read_grid(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> grid;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    grid.push_back(row);
  }
  return grid;
}

TEST(SimilarityCommandTest, IdenticalAndOrthonormalVectors) {
  const auto dir = scratch_dir("similarity");
  std::ofstream(dir / "same.emb") << "id,label,3\nx,,1,2,3\ny,,1,2,3\nz,,1,2,3\n";
  std::ofstream(dir / "basis.emb") << "id,label,3\nx,,1,0,0\ny,,0,1,0\nz,,0,0,1\n";
  std::ostringstream log;
  cmd_similarity({{"same", dir / "same.emb"}, dir}, log);
  cmd_similarity({{"basis", dir / "basis.emb"}, dir}, log);
  const auto same = read_grid(dir / "same.similarity.csv");
  const auto basis = read_grid(dir / "basis.similarity.csv");
  ASSERT_EQ(same.size(), 4u);
  EXPECT_EQ(same[0], (std::vector<std::string>{"species", "x", "y", "z"}));
  for (std::size_t i = 1; i < 4; ++i) {
    for (std::size_t j = 1; j < 4; ++j) {
      EXPECT_EQ(std::stod(same[i][j]), 1.0);
      EXPECT_EQ(std::stod(basis[i][j]), i == j ? 1.0 : 0.0);
    }
  }
}

TEST(SimilarityCommandTest, FullSizeGridIsSymmetric) {
  const auto dir = scratch_dir("similarity_full");
  write_trait_table(dir / "traits.csv", 95);
  PreprocessArgs pre;
  pre.input = dir / "traits.csv";
  pre.name = "traits";
  pre.out = dir;
  std::ostringstream log;
  cmd_preprocess(pre, log);
  cmd_similarity({{"traits", dir / "traits.emb"}, dir}, log);
  const auto grid = read_grid(dir / "traits.similarity.csv");
  ASSERT_EQ(grid.size(), 96u);
  for (std::size_t i = 1; i < 96; ++i) {
    ASSERT_EQ(grid[i].size(), 96u);
    EXPECT_EQ(grid[i][0], grid[0][i]);
    for (std::size_t j = 1; j < 96; ++j) EXPECT_EQ(grid[i][j], grid[j][i]);
  }
}

}  // namespace
}  // namespace zsl::cli
