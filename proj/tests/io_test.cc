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
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "zsl/experiment.h"
#include "zsl/io.h"
#include "zsl/random.h"

namespace zsl {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("zsl_io_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

EmbeddingFile parse(const std::string& text) {
  std::istringstream in(text);
  return parse_embedding_file(in, "mem");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

TEST(FormatTest, Doubles) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.0), "-2");
  EXPECT_EQ(format_table_value(0.2334), ".233");
  EXPECT_EQ(format_table_value(1.0), "1.000");
  EXPECT_EQ(format_table_value(0.0), ".000");
}

TEST(FormatTest, ShortestFormRoundTrips) {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.uniform_index(80)) - 40);
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(std::strtod(format_double(std::numeric_limits<double>::denorm_min()).c_str(), nullptr),
            std::numeric_limits<double>::denorm_min());
}

TEST(EmbeddingFileTest, ParsesHeaderCommentsAndRows) {
  const auto f = parse("# made by hand\nid,label,2\nr1,sp_a,1,2.5\n\nr2,\"sp, b\",-1e-3,0\n");
  EXPECT_EQ(f.dim, 2);
  ASSERT_EQ(f.comments.size(), 1u);
  EXPECT_EQ(f.comments[0], "made by hand");
  ASSERT_EQ(f.rows.size(), 2u);
  EXPECT_EQ(f.rows[1].label, "sp, b");
  EXPECT_EQ(f.rows[1].vector[0], -1e-3);
  EXPECT_TRUE(f.warnings.empty());
}

TEST(EmbeddingFileTest, LiteralDimHeaderInfersWidth) {
  const auto f = parse("id,label,dim\nx,,1,2,3\ny,,4,5,6\n");
  EXPECT_EQ(f.dim, 3);
  EXPECT_EQ(f.rows.size(), 2u);
  EXPECT_NE(error_of("id,label,dim\nx,,1,2,3\ny,,4,5\n"), "");
}

TEST(EmbeddingFileTest, ErrorsCarryLineAndColumn) {
  EXPECT_EQ(error_of("id,label,2\nr1,a,1,zz\n"), "mem:2:4: invalid number 'zz'");
  EXPECT_EQ(error_of("id,label,2\nr1,a,1\n"), "mem:2:3: expected 4 fields, found 3");
  EXPECT_EQ(error_of("id,lbl,2\n"), "mem:1:1: expected header 'id,label,<dim>'");
  EXPECT_EQ(error_of("id,label,0\n"), "mem:1:3: invalid dimension '0'");
  EXPECT_EQ(error_of("id,label,2\n,a,1,2\n"), "mem:2:1: empty id");
  EXPECT_EQ(error_of("# only a comment\n"), "mem: missing header line");
  EXPECT_EQ(error_of("id,label,1\n\"r1,a,1\n"), "mem:2:1: unterminated quote");
}

TEST(EmbeddingFileTest, DuplicateIdsWarn) {
  const auto f = parse("id,label,1\nr1,a,1\nr1,a,2\n");
  ASSERT_EQ(f.warnings.size(), 1u);
  EXPECT_NE(f.warnings[0].find("duplicate id 'r1'"), std::string::npos);
}

TEST(EmbeddingFileTest, RoundTripIsExact) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    EmbeddingFile f;
    f.dim = 1 + static_cast<Index>(rng.uniform_index(8));
    f.comments = {"trial " + std::to_string(trial)};
    const std::size_t rows = 1 + rng.uniform_index(10);
    for (std::size_t r = 0; r < rows; ++r) {
      EmbeddingRow row{"s" + std::to_string(r), "sp" + std::to_string(r % 3), Vector(f.dim)};
      for (Index j = 0; j < f.dim; ++j) row.vector[j] = rng.normal() * std::pow(10.0, rng.uniform(-8, 8));
      f.rows.push_back(row);
    }
    std::ostringstream out;
    write_embedding_file(out, f);
    const auto back = parse(out.str());
    ASSERT_EQ(back.dim, f.dim);
    EXPECT_EQ(back.comments, f.comments);
    ASSERT_EQ(back.rows.size(), f.rows.size());
    for (std::size_t r = 0; r < rows; ++r) {
      EXPECT_EQ(back.rows[r].id, f.rows[r].id);
      EXPECT_EQ(back.rows[r].label, f.rows[r].label);
      EXPECT_EQ(back.rows[r].vector, f.rows[r].vector);
    }
  }
}

TEST(EmbeddingFileTest, AudioAndClassViews) {
  const auto f = parse("id,label,2\nr1,sp_a,1,0\nr2,sp_b,0,1\n");
  const auto audio = audio_from_file(f, "mem");
  ASSERT_EQ(audio.size(), 2u);
  EXPECT_EQ(audio[1].sample_id, "r2");
  EXPECT_EQ(audio[1].species_id, "sp_b");

  // Class files key on the id column.
  const auto table = class_table_from_file(f, "src", "mem");
  EXPECT_EQ(table.source_name(), "src");
  EXPECT_TRUE(table.contains("r1"));
  EXPECT_THROW(class_table_from_file(parse("id,label,1\nr1,,1\nr1,,2\n"), "src", "mem"),
               InputError);

  EXPECT_THROW(audio_from_file(parse("id,label,1\nr1,,1\n"), "mem"), InputError);
}

TEST(EmbeddingFileTest, FileRoundTrip) {
  const auto dir = scratch_dir("emb");
  std::vector<ClassEmbedding> entries = {{"a", Vector::LinSpaced(3, 0.1, 0.3)},
                                         {"b", Vector::Constant(3, -1.0 / 3.0)}};
  const ClassEmbeddingTable table("t", entries);
  write_embedding_file(dir / "nested" / "t.emb", to_embedding_file(table));
  const auto back = read_class_table(dir / "nested" / "t.emb", "t");
  EXPECT_EQ(back.stacked(), table.stacked());
  EXPECT_EQ(back.species_ids(), table.species_ids());
  EXPECT_THROW(read_class_table(dir / "absent.emb", "t"), InputError);
}

TEST(AttributeTableTest, ParsesQuotingAndMissingTokens) {
  std::istringstream in(
      "species,mass,habitat,\"note, long\"\n"
      "\"Turdus merula\",95.5,Forest,\"a \"\"quoted\"\" word\"\n"
      "Parus major,NA,,x\n"
      "Sitta europaea,nan,Woodland,NaN\n");
  const auto t = parse_attribute_table(in, "mem");
  EXPECT_EQ(t.column_names(), (std::vector<std::string>{"mass", "habitat", "note, long"}));
  EXPECT_EQ(t.species_ids()[0], "Turdus merula");
  EXPECT_EQ(std::get<double>(t.at(0, 0)), 95.5);
  EXPECT_EQ(std::get<std::string>(t.at(0, 2)), "a \"quoted\" word");
  EXPECT_TRUE(std::holds_alternative<Missing>(t.at(1, 0)));
  EXPECT_TRUE(std::holds_alternative<Missing>(t.at(1, 1)));
  EXPECT_TRUE(std::holds_alternative<Missing>(t.at(2, 0)));
  EXPECT_TRUE(std::holds_alternative<Missing>(t.at(2, 2)));
  EXPECT_EQ(count_missing(t, 0), 2u);
}

TEST(AttributeTableTest, OtherDelimiterAndErrors) {
  std::istringstream tabbed("species\tmass\nA\t1\nB\t2\n");
  EXPECT_EQ(parse_attribute_table(tabbed, "mem", '\t').num_rows(), 2u);

  std::istringstream ragged("species,a,b\nA,1\n");
  try {
    parse_attribute_table(ragged, "mem");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_STREQ(e.what(), "mem:2:1: expected 3 fields, found 2");
  }
  std::istringstream dup("species,a\nA,1\nA,2\n");
  EXPECT_THROW(parse_attribute_table(dup, "mem"), InputError);
}

TEST(NameListTest, SkipsBlanksAndComments) {
  const auto dir = scratch_dir("names");
  std::ofstream(dir / "cols.txt") << "# identity\nSpecies1\n\n  Family1 \nAvibase.ID\n";
  EXPECT_EQ(read_name_list(dir / "cols.txt"),
            (std::vector<std::string>{"Species1", "Family1", "Avibase.ID"}));
}

TEST(ManifestIoTest, RoundTrip) {
  std::vector<std::string> names;
  for (int i = 0; i < 33; ++i) names.push_back("sp" + std::to_string(i));
  const auto m = make_splits(names, 12345678901234ULL);
  const auto text = manifest_to_json(m);
  EXPECT_EQ(manifest_from_json(text, "mem"), m);
  EXPECT_LT(text.find("\"seed\""), text.find("\"folds\""));
  EXPECT_LT(text.find("\"train\""), text.find("\"dev\""));

  const auto dir = scratch_dir("manifest");
  write_manifest(dir / "m.json", m);
  EXPECT_EQ(read_manifest(dir / "m.json"), m);
  EXPECT_THROW(manifest_from_json("{\"seed\": 1}", "mem"), InputError);
  EXPECT_THROW(manifest_from_json("not json", "mem"), InputError);
}

TEST(ModelIoTest, RoundTripIsBitExact) {
  auto model = ProjectionModel::initialize(7, 5, 99);
  model.weights(3, 2) = 1e-300;
  model.weights(0, 0) = -0.0;
  model.trained_epochs = 12;
  std::stringstream buf;
  write_model(buf, model);
  const auto back = parse_model(buf, "mem");
  EXPECT_EQ(back.weights, model.weights);
  EXPECT_TRUE(std::signbit(back.weights(0, 0)));
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(back.trained_epochs, 12);
}

TEST(ModelIoTest, RejectsMalformedFiles) {
  auto bad = [](const std::string& text) {
    std::istringstream in(text);
    return parse_model(in, "mem");
  };
  EXPECT_THROW(bad("something else\n"), InputError);
  EXPECT_THROW(bad("zsl-projection-model 1\nd_a 1\nd_c 2\nseed 0\ntrained_epochs 0\n1\n"),
               InputError);
  EXPECT_THROW(bad("zsl-projection-model 1\nd_a 1\nd_c 1\nseed 0\ntrained_epochs 0\nnan\n"),
               InputError);
  EXPECT_THROW(bad("zsl-projection-model 1\nd_a 2\nd_c 1\nseed 0\ntrained_epochs 0\n1\n"),
               InputError);
}

TEST(SimilarityGridTest, Layout) {
  SimilarityMatrix m;
  m.species_ids = {"a", "b"};
  m.values = Matrix::Identity(2, 2);
  m.values(0, 1) = m.values(1, 0) = 0.5;
  std::ostringstream out;
  write_similarity_grid(out, m);
  EXPECT_EQ(out.str(), "species,a,b\na,1,0.5\nb,0.5,1\n");
}

}  // namespace
}  // namespace zsl
