// Copyright 2026 The ngramclf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "synthetic.h"

namespace ngramclf::cli {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ngramclf");
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& content) {
  std::ofstream(p, std::ios::binary) << content;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::make_temp_dir("cli");
    testing::MotifCorpusOptions opts;
    opts.documents = 120;
    data_ = (dir_ / "data.tsv").string();
    testing::write_tsv(data_, testing::make_motif_corpus(opts));
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::string data_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(invoke({"stats"}).code, kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST_F(CliTest, Stats) {
  const Result r = invoke({"stats", "--data", data_, "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, HasSubstr("task1"));
  EXPECT_THAT(r.out, HasSubstr("120"));
}

TEST_F(CliTest, DataErrorsExitTwo) {
  spit(path("empty.tsv"), "");
  Result r = invoke({"stats", "--data", path("empty.tsv")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(r.err.empty());

  r = invoke({"train", "--data", data_, "--problem", "task9", "-o", path("m.json")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_THAT(r.err, HasSubstr("task9"));

  r = invoke({"stats", "--data", path("missing.tsv")});
  EXPECT_EQ(r.code, kExitUsage);
}

TEST_F(CliTest, TrainIsByteStableAndPredictCoversEveryRow) {
  ASSERT_EQ(invoke({"train", "--data", data_, "--preset", "english1", "-o", path("a.json")}).code,
            kExitOk);
  ASSERT_EQ(invoke({"train", "--data", data_, "--preset", "english1", "-o", path("b.json")}).code,
            kExitOk);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));

  // An empty text must still get a prediction.
  spit(path("new.tsv"), "id\ttext\nx1\txqz xqz\nx2\t\nx3\tjwp yyb.\n");
  const Result r = invoke({"predict", "--model", path("a.json"), "--data", path("new.tsv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
  EXPECT_THAT(r.out, HasSubstr("id\ttask1\n"));
  EXPECT_THAT(r.out, HasSubstr("x2\t"));
}

TEST_F(CliTest, EvalIdenticalFilesScoresOne) {
  ASSERT_EQ(invoke({"train", "--data", data_, "-o", path("m.json")}).code, kExitOk);
  ASSERT_EQ(invoke({"predict", "--model", path("m.json"), "--data", data_, "-o",
                    path("pred.tsv")})
                .code,
            kExitOk);
  const Result r = invoke({"eval", "--gold", path("pred.tsv"), "--pred", path("pred.tsv"),
                           "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["macro_f1"].get<double>(), 1.0);
}

TEST_F(CliTest, EvalWorkedExampleAndMismatch) {
  spit(path("gold.tsv"), "id\ttask1\n1\tA\n2\tB\n3\tA\n4\tB\n");
  spit(path("pred.tsv"), "id\ttask1\n4\tB\n3\tA\n2\tA\n1\tA\n");
  Result r = invoke({"eval", "--gold", path("gold.tsv"), "--pred", path("pred.tsv"), "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(nlohmann::json::parse(r.out)["macro_f1"].get<double>(), 0.7333333333333333,
              1e-12);

  spit(path("other.tsv"), "id\ttask1\n1\tA\n2\tB\n3\tA\n9\tB\n");
  r = invoke({"eval", "--gold", path("gold.tsv"), "--pred", path("other.tsv")});
  EXPECT_EQ(r.code, kExitUsage);
}

TEST_F(CliTest, CvAndTune) {
  Result r = invoke({"cv", "--data", data_, "--preset", "english1", "--json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["k"].get<int>(), 3);

  spit(path("space.json"), R"({"max_ngram_len":[3],"schemes":["tfidf"],"normalizations":["l2"],"C":[1,2]})");
  r = invoke({"tune", "--data", data_, "--space", path("space.json"), "--budget", "0"});
  EXPECT_EQ(r.code, kExitUsage);
  r = invoke({"tune", "--data", data_, "--space", path("space.json"), "--budget", "2",
              "--csv-out", path("tune.csv"), "--json-out", path("tune.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string csv = slurp(path("tune.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(nlohmann::json::parse(slurp(path("tune.json"))).size(), 2u);
}

TEST_F(CliTest, Leaderboard) {
  const std::string table = std::string(NGRAMCLF_TEST_DATA_DIR) + "/published_scores.csv";
  Result r = invoke({"leaderboard", "--scores", table});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_THAT(r.out, HasSubstr("0.9601"));
  r = invoke({"leaderboard", "--scores", table, "--problems", "hindi1,hindi2,marathi"});
  EXPECT_THAT(r.out, HasSubstr("0.9800"));
  r = invoke({"leaderboard", "--scores", table, "--problems", "bengali"});
  EXPECT_EQ(r.code, kExitUsage);
}

}  // namespace
}  // namespace ngramclf::cli
