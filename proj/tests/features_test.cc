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

#include "ngramclf/features.h"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "ngramclf/error.h"

namespace ngramclf {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;
using ::testing::UnorderedElementsAre;

const std::string S(1, kStartSentinel);
const std::string E(1, kEndSentinel);

std::vector<PaddedText> pad_all(const std::vector<std::string>& texts) {
  std::vector<PaddedText> out;
  for (const auto& t : texts) out.push_back(preprocess(t));
  return out;
}

std::string random_text(std::mt19937_64& rng, std::size_t max_len) {
  static const std::vector<std::string> kAlphabet{"a", "b", "c", "é", "Σ", " ", "ж"};
  std::string s;
  const std::size_t n = rng() % (max_len + 1);
  for (std::size_t i = 0; i < n; ++i) s += kAlphabet[rng() % kAlphabet.size()];
  return s;
}

TEST(PreprocessTest, LowercasesAndPads) {
  const PaddedText p = preprocess("Ab");
  EXPECT_EQ(p.utf8(), S + "ab" + E);
  EXPECT_EQ(p.length(), 4u);
}

TEST(PreprocessTest, EmptyInput) {
  const PaddedText p = preprocess("");
  EXPECT_EQ(p.utf8(), S + E);
  EXPECT_EQ(p.length(), 2u);
}

// Expected bytes taken from Python's str.lower(), which applies the full
// Unicode SpecialCasing mappings.
TEST(PreprocessTest, FullUnicodeLowercase) {
  EXPECT_EQ(preprocess("\xC3\x89" "COLE").utf8(), S + "\xC3\xA9" "cole" + E);
  // U+0130 lowercases to two scalars: i + U+0307.
  const PaddedText dotted = preprocess("\xC4\xB0");
  EXPECT_EQ(dotted.utf8(), S + "i\xCC\x87" + E);
  EXPECT_EQ(dotted.length(), 4u);
  // Final sigma.
  EXPECT_EQ(preprocess("\xCE\xA3\xCE\x91\xCE\xA3").utf8(),
            S + "\xCF\x83\xCE\xB1\xCF\x82" + E);
  // U+1E9E capital sharp s.
  EXPECT_EQ(preprocess("\xE1\xBA\x9E").utf8(), S + "\xC3\x9F" + E);
}

TEST(PreprocessTest, StripsSentinelsFromInput) {
  EXPECT_EQ(preprocess("a" + S + "b" + E + "c").utf8(), S + "abc" + E);
}

TEST(PreprocessTest, IllFormedUtf8Replaced) {
  EXPECT_EQ(preprocess("a\xFFz").utf8(), S + "a\xEF\xBF\xBDz" + E);
}

TEST(ExtractNgramsTest, UnigramsAndBigramsOfAb) {
  EXPECT_THAT(extract_ngrams(preprocess("ab"), 1, 2),
              UnorderedElementsAre("a", "b", S + "a", "ab", "b" + E));
}

TEST(ExtractNgramsTest, BareSentinelsExcluded) {
  EXPECT_THAT(extract_ngrams(preprocess("a"), 1, 1), ElementsAre("a"));
  EXPECT_THAT(extract_ngrams(preprocess(""), 1, 1), IsEmpty());
  EXPECT_THAT(extract_ngrams(preprocess(""), 2, 2), ElementsAre(S + E));
}

TEST(ExtractNgramsTest, BigramsOfAa) {
  EXPECT_THAT(extract_ngrams(preprocess("aa"), 2, 2),
              UnorderedElementsAre(S + "a", "aa", "a" + E));
}

TEST(ExtractNgramsTest, NgramsSpanScalarsNotBytes) {
  EXPECT_THAT(extract_ngrams(preprocess("\xC3\xA9"), 2, 2),
              ElementsAre(S + "\xC3\xA9", "\xC3\xA9" + E));
}

TEST(ExtractNgramsTest, RejectsBadLengths) {
  EXPECT_THROW(extract_ngrams(preprocess("a"), 0, 1), DataError);
  EXPECT_THROW(extract_ngrams(preprocess("a"), 3, 2), DataError);
}

TEST(ExtractNgramsTest, CountIsLMinusNPlusOne) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const PaddedText p = preprocess(random_text(rng, 12));
    const std::size_t len = p.length();
    for (std::size_t n = 1; n <= len; ++n) {
      const std::size_t excluded = n == 1 ? 2 : 0;
      EXPECT_EQ(extract_ngrams(p, static_cast<int>(n), static_cast<int>(n)).size(),
                len - n + 1 - excluded);
    }
  }
}

TEST(BuildVocabularyTest, RepeatedDocument) {
  const auto docs = pad_all({"ab", "ab"});
  const Vocabulary v = build_vocabulary(docs, {1, 1, 2, PruneBy::kTotal});
  EXPECT_THAT(v.ngrams(), ElementsAre("a", "b"));
  EXPECT_THAT(v.document_frequencies(), ElementsAre(2u, 2u));
  EXPECT_EQ(v.n_docs(), 2u);
  EXPECT_DOUBLE_EQ(v.avg_dl(), 4.0);
}

TEST(BuildVocabularyTest, SingletonsPruned) {
  const auto docs = pad_all({"ab", "cd"});
  EXPECT_EQ(build_vocabulary(docs, {1, 1, 2, PruneBy::kTotal}).size(), 0u);
}

TEST(BuildVocabularyTest, TotalFrequencyVersusDocumentFrequency) {
  const auto docs = pad_all({"aa", "ab"});
  const Vocabulary total = build_vocabulary(docs, {1, 1, 2, PruneBy::kTotal});
  EXPECT_THAT(total.ngrams(), ElementsAre("a"));
  EXPECT_THAT(total.document_frequencies(), ElementsAre(2u));

  // "aa" twice in one document: total frequency 2 but df 1.
  const auto docs2 = pad_all({"aa", "b"});
  EXPECT_THAT(build_vocabulary(docs2, {1, 1, 2, PruneBy::kTotal}).ngrams(),
              ElementsAre("a"));
  EXPECT_THAT(build_vocabulary(docs2, {1, 1, 2, PruneBy::kDocumentFrequency}).ngrams(),
              IsEmpty());
}

TEST(BuildVocabularyTest, EmptyCorpusThrows) {
  EXPECT_THROW(build_vocabulary({}, {}), DataError);
}

TEST(BuildVocabularyTest, IndependentOfDocumentOrder) {
  std::mt19937_64 rng(9);
  std::vector<std::string> texts;
  for (int i = 0; i < 40; ++i) texts.push_back(random_text(rng, 20));
  const Vocabulary a = build_vocabulary(pad_all(texts), {1, 4, 2, PruneBy::kTotal});
  std::shuffle(texts.begin(), texts.end(), rng);
  const Vocabulary b = build_vocabulary(pad_all(texts), {1, 4, 2, PruneBy::kTotal});
  EXPECT_EQ(a, b);
  EXPECT_TRUE(std::is_sorted(a.ngrams().begin(), a.ngrams().end()));
}

// Brute-force frequency table from extract_ngrams.
TEST(BuildVocabularyTest, MatchesBruteForceCountsAndPruningIsMonotone) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::string> texts;
    for (int i = 0; i < 25; ++i) texts.push_back(random_text(rng, 15));
    const auto docs = pad_all(texts);
    std::map<std::string, std::pair<std::size_t, std::uint32_t>> table;
    for (const auto& d : docs) {
      std::map<std::string, int> local;
      for (const auto& g : extract_ngrams(d, 1, 3)) ++local[g];
      for (const auto& [g, n] : local) {
        table[g].first += static_cast<std::size_t>(n);
        table[g].second += 1;
      }
    }
    std::size_t previous = static_cast<std::size_t>(-1);
    for (std::size_t min_count = 1; min_count <= 6; ++min_count) {
      const Vocabulary v = build_vocabulary(docs, {1, 3, min_count, PruneBy::kTotal});
      std::vector<std::string> expected;
      for (const auto& [g, counts] : table) {
        if (counts.first >= min_count) expected.push_back(g);
      }
      ASSERT_EQ(v.ngrams(), expected);
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& [total, df] = table[v.ngram(i)];
        EXPECT_EQ(v.df(i), df);
        EXPECT_LE(v.df(i), std::min<std::size_t>(v.n_docs(), total));
      }
      EXPECT_LE(v.size(), previous);
      previous = v.size();
    }
  }
}

TEST(VocabularyTest, JsonRoundTrip) {
  const auto docs = pad_all({"Hello world", "hello there", "world"});
  const Vocabulary v = build_vocabulary(docs, {1, 3, 2, PruneBy::kTotal});
  const nlohmann::json j = v.to_json();
  EXPECT_EQ(j["meta"]["n_docs"], 3);
  EXPECT_EQ(j["entries"].size(), v.size());
  EXPECT_EQ(Vocabulary::from_json(j), v);
  EXPECT_EQ(Vocabulary::from_json(nlohmann::json::parse(j.dump())), v);
}

TEST(VocabularyTest, RejectsInvalidEntries) {
  EXPECT_THROW(Vocabulary({1, 1, 1, PruneBy::kTotal}, {"b", "a"}, {1, 1}, 2, 3.0),
               DataError);
  EXPECT_THROW(Vocabulary({1, 1, 1, PruneBy::kTotal}, {"a"}, {3}, 2, 3.0),
               DataError);
  EXPECT_THROW(Vocabulary::from_json(nlohmann::json{{"entries", 1}}), DataError);
}

TEST(VectorizeTest, CountsIncludeSentinelLength) {
  const Vocabulary v({1, 1, 1, PruneBy::kTotal}, {"a", "b"}, {1, 1}, 2, 4.0);
  const SparseCounts c = vectorize(preprocess("ab"), v);
  using Entry = std::pair<std::uint32_t, std::uint32_t>;
  EXPECT_THAT(c.counts, ElementsAre(Entry{0, 1}, Entry{1, 1}));
  EXPECT_EQ(c.dl, 4u);
}

TEST(VectorizeTest, RepeatedAndOutOfVocabulary) {
  const Vocabulary v({1, 1, 1, PruneBy::kTotal}, {"a"}, {1}, 1, 4.0);
  using Entry = std::pair<std::uint32_t, std::uint32_t>;
  EXPECT_THAT(vectorize(preprocess("aa"), v).counts, ElementsAre(Entry{0, 2}));
  const SparseCounts none = vectorize(preprocess("xyz"), v);
  EXPECT_THAT(none.counts, IsEmpty());
  EXPECT_EQ(none.dl, 5u);
}

}  // namespace
}  // namespace ngramclf
