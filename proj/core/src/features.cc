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

#include <algorithm>

#include "ngramclf/error.h"
#include "ngramclf/unicode.h"

namespace ngramclf {

PaddedText::PaddedText(std::string utf8)
    : utf8_(std::move(utf8)), offsets_(unicode::boundaries(utf8_)) {}

PaddedText preprocess(std::string_view text) {
  std::string lowered = unicode::to_lower(text);
  std::string padded;
  padded.reserve(lowered.size() + 2);
  padded += kStartSentinel;
  for (char c : lowered) {
    if (c != kStartSentinel && c != kEndSentinel) padded += c;
  }
  padded += kEndSentinel;
  return PaddedText(std::move(padded));
}

bool is_bare_sentinel(std::string_view ngram) {
  return ngram.size() == 1 &&
         (ngram[0] == kStartSentinel || ngram[0] == kEndSentinel);
}

std::vector<std::string> extract_ngrams(const PaddedText& padded, int min_len,
                                        int max_len) {
  validate(VocabularyOptions{min_len, max_len, 1, PruneBy::kTotal});
  std::vector<std::string> out;
  for_each_ngram(padded, min_len, max_len,
                 [&](std::string_view g) { out.emplace_back(g); });
  return out;
}

void validate(const VocabularyOptions& options) {
  if (options.min_len < 1 || options.max_len < options.min_len) {
    throw DataError("n-gram lengths must satisfy 1 <= min_len <= max_len (got " +
                    std::to_string(options.min_len) + ".." +
                    std::to_string(options.max_len) + ")");
  }
  if (options.min_count < 1) throw DataError("min_count must be at least 1");
}

std::string to_string(PruneBy prune_by) {
  return prune_by == PruneBy::kTotal ? "total" : "df";
}

PruneBy parse_prune_by(std::string_view name) {
  if (name == "total") return PruneBy::kTotal;
  if (name == "df") return PruneBy::kDocumentFrequency;
  throw DataError("unknown prune_by '" + std::string(name) +
                  "' (expected total or df)");
}

Vocabulary::Vocabulary(VocabularyOptions options, std::vector<std::string> ngrams,
                       std::vector<std::uint32_t> df, std::size_t n_docs,
                       double avg_dl)
    : options_(options),
      ngrams_(std::move(ngrams)),
      df_(std::move(df)),
      n_docs_(n_docs),
      avg_dl_(avg_dl) {
  validate(options_);
  if (ngrams_.size() != df_.size()) {
    throw DataError("vocabulary: n-gram and df lists differ in length");
  }
  if (n_docs_ > 0 && !(avg_dl_ > 0.0)) {
    throw DataError("vocabulary: avg_dl must be positive");
  }
  index_.reserve(ngrams_.size());
  for (std::size_t i = 0; i < ngrams_.size(); ++i) {
    if (i > 0 && !(ngrams_[i - 1] < ngrams_[i])) {
      throw DataError("vocabulary: entries not in strictly increasing order");
    }
    if (df_[i] < 1 || df_[i] > n_docs_) {
      throw DataError("vocabulary: df out of range for '" + ngrams_[i] + "'");
    }
    index_.emplace(ngrams_[i], static_cast<std::uint32_t>(i));
  }
}

std::uint32_t Vocabulary::find(std::string_view ngram) const {
  const auto it = index_.find(ngram);
  return it == index_.end() ? kNotFound : it->second;
}

nlohmann::json Vocabulary::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < ngrams_.size(); ++i) {
    entries.push_back(nlohmann::json::array({ngrams_[i], df_[i]}));
  }
  return {{"meta",
           {{"n_docs", n_docs_},
            {"avg_dl", avg_dl_},
            {"min_len", options_.min_len},
            {"max_len", options_.max_len},
            {"min_count", options_.min_count},
            {"prune_by", to_string(options_.prune_by)}}},
          {"entries", entries}};
}

Vocabulary Vocabulary::from_json(const nlohmann::json& j) {
  try {
    const auto& meta = j.at("meta");
    VocabularyOptions options;
    options.min_len = meta.at("min_len").get<int>();
    options.max_len = meta.at("max_len").get<int>();
    options.min_count = meta.at("min_count").get<std::size_t>();
    options.prune_by = parse_prune_by(meta.value("prune_by", "total"));
    std::vector<std::string> ngrams;
    std::vector<std::uint32_t> df;
    for (const auto& e : j.at("entries")) {
      ngrams.push_back(e.at(0).get<std::string>());
      df.push_back(e.at(1).get<std::uint32_t>());
    }
    return Vocabulary(options, std::move(ngrams), std::move(df),
                      meta.at("n_docs").get<std::size_t>(),
                      meta.at("avg_dl").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed vocabulary: ") + e.what());
  }
}

Vocabulary build_vocabulary(std::span<const PaddedText> docs,
                            const VocabularyOptions& options) {
  validate(options);
  if (docs.empty()) throw DataError("cannot build a vocabulary from no documents");

  struct Tally {
    std::size_t total = 0;
    std::uint32_t df = 0;
    std::size_t last_doc = static_cast<std::size_t>(-1);
  };
  std::unordered_map<std::string, Tally, StringHash, std::equal_to<>> tallies;
  std::size_t total_length = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    total_length += docs[d].length();
    for_each_ngram(docs[d], options.min_len, options.max_len,
                   [&](std::string_view g) {
                     auto it = tallies.find(g);
                     if (it == tallies.end()) {
                       it = tallies.emplace(std::string(g), Tally{}).first;
                     }
                     Tally& t = it->second;
                     ++t.total;
                     if (t.last_doc != d) {
                       t.last_doc = d;
                       ++t.df;
                     }
                   });
  }

  std::vector<std::pair<std::string, std::uint32_t>> kept;
  for (auto& [gram, t] : tallies) {
    const std::size_t count =
        options.prune_by == PruneBy::kTotal ? t.total : t.df;
    if (count >= options.min_count) kept.emplace_back(gram, t.df);
  }
  std::sort(kept.begin(), kept.end());

  std::vector<std::string> ngrams;
  std::vector<std::uint32_t> df;
  ngrams.reserve(kept.size());
  df.reserve(kept.size());
  for (auto& [gram, count] : kept) {
    ngrams.push_back(std::move(gram));
    df.push_back(count);
  }
  const double avg_dl =
      static_cast<double>(total_length) / static_cast<double>(docs.size());
  return Vocabulary(options, std::move(ngrams), std::move(df), docs.size(),
                    avg_dl);
}

SparseCounts vectorize(const PaddedText& padded, const Vocabulary& vocabulary) {
  SparseCounts out;
  out.dl = padded.length();
  std::vector<std::uint32_t> hits;
  for_each_ngram(padded, vocabulary.options().min_len,
                 vocabulary.options().max_len, [&](std::string_view g) {
                   const std::uint32_t idx = vocabulary.find(g);
                   if (idx != Vocabulary::kNotFound) hits.push_back(idx);
                 });
  std::sort(hits.begin(), hits.end());
  for (std::uint32_t idx : hits) {
    if (!out.counts.empty() && out.counts.back().first == idx) {
      ++out.counts.back().second;
    } else {
      out.counts.emplace_back(idx, 1u);
    }
  }
  return out;
}

}  // namespace ngramclf
