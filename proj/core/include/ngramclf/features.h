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

// Character n-gram features: lowercasing and boundary padding, n-gram
// enumeration, pruned vocabularies and raw-count vectors.

#ifndef NGRAMCLF_FEATURES_H_
#define NGRAMCLF_FEATURES_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace ngramclf {

// Boundary sentinels. Input occurrences are stripped before padding.
inline constexpr char kStartSentinel = '\x02';
inline constexpr char kEndSentinel = '\x03';

// A lowercased, sentinel-wrapped document with scalar boundaries precomputed
// so that n-grams are byte slices of `utf8`.
class PaddedText {
 public:
  PaddedText() = default;
  explicit PaddedText(std::string utf8);

  const std::string& utf8() const { return utf8_; }
  // Length in Unicode scalar values, sentinels included.
  std::size_t length() const { return offsets_.size() - 1; }
  // `n` scalars starting at scalar `pos`.
  std::string_view slice(std::size_t pos, std::size_t n) const {
    return std::string_view(utf8_).substr(offsets_[pos],
                                          offsets_[pos + n] - offsets_[pos]);
  }

 private:
  std::string utf8_;
  std::vector<std::size_t> offsets_{0};
};

PaddedText preprocess(std::string_view text);

// True for the one-scalar strings consisting of a bare sentinel.
bool is_bare_sentinel(std::string_view ngram);

// Calls `fn(ngram)` for every contiguous substring of min_len..max_len
// scalars except bare-sentinel unigrams. Order: by start position, then
// length.
template <typename Fn>
void for_each_ngram(const PaddedText& padded, int min_len, int max_len, Fn&& fn) {
  const std::size_t len = padded.length();
  for (std::size_t pos = 0; pos < len; ++pos) {
    for (int n = min_len; n <= max_len; ++n) {
      if (pos + static_cast<std::size_t>(n) > len) break;
      const std::string_view gram = padded.slice(pos, static_cast<std::size_t>(n));
      if (n == 1 && is_bare_sentinel(gram)) continue;
      fn(gram);
    }
  }
}

std::vector<std::string> extract_ngrams(const PaddedText& padded, int min_len,
                                        int max_len);

// How min_count is compared: against total occurrences in the corpus, or
// against the number of documents containing the n-gram.
enum class PruneBy { kTotal, kDocumentFrequency };

struct VocabularyOptions {
  int min_len = 1;
  int max_len = 5;
  std::size_t min_count = 2;
  PruneBy prune_by = PruneBy::kTotal;

  bool operator==(const VocabularyOptions&) const = default;
};

void validate(const VocabularyOptions& options);
std::string to_string(PruneBy prune_by);
PruneBy parse_prune_by(std::string_view name);

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

class Vocabulary {
 public:
  static constexpr std::uint32_t kNotFound = 0xFFFFFFFFu;

  Vocabulary() = default;
  // Entries must be in strictly increasing lexicographic order.
  Vocabulary(VocabularyOptions options, std::vector<std::string> ngrams,
             std::vector<std::uint32_t> df, std::size_t n_docs, double avg_dl);

  std::size_t size() const { return ngrams_.size(); }
  const std::string& ngram(std::size_t index) const { return ngrams_[index]; }
  std::uint32_t df(std::size_t index) const { return df_[index]; }
  std::uint32_t find(std::string_view ngram) const;

  const std::vector<std::string>& ngrams() const { return ngrams_; }
  const std::vector<std::uint32_t>& document_frequencies() const { return df_; }
  std::size_t n_docs() const { return n_docs_; }
  double avg_dl() const { return avg_dl_; }
  const VocabularyOptions& options() const { return options_; }

  nlohmann::json to_json() const;
  static Vocabulary from_json(const nlohmann::json& j);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.options_ == b.options_ && a.n_docs_ == b.n_docs_ &&
           a.avg_dl_ == b.avg_dl_ && a.ngrams_ == b.ngrams_ && a.df_ == b.df_;
  }

 private:
  VocabularyOptions options_;
  std::vector<std::string> ngrams_;
  std::vector<std::uint32_t> df_;
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>>
      index_;
  std::size_t n_docs_ = 0;
  double avg_dl_ = 0.0;
};

// Keeps n-grams whose count (per options.prune_by) reaches min_count and
// indexes them in lexicographic (UTF-8 byte) order. Throws on an empty corpus.
Vocabulary build_vocabulary(std::span<const PaddedText> docs,
                            const VocabularyOptions& options);

struct SparseCounts {
  // (vocabulary index, term frequency), sorted by index.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> counts;
  std::size_t dl = 0;  // padded length in scalars
};

SparseCounts vectorize(const PaddedText& padded, const Vocabulary& vocabulary);

}  // namespace ngramclf

#endif  // NGRAMCLF_FEATURES_H_
