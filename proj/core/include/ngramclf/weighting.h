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

// Term weighting (sublinear TF-IDF, Okapi BM25) and per-instance
// normalization (L2, shifted MinMax).

#ifndef NGRAMCLF_WEIGHTING_H_
#define NGRAMCLF_WEIGHTING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ngramclf/features.h"

namespace ngramclf {

enum class Scheme { kSublinearTfidf, kBm25 };
enum class Normalization { kL2, kMinMax };

std::string to_string(Scheme scheme);
std::string to_string(Normalization normalization);
Scheme parse_scheme(std::string_view name);
Normalization parse_normalization(std::string_view name);

struct WeightingConfig {
  Scheme scheme = Scheme::kSublinearTfidf;
  double k1 = 2.0;
  double b = 0.75;
  Normalization normalization = Normalization::kL2;

  bool operator==(const WeightingConfig&) const = default;
};

// Throws DataError unless k1 > 0 and 0 <= b <= 1.
void validate(const WeightingConfig& config);

// Offset added by MinMax so the lowest present feature stays nonzero.
inline constexpr double kMinMaxOffset = 0.01;

struct SparseVector {
  // (feature index, value), sorted by index, indices unique.
  std::vector<std::pair<std::uint32_t, double>> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  // Indices beyond `weights` contribute nothing.
  double dot(std::span<const double> weights) const {
    double sum = 0.0;
    for (const auto& [i, v] : entries) {
      if (i < weights.size()) sum += weights[i] * v;
    }
    return sum;
  }
  double squared_norm() const {
    double sum = 0.0;
    for (const auto& e : entries) sum += e.second * e.second;
    return sum;
  }

  bool operator==(const SparseVector&) const = default;
};

// (1 + ln tf) * ln(n_docs / df); requires tf >= 1 and 1 <= df <= n_docs.
double tfidf_weight(double tf, double df, double n_docs);

// tf / (tf + k1 (1 - b + b dl/avg_dl)) * ln((n_docs - df + 0.5) / (df + 0.5)).
// The IDF factor turns negative once df > n_docs / 2; it is not clamped.
double bm25_weight(double tf, double df, double n_docs, double dl,
                   double avg_dl, double k1, double b);

SparseVector normalize_l2(SparseVector x);
// (s - min) / (max - min) + 0.01 over the present entries. With a single
// distinct score every present entry becomes 1.01.
SparseVector normalize_minmax(SparseVector x);

// Weights every present count with the vocabulary's training statistics and
// then applies the configured normalization.
SparseVector apply_weighting(const SparseCounts& counts,
                             const Vocabulary& vocabulary,
                             const WeightingConfig& config);

}  // namespace ngramclf

#endif  // NGRAMCLF_WEIGHTING_H_
