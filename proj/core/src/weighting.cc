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

#include "ngramclf/weighting.h"

#include <algorithm>
#include <cmath>

#include "ngramclf/error.h"

namespace ngramclf {

std::string to_string(Scheme scheme) {
  return scheme == Scheme::kBm25 ? "bm25" : "sublinear_tfidf";
}

std::string to_string(Normalization normalization) {
  return normalization == Normalization::kMinMax ? "minmax" : "l2";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "sublinear_tfidf" || name == "tfidf") return Scheme::kSublinearTfidf;
  if (name == "bm25") return Scheme::kBm25;
  throw DataError("unknown weighting scheme '" + std::string(name) +
                  "' (expected sublinear_tfidf or bm25)");
}

Normalization parse_normalization(std::string_view name) {
  if (name == "l2") return Normalization::kL2;
  if (name == "minmax") return Normalization::kMinMax;
  throw DataError("unknown normalization '" + std::string(name) +
                  "' (expected l2 or minmax)");
}

void validate(const WeightingConfig& config) {
  if (!(config.k1 > 0.0)) throw DataError("k1 must be positive");
  if (!(config.b >= 0.0 && config.b <= 1.0)) {
    throw DataError("b must lie in [0, 1]");
  }
}

double tfidf_weight(double tf, double df, double n_docs) {
  return (1.0 + std::log(tf)) * std::log(n_docs / df);
}

double bm25_weight(double tf, double df, double n_docs, double dl,
                   double avg_dl, double k1, double b) {
  if (tf == 0.0) return 0.0;
  const double length_norm = 1.0 - b + b * dl / avg_dl;
  const double saturation = tf / (tf + k1 * length_norm);
  return saturation * std::log((n_docs - df + 0.5) / (df + 0.5));
}

SparseVector normalize_l2(SparseVector x) {
  const double norm = std::sqrt(x.squared_norm());
  if (norm > 0.0) {
    for (auto& e : x.entries) e.second /= norm;
  }
  return x;
}

SparseVector normalize_minmax(SparseVector x) {
  if (x.empty()) return x;
  const auto [lo_it, hi_it] = std::minmax_element(
      x.entries.begin(), x.entries.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  const double lo = lo_it->second;
  const double hi = hi_it->second;
  if (hi == lo) {
    for (auto& e : x.entries) e.second = 1.0 + kMinMaxOffset;
    return x;
  }
  const double range = hi - lo;
  for (auto& e : x.entries) {
    // Endpoints are assigned exactly so the span is [0.01, 1.01] bit-for-bit.
    if (e.second == lo) {
      e.second = kMinMaxOffset;
    } else if (e.second == hi) {
      e.second = 1.0 + kMinMaxOffset;
    } else {
      e.second = (e.second - lo) / range + kMinMaxOffset;
    }
  }
  return x;
}

SparseVector apply_weighting(const SparseCounts& counts,
                             const Vocabulary& vocabulary,
                             const WeightingConfig& config) {
  SparseVector x;
  x.entries.reserve(counts.counts.size());
  const double n_docs = static_cast<double>(vocabulary.n_docs());
  const double dl = static_cast<double>(counts.dl);
  for (const auto& [index, tf] : counts.counts) {
    const double df = vocabulary.df(index);
    const double score =
        config.scheme == Scheme::kBm25
            ? bm25_weight(tf, df, n_docs, dl, vocabulary.avg_dl(), config.k1,
                          config.b)
            : tfidf_weight(tf, df, n_docs);
    x.entries.emplace_back(index, score);
  }
  return config.normalization == Normalization::kMinMax
             ? normalize_minmax(std::move(x))
             : normalize_l2(std::move(x));
}

}  // namespace ngramclf
