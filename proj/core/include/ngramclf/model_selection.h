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

// Macro-F1 scoring, stratified cross-validation of whole pipelines, and
// grid/random hyperparameter search.

#ifndef NGRAMCLF_MODEL_SELECTION_H_
#define NGRAMCLF_MODEL_SELECTION_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ngramclf/corpus.h"
#include "ngramclf/linear_model.h"
#include "ngramclf/pipeline.h"

namespace ngramclf {

struct ConfusionMatrix {
  std::vector<std::string> classes;
  // counts[gold][predicted]
  std::vector<std::vector<std::size_t>> counts;

  std::size_t total() const;
  void add(const ConfusionMatrix& other);
};

// Throws DataError on length mismatch or a label outside `classes`.
ConfusionMatrix confusion(std::span<const std::string> gold,
                          std::span<const std::string> predicted,
                          std::span<const std::string> classes);
ConfusionMatrix confusion(std::span<const int> gold,
                          std::span<const int> predicted,
                          std::span<const std::string> classes);

struct ClassScores {
  std::string name;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

// Per-class precision, recall and F1. A zero denominator yields 0.
std::vector<ClassScores> class_scores(const ConfusionMatrix& cm);

// Unweighted mean of per-class F1; classes never seen in gold or
// predictions still count, with F1 = 0.
double macro_f1(const ConfusionMatrix& cm);

std::string format_confusion(const ConfusionMatrix& cm);
nlohmann::json to_json(const ConfusionMatrix& cm);

struct CVOptions {
  int k = 3;
  // Problem whose classes stratify the folds; empty means the scored problem.
  std::string stratify_by;
  std::uint64_t seed = 42;
  int threads = 1;
};

struct CVReport {
  PipelineConfig config;
  int k = 0;
  std::uint64_t seed = 0;
  std::string stratify_by;
  std::vector<double> fold_macro_f1;
  double mean_macro_f1 = 0.0;
  ConfusionMatrix pooled;
  double pooled_macro_f1 = 0.0;
};

// Per fold: vocabulary, weighting statistics and model come from the k-1
// training folds only; the held-out fold is scored on config.problem.
// `fold_models`, when given, receives the model of each fold.
CVReport cross_validate(const Dataset& dataset, const PipelineConfig& config,
                        const CVOptions& options,
                        std::vector<LinearModel>* fold_models = nullptr);

nlohmann::json to_json(const CVReport& report);
std::string format_cv_report(const CVReport& report);

struct CRange {
  double low = 0.01;
  double high = 100.0;
  int steps = 9;  // grid mode: log-spaced points including both ends
};

struct SearchSpace {
  std::vector<int> max_ngram_len{4, 5, 6, 7, 8};
  std::vector<Scheme> schemes{Scheme::kSublinearTfidf, Scheme::kBm25};
  std::vector<Normalization> normalizations{Normalization::kL2,
                                            Normalization::kMinMax};
  // Explicit C values; when empty, c_range is used.
  std::vector<double> c_values;
  CRange c_range;
  std::map<std::string, std::vector<double>> class_weights;
};

void validate(const SearchSpace& space);
SearchSpace search_space_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SearchSpace& space);

enum class SearchMode { kGrid, kRandom };
SearchMode parse_search_mode(std::string_view name);

struct SearchOptions {
  int budget = 1;
  SearchMode mode = SearchMode::kGrid;
  std::uint64_t seed = 42;  // candidate sampling in random mode
  CVOptions cv;
};

struct SearchResult {
  std::size_t candidate = 0;  // enumeration / sampling index
  PipelineConfig config;
  CVReport report;
};

// Candidate configurations in evaluation order: the first `budget` points of
// the grid (axes in the order max length, scheme, normalization, C, class
// weights by class name; last varies fastest), or `budget` seeded draws.
std::vector<PipelineConfig> search_candidates(const PipelineConfig& base,
                                              const SearchSpace& space,
                                              const SearchOptions& options);

// Cross-validates every candidate and ranks by mean per-fold Macro-F1
// (descending; ties keep candidate order).
std::vector<SearchResult> search(const Dataset& dataset,
                                 const PipelineConfig& base,
                                 const SearchSpace& space,
                                 const SearchOptions& options);

nlohmann::json to_json(const std::vector<SearchResult>& results);
std::string search_to_csv(const std::vector<SearchResult>& results);

}  // namespace ngramclf

#endif  // NGRAMCLF_MODEL_SELECTION_H_
