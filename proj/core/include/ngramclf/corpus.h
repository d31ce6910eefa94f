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

// Labeled document collections: TSV ingestion, descriptive statistics and
// seeded stratified fold assignment.

#ifndef NGRAMCLF_CORPUS_H_
#define NGRAMCLF_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ngramclf {

struct Document {
  std::string id;
  std::string text;  // raw UTF-8, unescaped
  // Label value per problem, index-aligned with Dataset::problems.
  std::vector<std::string> labels;
};

// A labeling problem ("task1", "task2", ...) and its ordered class list.
// Class order drives tie-breaking everywhere downstream.
struct Problem {
  std::string name;
  std::vector<std::string> classes;

  // Position of `label` in `classes`, or -1.
  int class_index(std::string_view label) const;
};

class Dataset {
 public:
  Dataset() = default;
  // Validates ids (nonempty, unique), label membership and class list sizes.
  Dataset(std::vector<Document> documents, std::vector<Problem> problems);

  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<Problem>& problems() const { return problems_; }
  std::size_t size() const { return documents_.size(); }

  // Index into problems(); throws DataError naming the missing problem.
  std::size_t problem_index(std::string_view name) const;
  const Problem& problem(std::string_view name) const {
    return problems_[problem_index(name)];
  }

  // Class index of every document for `problem`, in document order.
  std::vector<int> class_indices(std::string_view problem) const;

  // Documents at `rows`, in the given order, keeping the problem declarations.
  Dataset subset(const std::vector<std::size_t>& rows) const;

 private:
  std::vector<Document> documents_;
  std::vector<Problem> problems_;
};

struct LoadOptions {
  // Explicit class order per problem; otherwise classes are the sorted
  // distinct label values.
  std::map<std::string, std::vector<std::string>> class_orders;
  // When false, a header with only `id` and `text` is accepted.
  bool require_labels = true;
  // Label columns are skipped entirely (prediction inputs).
  bool ignore_labels = false;
};

// Reads a UTF-8 TSV with a header row declaring `id`, `text` and label
// columns. Inside fields `\t`, `\n`, `\r` and `\\` are escapes.
Dataset load_dataset(const std::filesystem::path& path,
                     const LoadOptions& options = {});
Dataset read_dataset(std::istream& in, const LoadOptions& options = {},
                     std::string_view source = "<stream>");

// Normalized TSV: header `id`, `text`, then problems in declaration order.
void write_dataset(std::ostream& out, const Dataset& dataset);

std::string escape_field(std::string_view raw);
std::string unescape_field(std::string_view field);

struct ClassCount {
  std::string name;
  std::size_t count = 0;
  double percent = 0.0;
};

struct ProblemStats {
  std::string problem;
  std::vector<ClassCount> classes;
};

struct StatsReport {
  std::size_t documents = 0;
  std::size_t empty_documents = 0;
  double mean_length = 0.0;  // Unicode scalar values of the raw text
  std::vector<ProblemStats> problems;
};

StatsReport dataset_stats(const Dataset& dataset);
std::string format_stats(const StatsReport& report);
nlohmann::json stats_to_json(const StatsReport& report);

struct FoldAssignment {
  int k = 0;
  std::uint64_t seed = 0;
  std::string stratify_by;
  std::vector<int> fold;  // per document, in [0, k)

  std::vector<std::size_t> train_rows(int held_out) const;
  std::vector<std::size_t> test_rows(int held_out) const;
};

// Groups documents by class of `problem`, shuffles each group with a seeded
// generator and deals the groups round-robin into k folds, continuing the
// deal where the previous class stopped. Every class must have >= k members.
FoldAssignment split_stratified(const Dataset& dataset, int k,
                                std::string_view problem, std::uint64_t seed);

}  // namespace ngramclf

#endif  // NGRAMCLF_CORPUS_H_
