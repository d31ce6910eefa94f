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

#include "ngramclf/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "ngramclf/error.h"
#include "ngramclf/unicode.h"

namespace ngramclf {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string where(std::string_view source, std::size_t line) {
  std::ostringstream os;
  os << source << ":" << line;
  return os.str();
}

}  // namespace

int Problem::class_index(std::string_view label) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == label) return static_cast<int>(i);
  }
  return -1;
}

Dataset::Dataset(std::vector<Document> documents, std::vector<Problem> problems)
    : documents_(std::move(documents)), problems_(std::move(problems)) {
  std::set<std::string_view> problem_names;
  for (const Problem& p : problems_) {
    if (p.name.empty()) throw DataError("problem name is empty");
    if (!problem_names.insert(p.name).second) {
      throw DataError("duplicate problem '" + p.name + "'");
    }
    if (p.classes.size() < 2) {
      throw DataError("problem '" + p.name + "' declares fewer than 2 classes");
    }
    std::set<std::string_view> seen(p.classes.begin(), p.classes.end());
    if (seen.size() != p.classes.size()) {
      throw DataError("problem '" + p.name + "' lists a class twice");
    }
  }
  std::unordered_set<std::string_view> ids;
  for (const Document& d : documents_) {
    if (d.id.empty()) throw DataError("document with empty id");
    if (!ids.insert(d.id).second) throw DataError("duplicate id '" + d.id + "'");
    if (d.labels.size() != problems_.size()) {
      throw DataError("document '" + d.id + "' has wrong number of labels");
    }
    for (std::size_t p = 0; p < problems_.size(); ++p) {
      if (problems_[p].class_index(d.labels[p]) < 0) {
        throw DataError("document '" + d.id + "': label '" + d.labels[p] +
                        "' is not a class of problem '" + problems_[p].name +
                        "'");
      }
    }
  }
}

std::size_t Dataset::problem_index(std::string_view name) const {
  for (std::size_t i = 0; i < problems_.size(); ++i) {
    if (problems_[i].name == name) return i;
  }
  throw DataError("unknown problem (label column) '" + std::string(name) + "'");
}

std::vector<int> Dataset::class_indices(std::string_view problem) const {
  const std::size_t p = problem_index(problem);
  std::vector<int> out;
  out.reserve(documents_.size());
  for (const Document& d : documents_) {
    out.push_back(problems_[p].class_index(d.labels[p]));
  }
  return out;
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Dataset out;
  out.problems_ = problems_;
  out.documents_.reserve(rows.size());
  for (std::size_t r : rows) out.documents_.push_back(documents_.at(r));
  return out;
}

std::string escape_field(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\' || i + 1 == field.size()) {
      out += field[i];
      continue;
    }
    switch (field[++i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case '\\': out += '\\'; break;
      default:
        // Unknown escapes are kept verbatim.
        out += '\\';
        out += field[i];
    }
  }
  return out;
}

Dataset read_dataset(std::istream& in, const LoadOptions& options,
                     std::string_view source) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line()) throw DataError(std::string(source) + ": empty file");
  if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);

  const auto header = split_tabs(line);
  int id_col = -1;
  int text_col = -1;
  std::vector<int> label_cols;
  std::vector<std::string> label_names;
  std::set<std::string_view> seen;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!seen.insert(header[c]).second) {
      throw DataError(where(source, 1) + ": duplicate column '" +
                      std::string(header[c]) + "'");
    }
    if (header[c] == "id") {
      id_col = static_cast<int>(c);
    } else if (header[c] == "text") {
      text_col = static_cast<int>(c);
    } else if (header[c].empty()) {
      throw DataError(where(source, 1) + ": empty column name");
    } else if (!options.ignore_labels) {
      label_cols.push_back(static_cast<int>(c));
      label_names.emplace_back(header[c]);
    }
  }
  if (id_col < 0) throw DataError(where(source, 1) + ": missing column 'id'");
  if (text_col < 0) {
    throw DataError(where(source, 1) + ": missing column 'text'");
  }
  if (options.require_labels && !options.ignore_labels && label_cols.empty()) {
    throw DataError(where(source, 1) + ": no label column");
  }
  for (const auto& [name, order] : options.class_orders) {
    (void)order;
    if (options.require_labels && !options.ignore_labels &&
        std::find(label_names.begin(), label_names.end(), name) ==
            label_names.end()) {
      throw DataError(std::string(source) + ": missing label column '" + name +
                      "'");
    }
  }

  std::vector<Document> docs;
  while (next_line()) {
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != header.size()) {
      std::ostringstream os;
      os << where(source, line_no) << ": expected " << header.size()
         << " columns, found " << fields.size();
      throw DataError(os.str());
    }
    Document d;
    d.id = unescape_field(fields[id_col]);
    d.text = unescape_field(fields[text_col]);
    for (int c : label_cols) {
      std::string label = unescape_field(fields[c]);
      if (label.empty()) {
        throw DataError(where(source, line_no) + ": empty label in column '" +
                        std::string(header[c]) + "'");
      }
      d.labels.push_back(std::move(label));
    }
    if (d.id.empty()) throw DataError(where(source, line_no) + ": empty id");
    docs.push_back(std::move(d));
  }

  std::vector<Problem> problems;
  for (std::size_t p = 0; p < label_names.size(); ++p) {
    Problem problem{label_names[p], {}};
    std::set<std::string> observed;
    for (const Document& d : docs) observed.insert(d.labels[p]);
    if (auto it = options.class_orders.find(problem.name);
        it != options.class_orders.end()) {
      problem.classes = it->second;
      for (const std::string& label : observed) {
        if (problem.class_index(label) < 0) {
          throw DataError(std::string(source) + ": label '" + label +
                          "' missing from the declared class order of '" +
                          problem.name + "'");
        }
      }
    } else {
      problem.classes.assign(observed.begin(), observed.end());
    }
    problems.push_back(std::move(problem));
  }

  try {
    return Dataset(std::move(docs), std::move(problems));
  } catch (const DataError& e) {
    throw DataError(std::string(source) + ": " + e.what());
  }
}

Dataset load_dataset(const std::filesystem::path& path,
                     const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_dataset(in, options, path.string());
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  out << "id\ttext";
  for (const Problem& p : dataset.problems()) out << '\t' << escape_field(p.name);
  out << '\n';
  for (const Document& d : dataset.documents()) {
    out << escape_field(d.id) << '\t' << escape_field(d.text);
    for (const std::string& label : d.labels) out << '\t' << escape_field(label);
    out << '\n';
  }
}

StatsReport dataset_stats(const Dataset& dataset) {
  StatsReport report;
  report.documents = dataset.size();
  std::size_t total_length = 0;
  for (const Document& d : dataset.documents()) {
    const std::size_t len = unicode::length(d.text);
    total_length += len;
    if (len == 0) ++report.empty_documents;
  }
  if (report.documents > 0) {
    report.mean_length =
        static_cast<double>(total_length) / static_cast<double>(report.documents);
  }
  for (const Problem& p : dataset.problems()) {
    ProblemStats ps{p.name, {}};
    std::vector<std::size_t> counts(p.classes.size(), 0);
    for (int c : dataset.class_indices(p.name)) ++counts[c];
    for (std::size_t c = 0; c < p.classes.size(); ++c) {
      const double pct = report.documents == 0
                             ? 0.0
                             : 100.0 * static_cast<double>(counts[c]) /
                                   static_cast<double>(report.documents);
      ps.classes.push_back({p.classes[c], counts[c], pct});
    }
    report.problems.push_back(std::move(ps));
  }
  return report;
}

std::string format_stats(const StatsReport& report) {
  std::size_t width = 5;
  for (const ProblemStats& p : report.problems) {
    for (const ClassCount& c : p.classes) width = std::max(width, c.name.size());
  }
  std::ostringstream os;
  os << "documents        " << report.documents << '\n'
     << "empty documents  " << report.empty_documents << '\n'
     << "mean length      " << std::fixed << std::setprecision(1)
     << report.mean_length << '\n';
  for (const ProblemStats& p : report.problems) {
    os << '\n' << "problem " << p.problem << '\n';
    for (const ClassCount& c : p.classes) {
      os << "  " << std::left << std::setw(static_cast<int>(width)) << c.name
         << std::right << std::setw(8) << c.count << std::setw(8)
         << std::fixed << std::setprecision(1) << c.percent << "%\n";
    }
  }
  return os.str();
}

nlohmann::json stats_to_json(const StatsReport& report) {
  nlohmann::json problems = nlohmann::json::array();
  for (const ProblemStats& p : report.problems) {
    nlohmann::json classes = nlohmann::json::array();
    for (const ClassCount& c : p.classes) {
      classes.push_back({{"class", c.name}, {"count", c.count},
                         {"percent", c.percent}});
    }
    problems.push_back({{"problem", p.problem}, {"classes", classes}});
  }
  return {{"documents", report.documents},
          {"empty_documents", report.empty_documents},
          {"mean_length", report.mean_length},
          {"problems", problems}};
}

std::vector<std::size_t> FoldAssignment::train_rows(int held_out) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] != held_out) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldAssignment::test_rows(int held_out) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] == held_out) rows.push_back(i);
  }
  return rows;
}

FoldAssignment split_stratified(const Dataset& dataset, int k,
                                std::string_view problem, std::uint64_t seed) {
  if (k < 2) throw DataError("fold count must be at least 2");
  const Problem& p = dataset.problem(problem);
  const std::vector<int> classes = dataset.class_indices(problem);

  std::vector<std::vector<std::size_t>> groups(p.classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) groups[classes[i]].push_back(i);
  for (std::size_t c = 0; c < groups.size(); ++c) {
    if (groups[c].size() < static_cast<std::size_t>(k)) {
      std::ostringstream os;
      os << "class '" << p.classes[c] << "' of problem '" << p.name << "' has "
         << groups[c].size() << " documents, fewer than k=" << k;
      throw DataError(os.str());
    }
  }

  FoldAssignment out;
  out.k = k;
  out.seed = seed;
  out.stratify_by = std::string(problem);
  out.fold.assign(dataset.size(), -1);

  // Fisher-Yates with an explicit modulo draw: std::shuffle and the standard
  // distributions are implementation-defined, the raw engine output is not.
  std::mt19937_64 rng(seed);
  int next = 0;
  for (auto& group : groups) {
    for (std::size_t i = group.size(); i > 1; --i) {
      std::swap(group[i - 1], group[rng() % i]);
    }
    for (std::size_t row : group) {
      out.fold[row] = next;
      next = (next + 1) % k;
    }
  }
  return out;
}

}  // namespace ngramclf
