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

#include "ngramclf/model_selection.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "ngramclf/error.h"
#include "ngramclf/parallel.h"

namespace ngramclf {
namespace {

std::string number(double v) { return nlohmann::json(v).dump(); }

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::vector<double> c_axis(const SearchSpace& space) {
  if (!space.c_values.empty()) return space.c_values;
  const CRange& r = space.c_range;
  std::vector<double> out;
  if (r.steps == 1) return {r.low};
  const double step = std::log(r.high / r.low) / (r.steps - 1);
  for (int i = 0; i < r.steps; ++i) {
    out.push_back(i + 1 == r.steps ? r.high : r.low * std::exp(step * i));
  }
  return out;
}

// Uniform double in [0, 1) from the raw engine output.
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (const auto& row : counts) n += std::accumulate(row.begin(), row.end(), std::size_t{0});
  return n;
}

void ConfusionMatrix::add(const ConfusionMatrix& other) {
  if (other.classes != classes) {
    throw DataError("cannot add confusion matrices over different classes");
  }
  for (std::size_t g = 0; g < counts.size(); ++g) {
    for (std::size_t p = 0; p < counts[g].size(); ++p) {
      counts[g][p] += other.counts[g][p];
    }
  }
}

ConfusionMatrix confusion(std::span<const int> gold,
                          std::span<const int> predicted,
                          std::span<const std::string> classes) {
  if (gold.size() != predicted.size()) {
    throw DataError("gold and predicted label counts differ");
  }
  const std::size_t n = classes.size();
  ConfusionMatrix cm{{classes.begin(), classes.end()},
                     std::vector<std::vector<std::size_t>>(
                         n, std::vector<std::size_t>(n, 0))};
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || predicted[i] < 0 || static_cast<std::size_t>(gold[i]) >= n ||
        static_cast<std::size_t>(predicted[i]) >= n) {
      throw DataError("label index out of range");
    }
    ++cm.counts[gold[i]][predicted[i]];
  }
  return cm;
}

ConfusionMatrix confusion(std::span<const std::string> gold,
                          std::span<const std::string> predicted,
                          std::span<const std::string> classes) {
  auto to_index = [&](const std::string& label) {
    const auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) throw DataError("unknown label '" + label + "'");
    return static_cast<int>(it - classes.begin());
  };
  if (gold.size() != predicted.size()) {
    throw DataError("gold and predicted label counts differ");
  }
  std::vector<int> g;
  std::vector<int> p;
  for (const auto& s : gold) g.push_back(to_index(s));
  for (const auto& s : predicted) p.push_back(to_index(s));
  return confusion(std::span<const int>(g), std::span<const int>(p), classes);
}

std::vector<ClassScores> class_scores(const ConfusionMatrix& cm) {
  const std::size_t n = cm.classes.size();
  std::vector<ClassScores> out;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t tp = cm.counts[c][c];
    std::size_t gold = 0;
    std::size_t pred = 0;
    for (std::size_t o = 0; o < n; ++o) {
      gold += cm.counts[c][o];
      pred += cm.counts[o][c];
    }
    ClassScores s;
    s.name = cm.classes[c];
    s.support = gold;
    s.precision = ratio(tp, pred);
    s.recall = ratio(tp, gold);
    s.f1 = s.precision + s.recall > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    out.push_back(s);
  }
  return out;
}

double macro_f1(const ConfusionMatrix& cm) {
  if (cm.classes.empty()) return 0.0;
  double sum = 0.0;
  for (const ClassScores& s : class_scores(cm)) sum += s.f1;
  return sum / static_cast<double>(cm.classes.size());
}

std::string format_confusion(const ConfusionMatrix& cm) {
  std::size_t width = 6;
  for (const auto& c : cm.classes) width = std::max(width, c.size() + 1);
  const int w = static_cast<int>(width);
  std::ostringstream os;
  os << std::left << std::setw(w) << "gold\\pred";
  for (const auto& c : cm.classes) os << std::right << std::setw(w) << c;
  os << '\n';
  for (std::size_t g = 0; g < cm.classes.size(); ++g) {
    os << std::left << std::setw(w) << cm.classes[g];
    for (std::size_t count : cm.counts[g]) os << std::right << std::setw(w) << count;
    os << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const ConfusionMatrix& cm) {
  return {{"classes", cm.classes}, {"counts", cm.counts}};
}

CVReport cross_validate(const Dataset& dataset, const PipelineConfig& config,
                        const CVOptions& options,
                        std::vector<LinearModel>* fold_models) {
  validate(config);
  const std::string stratify_by =
      options.stratify_by.empty() ? config.problem : options.stratify_by;
  const FoldAssignment folds =
      split_stratified(dataset, options.k, stratify_by, options.seed);
  const Problem& scored = dataset.problem(config.problem);
  const std::vector<int> gold = dataset.class_indices(config.problem);

  std::vector<ConfusionMatrix> per_fold(options.k);
  std::vector<LinearModel> models(options.k);
  parallel_for(static_cast<std::size_t>(options.k), options.threads,
               [&](std::size_t f) {
                 const int fold = static_cast<int>(f);
                 const auto train_rows = folds.train_rows(fold);
                 const auto test_rows = folds.test_rows(fold);
                 LinearModel model = fit(dataset.subset(train_rows), config, 1);
                 const std::vector<std::size_t> predicted =
                     predict(model, dataset.subset(test_rows), 1);
                 std::vector<int> g;
                 std::vector<int> p;
                 for (std::size_t i = 0; i < test_rows.size(); ++i) {
                   g.push_back(gold[test_rows[i]]);
                   // The model may order classes differently from the data.
                   p.push_back(scored.class_index(model.classes[predicted[i]]));
                 }
                 per_fold[f] = confusion(std::span<const int>(g),
                                         std::span<const int>(p), scored.classes);
                 if (fold_models) models[f] = std::move(model);
               });

  CVReport report;
  report.config = config;
  report.k = options.k;
  report.seed = options.seed;
  report.stratify_by = stratify_by;
  report.pooled = per_fold[0];
  for (int f = 0; f < options.k; ++f) {
    report.fold_macro_f1.push_back(macro_f1(per_fold[f]));
    if (f > 0) report.pooled.add(per_fold[f]);
  }
  report.mean_macro_f1 =
      std::accumulate(report.fold_macro_f1.begin(), report.fold_macro_f1.end(), 0.0) /
      options.k;
  report.pooled_macro_f1 = macro_f1(report.pooled);
  if (fold_models) *fold_models = std::move(models);
  return report;
}

nlohmann::json to_json(const CVReport& r) {
  return {{"config", to_json(r.config)},
          {"k", r.k},
          {"seed", r.seed},
          {"stratify_by", r.stratify_by},
          {"fold_macro_f1", r.fold_macro_f1},
          {"mean_macro_f1", r.mean_macro_f1},
          {"pooled_macro_f1", r.pooled_macro_f1},
          {"pooled_confusion", to_json(r.pooled)}};
}

std::string format_cv_report(const CVReport& r) {
  std::ostringstream os;
  os << r.k << "-fold cross-validation of '" << r.config.problem
     << "' stratified by '" << r.stratify_by << "' (seed " << r.seed << ")\n";
  os << std::fixed << std::setprecision(4);
  for (std::size_t f = 0; f < r.fold_macro_f1.size(); ++f) {
    os << "  fold " << f << "  Macro-F1 " << r.fold_macro_f1[f] << '\n';
  }
  os << "mean Macro-F1    " << r.mean_macro_f1 << '\n'
     << "pooled Macro-F1  " << r.pooled_macro_f1 << "\n\n"
     << format_confusion(r.pooled);
  return os.str();
}

void validate(const SearchSpace& space) {
  if (space.max_ngram_len.empty() || space.schemes.empty() ||
      space.normalizations.empty()) {
    throw DataError("search space: every axis needs at least one value");
  }
  for (int n : space.max_ngram_len) {
    if (n < 1) throw DataError("search space: max n-gram length must be >= 1");
  }
  if (space.c_values.empty()) {
    const CRange& r = space.c_range;
    if (!(r.low > 0.0) || !(r.high >= r.low) || r.steps < 1) {
      throw DataError("search space: C range needs 0 < low <= high, steps >= 1");
    }
  }
  for (double c : space.c_values) {
    if (!(c > 0.0)) throw DataError("search space: C values must be positive");
  }
  for (const auto& [name, grid] : space.class_weights) {
    if (grid.empty()) {
      throw DataError("search space: empty weight grid for '" + name + "'");
    }
    for (double w : grid) {
      if (!(w > 0.0)) throw DataError("search space: weights must be positive");
    }
  }
}

SearchSpace search_space_from_json(const nlohmann::json& j) {
  SearchSpace s;
  try {
    for (const auto& item : j.items()) {
      const std::string& key = item.key();
      if (key != "max_ngram_len" && key != "schemes" && key != "normalizations" &&
          key != "C" && key != "class_weights") {
        throw DataError("search space: unknown key '" + key + "'");
      }
    }
    if (j.contains("max_ngram_len")) {
      s.max_ngram_len = j["max_ngram_len"].get<std::vector<int>>();
    }
    if (j.contains("schemes")) {
      s.schemes.clear();
      for (const auto& v : j["schemes"]) s.schemes.push_back(parse_scheme(v.get<std::string>()));
    }
    if (j.contains("normalizations")) {
      s.normalizations.clear();
      for (const auto& v : j["normalizations"]) {
        s.normalizations.push_back(parse_normalization(v.get<std::string>()));
      }
    }
    if (j.contains("C")) {
      const auto& c = j["C"];
      if (c.is_array()) {
        s.c_values = c.get<std::vector<double>>();
      } else {
        s.c_range.low = c.at("low").get<double>();
        s.c_range.high = c.at("high").get<double>();
        s.c_range.steps = c.value("steps", s.c_range.steps);
      }
    }
    if (j.contains("class_weights")) {
      s.class_weights =
          j["class_weights"].get<std::map<std::string, std::vector<double>>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("search space: ") + e.what());
  }
  validate(s);
  return s;
}

nlohmann::json to_json(const SearchSpace& s) {
  nlohmann::json schemes = nlohmann::json::array();
  for (Scheme v : s.schemes) schemes.push_back(to_string(v));
  nlohmann::json norms = nlohmann::json::array();
  for (Normalization v : s.normalizations) norms.push_back(to_string(v));
  nlohmann::json c;
  if (!s.c_values.empty()) {
    c = s.c_values;
  } else {
    c = {{"low", s.c_range.low}, {"high", s.c_range.high}, {"steps", s.c_range.steps}};
  }
  return {{"max_ngram_len", s.max_ngram_len},
          {"schemes", schemes},
          {"normalizations", norms},
          {"C", c},
          {"class_weights", s.class_weights}};
}

SearchMode parse_search_mode(std::string_view name) {
  if (name == "grid") return SearchMode::kGrid;
  if (name == "random") return SearchMode::kRandom;
  throw DataError("unknown search mode '" + std::string(name) +
                  "' (expected grid or random)");
}

std::vector<PipelineConfig> search_candidates(const PipelineConfig& base,
                                              const SearchSpace& space,
                                              const SearchOptions& options) {
  validate(space);
  if (options.budget < 1) throw DataError("search budget must be at least 1");

  const std::vector<double> cs = c_axis(space);
  std::vector<std::string> weight_names;
  std::vector<const std::vector<double>*> weight_grids;
  for (const auto& [name, grid] : space.class_weights) {
    weight_names.push_back(name);
    weight_grids.push_back(&grid);
  }

  // Mixed-radix axes, slowest first.
  std::vector<std::size_t> radix{space.max_ngram_len.size(), space.schemes.size(),
                                 space.normalizations.size(), cs.size()};
  for (const auto* g : weight_grids) radix.push_back(g->size());

  auto make = [&](const std::vector<std::size_t>& digit, double c) {
    PipelineConfig cfg = base;
    cfg.ngram.max_len = space.max_ngram_len[digit[0]];
    cfg.ngram.min_len = std::min(cfg.ngram.min_len, cfg.ngram.max_len);
    cfg.weighting.scheme = space.schemes[digit[1]];
    cfg.weighting.normalization = space.normalizations[digit[2]];
    cfg.train.C = c;
    for (std::size_t w = 0; w < weight_names.size(); ++w) {
      cfg.train.class_weights[weight_names[w]] = (*weight_grids[w])[digit[4 + w]];
    }
    return cfg;
  };

  std::vector<PipelineConfig> out;
  const std::size_t budget = static_cast<std::size_t>(options.budget);
  if (options.mode == SearchMode::kGrid) {
    std::vector<std::size_t> digit(radix.size(), 0);
    while (out.size() < budget) {
      out.push_back(make(digit, cs[digit[3]]));
      std::size_t pos = radix.size();
      while (pos > 0) {
        --pos;
        if (++digit[pos] < radix[pos]) break;
        digit[pos] = 0;
        if (pos == 0) return out;  // grid exhausted
      }
    }
    return out;
  }

  std::mt19937_64 rng(options.seed);
  const bool continuous_c = space.c_values.empty();
  const double log_low = std::log(space.c_range.low);
  const double log_span = std::log(space.c_range.high) - log_low;
  for (std::size_t n = 0; n < budget; ++n) {
    std::vector<std::size_t> digit(radix.size(), 0);
    for (std::size_t a = 0; a < radix.size(); ++a) {
      if (a == 3 && continuous_c) continue;
      digit[a] = rng() % radix[a];
    }
    const double c =
        continuous_c ? std::exp(log_low + log_span * unit(rng)) : cs[digit[3]];
    out.push_back(make(digit, c));
  }
  return out;
}

std::vector<SearchResult> search(const Dataset& dataset,
                                 const PipelineConfig& base,
                                 const SearchSpace& space,
                                 const SearchOptions& options) {
  const std::vector<PipelineConfig> candidates =
      search_candidates(base, space, options);
  std::vector<SearchResult> results(candidates.size());
  CVOptions cv = options.cv;
  cv.threads = 1;
  parallel_for(candidates.size(), options.cv.threads, [&](std::size_t i) {
    results[i].candidate = i;
    results[i].config = candidates[i];
    results[i].report = cross_validate(dataset, candidates[i], cv);
  });
  std::stable_sort(results.begin(), results.end(),
                   [](const SearchResult& a, const SearchResult& b) {
                     return a.report.mean_macro_f1 > b.report.mean_macro_f1;
                   });
  return results;
}

nlohmann::json to_json(const std::vector<SearchResult>& results) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t r = 0; r < results.size(); ++r) {
    out.push_back({{"rank", r + 1},
                   {"candidate", results[r].candidate},
                   {"report", to_json(results[r].report)}});
  }
  return out;
}

std::string search_to_csv(const std::vector<SearchResult>& results) {
  std::set<std::string> weight_names;
  for (const auto& r : results) {
    for (const auto& [name, w] : r.config.train.class_weights) {
      (void)w;
      weight_names.insert(name);
    }
  }
  std::ostringstream os;
  os << "rank,candidate,max_len,scheme,normalization,C";
  for (const auto& name : weight_names) os << ",w_" << name;
  os << ",mean_macro_f1,pooled_macro_f1\n";
  for (std::size_t r = 0; r < results.size(); ++r) {
    const PipelineConfig& c = results[r].config;
    os << r + 1 << ',' << results[r].candidate << ',' << c.ngram.max_len << ','
       << to_string(c.weighting.scheme) << ','
       << to_string(c.weighting.normalization) << ',' << number(c.train.C);
    for (const auto& name : weight_names) {
      const auto it = c.train.class_weights.find(name);
      os << ',' << (it == c.train.class_weights.end() ? "1" : number(it->second));
    }
    os << ',' << number(results[r].report.mean_macro_f1) << ','
       << number(results[r].report.pooled_macro_f1) << '\n';
  }
  return os.str();
}

}  // namespace ngramclf
