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

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "ngramclf/corpus.h"
#include "ngramclf/error.h"
#include "ngramclf/leaderboard.h"
#include "ngramclf/linear_model.h"
#include "ngramclf/model_selection.h"
#include "ngramclf/pipeline.h"

namespace ngramclf::cli {
namespace {

// Flags that override fields of the pipeline config.
struct ConfigFlags {
  std::string config_path;
  std::string preset_name;
  std::optional<std::string> problem;
  std::optional<int> min_len;
  std::optional<int> max_len;
  std::optional<std::size_t> min_count;
  std::optional<std::string> prune_by;
  std::optional<std::string> scheme;
  std::optional<std::string> normalization;
  std::optional<double> k1;
  std::optional<double> b;
  std::optional<double> c;
  std::vector<std::string> weights;  // CLASS=VALUE
  std::optional<std::string> positive_class;
  std::optional<bool> bias;
  std::optional<double> tolerance;
  std::optional<int> max_iterations;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> class_order;

  void attach(CLI::App* app, bool with_problem = true) {
    app->add_option("--config", config_path, "Pipeline config JSON");
    app->add_option("--preset", preset_name,
                    "Named preset: english1, english2, hindi1, hindi2, marathi");
    if (with_problem) {
      app->add_option("--problem,--score", problem, "Label column to learn and score");
    }
    app->add_option("--min-len", min_len, "Minimum n-gram length");
    app->add_option("--max-len", max_len, "Maximum n-gram length");
    app->add_option("--min-count", min_count, "Pruning threshold");
    app->add_option("--prune-by", prune_by, "total or df");
    app->add_option("--scheme", scheme, "sublinear_tfidf or bm25");
    app->add_option("--normalization", normalization, "l2 or minmax");
    app->add_option("--k1", k1, "BM25 k1");
    app->add_option("--b", b, "BM25 b");
    app->add_option("--C", c, "Cost parameter");
    app->add_option("--weight", weights, "Class cost multiplier CLASS=VALUE")
        ->allow_extra_args(false);
    app->add_option("--positive-class", positive_class,
                    "Class scored by a binary model");
    app->add_option("--bias", bias, "Train an intercept (true/false)");
    app->add_option("--tolerance", tolerance, "Solver gradient-norm tolerance");
    app->add_option("--max-iterations", max_iterations, "Solver pass limit");
    app->add_option("--seed", seed, "Seed for fold assignment and sampling");
    app->add_option("--class-order", class_order,
                    "Explicit class order of the problem")
        ->delimiter(',');
  }

  PipelineConfig resolve() const {
    if (!config_path.empty() && !preset_name.empty()) {
      throw DataError("--config and --preset are mutually exclusive");
    }
    PipelineConfig cfg;
    if (!preset_name.empty()) cfg = preset(preset_name);
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw DataError("cannot open config '" + config_path + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw DataError("config '" + config_path + "': " + e.what());
      }
      cfg = config_from_json(j);
    }
    if (problem) cfg.problem = *problem;
    if (min_len) cfg.ngram.min_len = *min_len;
    if (max_len) cfg.ngram.max_len = *max_len;
    if (min_count) cfg.ngram.min_count = *min_count;
    if (prune_by) cfg.ngram.prune_by = parse_prune_by(*prune_by);
    if (scheme) cfg.weighting.scheme = parse_scheme(*scheme);
    if (normalization) cfg.weighting.normalization = parse_normalization(*normalization);
    if (k1) cfg.weighting.k1 = *k1;
    if (b) cfg.weighting.b = *b;
    if (c) cfg.train.C = *c;
    for (const std::string& spec : weights) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw DataError("--weight expects CLASS=VALUE, got '" + spec + "'");
      }
      try {
        std::size_t used = 0;
        const std::string value = spec.substr(eq + 1);
        cfg.train.class_weights[spec.substr(0, eq)] = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
      } catch (const std::logic_error&) {
        throw DataError("--weight: bad value in '" + spec + "'");
      }
    }
    if (positive_class) cfg.train.positive_class = *positive_class;
    if (bias) cfg.train.bias = *bias;
    if (tolerance) cfg.train.tolerance = *tolerance;
    if (max_iterations) cfg.train.max_iterations = *max_iterations;
    if (seed) cfg.seed = *seed;
    if (!class_order.empty()) cfg.class_order = class_order;
    validate(cfg);
    return cfg;
  }
};

void echo_config(std::ostream& err, const PipelineConfig& cfg) {
  err << "effective config: " << to_json(cfg).dump() << '\n';
}

void write_output(const std::string& path, const std::string& content,
                  std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write '" + path + "'");
  f << content;
  if (!f) throw DataError("write to '" + path + "' failed");
}

nlohmann::json read_json(const std::string& path, std::string_view what) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + std::string(what) + " '" + path + "'");
  try {
    nlohmann::json j;
    in >> j;
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string(what) + " '" + path + "': " + e.what());
  }
}

// (id, label) pairs from a TSV with an `id` column and either a column named
// `problem` or exactly one column besides `id` and `text`.
std::vector<std::pair<std::string, std::string>> read_labels(
    const std::string& path, const std::string& problem) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) header.push_back(field);
    if (!line.empty() && line.back() == '\t') header.emplace_back();
  }
  int id_col = -1;
  int label_col = -1;
  std::vector<int> candidates;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "id") {
      id_col = static_cast<int>(c);
    } else if (header[c] != "text") {
      candidates.push_back(static_cast<int>(c));
      if (header[c] == problem) label_col = static_cast<int>(c);
    }
  }
  if (id_col < 0) throw DataError(path + ": missing column 'id'");
  if (label_col < 0) {
    if (candidates.size() != 1) {
      throw DataError(path + ": missing label column '" + problem + "'");
    }
    label_col = candidates[0];
  }
  std::vector<std::pair<std::string, std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      f.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (f.size() != header.size()) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " columns");
    }
    rows.emplace_back(unescape_field(f[id_col]), unescape_field(f[label_col]));
  }
  return rows;
}

int cmd_stats(const std::string& data, bool json, std::ostream& out) {
  const Dataset d = load_dataset(data);
  const StatsReport report = dataset_stats(d);
  if (json) {
    out << stats_to_json(report).dump(2) << '\n';
  } else {
    out << format_stats(report);
  }
  return kExitOk;
}

int cmd_train(const std::string& data, const ConfigFlags& flags,
              const std::string& model_out, int threads, std::ostream& out,
              std::ostream& err) {
  const PipelineConfig cfg = flags.resolve();
  echo_config(err, cfg);
  const Dataset d = load_dataset(data, load_options(cfg));
  const LinearModel model = fit(d, cfg, threads);
  nlohmann::json envelope = model.to_json();
  envelope["config"] = to_json(cfg);
  write_output(model_out, envelope.dump() + "\n", out);
  err << "trained on " << d.size() << " documents, " << model.vocabulary.size()
      << " features, classes";
  for (const auto& c : model.classes) err << ' ' << c;
  err << '\n';
  return kExitOk;
}

int cmd_predict(const std::string& model_path, const std::string& data,
                const std::string& out_path, int threads, std::ostream& out) {
  const nlohmann::json j = read_json(model_path, "model");
  const LinearModel model = LinearModel::from_json(j);
  std::string column = "label";
  if (j.contains("config") && j["config"].contains("problem")) {
    column = j["config"]["problem"].get<std::string>();
  }
  LoadOptions options;
  options.ignore_labels = true;
  const Dataset d = load_dataset(data, options);
  const std::vector<std::size_t> predicted = predict(model, d, threads);
  std::ostringstream os;
  os << "id\t" << escape_field(column) << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    os << escape_field(d.documents()[i].id) << '\t'
       << escape_field(model.classes[predicted[i]]) << '\n';
  }
  write_output(out_path, os.str(), out);
  return kExitOk;
}

int cmd_eval(const std::string& gold_path, const std::string& pred_path,
             const std::string& problem, bool json, std::ostream& out) {
  const auto gold = read_labels(gold_path, problem);
  const auto pred = read_labels(pred_path, problem);
  std::map<std::string, std::string> predicted;
  for (const auto& [id, label] : pred) {
    if (!predicted.emplace(id, label).second) {
      throw DataError(pred_path + ": duplicate id '" + id + "'");
    }
  }
  if (predicted.size() != gold.size()) {
    throw DataError("gold and prediction files cover different ids (" +
                    std::to_string(gold.size()) + " vs " +
                    std::to_string(predicted.size()) + ")");
  }
  std::vector<std::string> g;
  std::vector<std::string> p;
  std::set<std::string> classes;
  for (const auto& [id, label] : gold) {
    const auto it = predicted.find(id);
    if (it == predicted.end()) {
      throw DataError("id '" + id + "' has no prediction");
    }
    g.push_back(label);
    p.push_back(it->second);
    classes.insert(label);
    classes.insert(it->second);
  }
  if (g.empty()) throw DataError("no instances to evaluate");
  const std::vector<std::string> class_list(classes.begin(), classes.end());
  const ConfusionMatrix cm = confusion(g, p, class_list);
  const double score = macro_f1(cm);
  const auto scores = class_scores(cm);
  if (json) {
    nlohmann::json per_class = nlohmann::json::array();
    for (const auto& s : scores) {
      per_class.push_back({{"class", s.name},
                           {"precision", s.precision},
                           {"recall", s.recall},
                           {"f1", s.f1},
                           {"support", s.support}});
    }
    out << nlohmann::json{{"macro_f1", score},
                          {"per_class", per_class},
                          {"confusion", to_json(cm)}}
               .dump(2)
        << '\n';
    return kExitOk;
  }
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << "Macro-F1 " << score << "\n\n";
  for (const auto& s : scores) {
    os << "  " << std::left << std::setw(8) << s.name << std::right
       << " P " << s.precision << "  R " << s.recall << "  F1 " << s.f1
       << "  n=" << s.support << '\n';
  }
  os << '\n' << format_confusion(cm);
  out << os.str();
  return kExitOk;
}

int cmd_cv(const std::string& data, const ConfigFlags& flags, int k,
           const std::string& stratify_by, int threads, bool json,
           const std::string& out_path, std::ostream& out, std::ostream& err) {
  const PipelineConfig cfg = flags.resolve();
  echo_config(err, cfg);
  const Dataset d = load_dataset(data, load_options(cfg));
  CVOptions options;
  options.k = k;
  options.stratify_by = stratify_by;
  options.seed = cfg.seed;
  options.threads = threads;
  const CVReport report = cross_validate(d, cfg, options);
  write_output(out_path,
               json ? to_json(report).dump(2) + "\n" : format_cv_report(report),
               out);
  return kExitOk;
}

int cmd_tune(const std::string& data, const ConfigFlags& flags,
             const std::string& space_path, int budget, const std::string& mode,
             int k, const std::string& stratify_by, int threads,
             const std::string& json_out, const std::string& csv_out,
             std::ostream& out, std::ostream& err) {
  if (budget < 1) throw DataError("--budget must be at least 1");
  const PipelineConfig base = flags.resolve();
  echo_config(err, base);
  const SearchSpace space = space_path.empty()
                                ? SearchSpace{}
                                : search_space_from_json(read_json(space_path, "search space"));
  const Dataset d = load_dataset(data, load_options(base));
  SearchOptions options;
  options.budget = budget;
  options.mode = parse_search_mode(mode);
  options.seed = base.seed;
  options.cv.k = k;
  options.cv.stratify_by = stratify_by;
  options.cv.seed = base.seed;
  options.cv.threads = threads;
  const auto results = search(d, base, space, options);
  if (!json_out.empty()) write_output(json_out, to_json(results).dump(2) + "\n", out);
  const std::string csv = search_to_csv(results);
  if (!csv_out.empty()) {
    write_output(csv_out, csv, out);
  } else if (json_out.empty() || json_out != "-") {
    out << csv;
  }
  return kExitOk;
}

int cmd_leaderboard(const std::string& scores_path,
                    const std::vector<std::string>& problems, bool csv,
                    const std::string& transformed_out, std::ostream& out) {
  const leaderboard::ScoreTable table = leaderboard::load_csv(scores_path);
  const leaderboard::ScoreTable transformed = leaderboard::transform(table);
  const std::vector<std::string> subset =
      problems.empty() ? transformed.problems() : problems;
  const auto ranking = leaderboard::aggregate(transformed, subset);
  if (!transformed_out.empty()) {
    std::ostringstream os;
    leaderboard::write_csv(os, transformed);
    write_output(transformed_out, os.str(), out);
  }
  if (csv) {
    leaderboard::write_ranking_csv(out, ranking);
  } else {
    out << leaderboard::format_ranking(ranking);
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Character n-gram text classification toolkit", "ngramclf"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 1;
  app.add_option("--threads", threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);

  std::string data;
  bool json = false;

  auto* stats = app.add_subcommand("stats", "Class counts and document statistics");
  stats->add_option("--data", data, "Dataset TSV")->required();
  stats->add_flag("--json", json, "Machine-readable output");

  ConfigFlags train_flags;
  std::string model_out;
  auto* train = app.add_subcommand("train", "Fit a model and write it as JSON");
  train->add_option("--data", data, "Training TSV")->required();
  train->add_option("--model-out,-o", model_out, "Model file (- for stdout)")
      ->required();
  train_flags.attach(train);

  std::string model_path;
  std::string out_path;
  auto* pred = app.add_subcommand("predict", "Label every row of a TSV");
  pred->add_option("--model", model_path, "Model JSON")->required();
  pred->add_option("--data", data, "Input TSV (id, text)")->required();
  pred->add_option("--out,-o", out_path, "Predictions TSV (default stdout)");

  std::string gold_path;
  std::string pred_path;
  std::string problem = "task1";
  auto* eval = app.add_subcommand("eval", "Macro-F1 of predictions against gold labels");
  eval->add_option("--gold", gold_path, "Gold TSV")->required();
  eval->add_option("--pred", pred_path, "Predictions TSV")->required();
  eval->add_option("--problem", problem, "Label column")->capture_default_str();
  eval->add_flag("--json", json, "Machine-readable output");

  ConfigFlags cv_flags;
  int k = 3;
  std::string stratify_by;
  auto* cv = app.add_subcommand("cv", "Stratified k-fold cross-validation");
  cv->add_option("--data", data, "Dataset TSV")->required();
  cv->add_option("--k", k, "Fold count")->capture_default_str();
  cv->add_option("--stratify-by", stratify_by, "Problem defining the strata");
  cv->add_flag("--json", json, "Machine-readable output");
  cv->add_option("--out,-o", out_path, "Report file (default stdout)");
  cv_flags.attach(cv);

  ConfigFlags tune_flags;
  std::string space_path;
  int budget = 1;
  std::string mode = "grid";
  std::string json_out;
  std::string csv_out;
  auto* tune = app.add_subcommand("tune", "Cross-validated hyperparameter search");
  tune->add_option("--data", data, "Dataset TSV")->required();
  tune->add_option("--space", space_path, "Search space JSON");
  tune->add_option("--budget", budget, "Number of candidates")->required();
  tune->add_option("--mode", mode, "grid or random")->capture_default_str();
  tune->add_option("--k", k, "Fold count")->capture_default_str();
  tune->add_option("--stratify-by", stratify_by, "Problem defining the strata");
  tune->add_option("--json-out", json_out, "Ranked results as JSON");
  tune->add_option("--csv-out", csv_out, "Ranked results as CSV (default stdout)");
  tune_flags.attach(tune);

  std::string scores_path;
  std::vector<std::string> problems;
  bool csv = false;
  std::string transformed_out;
  auto* board = app.add_subcommand("leaderboard",
                                   "Rank teams by mean max-normalized Macro-F1");
  board->add_option("--scores", scores_path, "CSV team,problem,macro_f1")->required();
  board->add_option("--problems", problems, "Subset of problems")->delimiter(',');
  board->add_flag("--csv", csv, "CSV instead of an aligned table");
  board->add_option("--transformed-out", transformed_out,
                    "Write the transformed score table as CSV");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  if (!argv_rev.empty()) argv_rev.pop_back();  // program name
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*stats) return cmd_stats(data, json, out);
    if (*train) return cmd_train(data, train_flags, model_out, threads, out, err);
    if (*pred) return cmd_predict(model_path, data, out_path, threads, out);
    if (*eval) return cmd_eval(gold_path, pred_path, problem, json, out);
    if (*cv) {
      return cmd_cv(data, cv_flags, k, stratify_by, threads, json, out_path, out, err);
    }
    if (*tune) {
      return cmd_tune(data, tune_flags, space_path, budget, mode, k, stratify_by,
                      threads, json_out, csv_out, out, err);
    }
    if (*board) return cmd_leaderboard(scores_path, problems, csv, transformed_out, out);
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace ngramclf::cli
