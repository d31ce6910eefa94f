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

#include "ngramclf/pipeline.h"

#include <algorithm>
#include <set>

#include "ngramclf/error.h"
#include "ngramclf/parallel.h"

namespace ngramclf {
namespace {

void reject_unknown_keys(const nlohmann::json& j,
                         std::initializer_list<std::string_view> known,
                         std::string_view where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (std::string_view k : known) ok = ok || item.key() == k;
    if (!ok) {
      throw DataError("config: unknown key '" + item.key() + "' in " +
                      std::string(where));
    }
  }
}

PipelineConfig make_preset(std::string problem, Scheme scheme,
                           Normalization normalization, double c,
                           std::map<std::string, double> weights,
                           std::string positive_class) {
  PipelineConfig cfg;
  cfg.problem = std::move(problem);
  cfg.ngram = {1, 5, 2, PruneBy::kTotal};
  cfg.weighting.scheme = scheme;
  cfg.weighting.normalization = normalization;
  cfg.train.C = c;
  cfg.train.class_weights = std::move(weights);
  cfg.train.positive_class = std::move(positive_class);
  return cfg;
}

}  // namespace

void validate(const PipelineConfig& config) {
  if (config.problem.empty()) throw DataError("config: problem is empty");
  validate(config.ngram);
  validate(config.weighting);
  validate(config.train);
  if (!config.class_order.empty()) {
    std::set<std::string> seen(config.class_order.begin(),
                               config.class_order.end());
    if (seen.size() != config.class_order.size() || seen.size() < 2) {
      throw DataError("config: class_order needs >= 2 distinct classes");
    }
  }
}

nlohmann::json to_json(const PipelineConfig& c) {
  nlohmann::json j;
  j["problem"] = c.problem;
  j["class_order"] = c.class_order;
  j["ngram"] = {{"min_len", c.ngram.min_len},
                {"max_len", c.ngram.max_len},
                {"min_count", c.ngram.min_count},
                {"prune_by", to_string(c.ngram.prune_by)}};
  j["weighting"] = {{"scheme", to_string(c.weighting.scheme)},
                    {"k1", c.weighting.k1},
                    {"b", c.weighting.b},
                    {"normalization", to_string(c.weighting.normalization)}};
  j["train"] = {{"C", c.train.C},
                {"class_weights", c.train.class_weights},
                {"positive_class", c.train.positive_class},
                {"bias", c.train.bias},
                {"tolerance", c.train.tolerance},
                {"max_iterations", c.train.max_iterations}};
  j["seed"] = c.seed;
  return j;
}

PipelineConfig config_from_json(const nlohmann::json& j) {
  return config_from_json(j, PipelineConfig{});
}

PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig c) {
  try {
    if (!j.is_object()) throw DataError("config: expected a JSON object");
    reject_unknown_keys(j, {"problem", "class_order", "ngram", "weighting",
                            "train", "seed", "description"},
                        "top level");
    if (j.contains("problem")) c.problem = j["problem"].get<std::string>();
    if (j.contains("class_order")) {
      c.class_order = j["class_order"].get<std::vector<std::string>>();
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("ngram")) {
      const auto& n = j["ngram"];
      reject_unknown_keys(n, {"min_len", "max_len", "min_count", "prune_by"},
                          "ngram");
      c.ngram.min_len = n.value("min_len", c.ngram.min_len);
      c.ngram.max_len = n.value("max_len", c.ngram.max_len);
      c.ngram.min_count = n.value("min_count", c.ngram.min_count);
      if (n.contains("prune_by")) {
        c.ngram.prune_by = parse_prune_by(n["prune_by"].get<std::string>());
      }
    }
    if (j.contains("weighting")) {
      const auto& w = j["weighting"];
      reject_unknown_keys(w, {"scheme", "k1", "b", "normalization"}, "weighting");
      if (w.contains("scheme")) {
        c.weighting.scheme = parse_scheme(w["scheme"].get<std::string>());
      }
      c.weighting.k1 = w.value("k1", c.weighting.k1);
      c.weighting.b = w.value("b", c.weighting.b);
      if (w.contains("normalization")) {
        c.weighting.normalization =
            parse_normalization(w["normalization"].get<std::string>());
      }
    }
    if (j.contains("train")) {
      const auto& t = j["train"];
      reject_unknown_keys(t, {"C", "class_weights", "positive_class", "bias",
                              "tolerance", "max_iterations"},
                          "train");
      c.train.C = t.value("C", c.train.C);
      if (t.contains("class_weights")) {
        c.train.class_weights =
            t["class_weights"].get<std::map<std::string, double>>();
      }
      c.train.positive_class = t.value("positive_class", c.train.positive_class);
      c.train.bias = t.value("bias", c.train.bias);
      c.train.tolerance = t.value("tolerance", c.train.tolerance);
      c.train.max_iterations = t.value("max_iterations", c.train.max_iterations);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

std::vector<std::string> preset_names() {
  return {"english1", "english2", "hindi1", "hindi2", "marathi"};
}

PipelineConfig preset(std::string_view name) {
  using enum Scheme;
  using enum Normalization;
  if (name == "english1") {
    return make_preset("task1", kSublinearTfidf, kMinMax, 1.1, {{"HOF", 0.5}},
                       "HOF");
  }
  if (name == "english2") {
    return make_preset("task2", kSublinearTfidf, kL2, 2.5,
                       {{"HATE", 2.0}, {"OFFN", 3.0}, {"PRFN", 0.8}}, "");
  }
  if (name == "hindi1") {
    return make_preset("task1", kBm25, kL2, 3.7, {{"HOF", 2.2}}, "HOF");
  }
  if (name == "hindi2") {
    return make_preset("task2", kSublinearTfidf, kMinMax, 0.083,
                       {{"HATE", 1.87}, {"OFFN", 0.93}, {"PRFN", 5.60}}, "");
  }
  if (name == "marathi") {
    return make_preset("task1", kBm25, kL2, 6.0, {{"HOF", 2.0}}, "HOF");
  }
  throw DataError("unknown preset '" + std::string(name) + "'");
}

LoadOptions load_options(const PipelineConfig& config) {
  LoadOptions options;
  if (!config.class_order.empty()) {
    options.class_orders[config.problem] = config.class_order;
  }
  return options;
}

std::vector<PaddedText> preprocess_all(const Dataset& dataset, int threads) {
  std::vector<PaddedText> out(dataset.size());
  parallel_for(dataset.size(), threads, [&](std::size_t i) {
    out[i] = preprocess(dataset.documents()[i].text);
  });
  return out;
}

std::vector<SparseVector> featurize(std::span<const PaddedText> docs,
                                    const Vocabulary& vocabulary,
                                    const WeightingConfig& weighting,
                                    int threads) {
  std::vector<SparseVector> out(docs.size());
  parallel_for(docs.size(), threads, [&](std::size_t i) {
    out[i] = apply_weighting(vectorize(docs[i], vocabulary), vocabulary, weighting);
  });
  return out;
}

LinearModel fit(const Dataset& train, const PipelineConfig& config, int threads) {
  validate(config);
  const Problem& problem = train.problem(config.problem);
  const std::vector<PaddedText> docs = preprocess_all(train, threads);
  Vocabulary vocabulary = build_vocabulary(docs, config.ngram);
  const std::vector<SparseVector> x =
      featurize(docs, vocabulary, config.weighting, threads);
  std::vector<int> labels = train.class_indices(config.problem);
  std::vector<std::string> classes = problem.classes;
  if (!config.class_order.empty() && config.class_order != classes) {
    std::vector<std::string> a = config.class_order;
    std::vector<std::string> b = classes;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) {
      throw DataError("config: class_order does not match the classes of '" +
                      config.problem + "'");
    }
    std::vector<int> remap(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
      remap[c] = static_cast<int>(
          std::find(config.class_order.begin(), config.class_order.end(), classes[c]) -
          config.class_order.begin());
    }
    for (int& l : labels) l = remap[l];
    classes = config.class_order;
  }
  LinearModel model = train_ovr(x, labels, classes, vocabulary.size(),
                                config.train, threads);
  model.vocabulary = std::move(vocabulary);
  model.weighting = config.weighting;
  return model;
}

std::vector<std::size_t> predict(const LinearModel& model, const Dataset& data,
                                 int threads) {
  const std::vector<PaddedText> docs = preprocess_all(data, threads);
  std::vector<std::size_t> out(docs.size());
  parallel_for(docs.size(), threads, [&](std::size_t i) {
    const SparseVector x = apply_weighting(vectorize(docs[i], model.vocabulary),
                                           model.vocabulary, model.weighting);
    out[i] = model.predict(x);
  });
  return out;
}

}  // namespace ngramclf
