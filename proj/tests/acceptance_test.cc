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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.h"
#include "ngramclf/leaderboard.h"
#include "ngramclf/linear_model.h"
#include "ngramclf/model_selection.h"
#include "ngramclf/pipeline.h"
#include "ngramclf/weighting.h"
#include "oracles.h"
#include "synthetic.h"

namespace ngramclf {
namespace {

namespace fs = std::filesystem;

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Check leaderboard_reproduction() {
  Check c;
  const auto transformed = leaderboard::transform(
      leaderboard::load_csv(fs::path(NGRAMCLF_TEST_DATA_DIR) / "published_scores.csv"));
  auto sat = [&](const std::vector<std::string>& subset) {
    for (const auto& r : leaderboard::aggregate(transformed, subset)) {
      if (r.team == "SATLab") return r.mean;
    }
    return -1.0;
  };
  const double all = sat(transformed.problems());
  const double hm = sat({"hindi1", "hindi2", "marathi"});
  const double en = sat({"english1", "english2"});
  c.expect(std::abs(all - 0.9601) <= 5e-5, fmt("all five %.6f", all));
  c.expect(std::abs(hm - 0.9800) <= 5e-5, fmt("hindi+marathi %.6f", hm));
  c.expect(std::abs(en - 0.9302) <= 5e-5, fmt("english %.6f", en));
  for (const std::string problem : transformed.problems()) {
    double best = 0.0;
    for (const auto& r : transformed.rows) {
      if (r.problem == problem) best = std::max(best, r.macro_f1);
    }
    c.expect(best == 1.0, problem + " winner is not exactly 1.0");
  }
  c.detail = c.ok ? fmt("all %.6f", all) + fmt(", hindi+marathi %.6f", hm) +
                        fmt(", english %.6f", en)
                  : c.detail;
  return c;
}

Check weighting_oracle() {
  Check c;
  std::mt19937_64 rng(20210901);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double n = 1.0 + std::floor(u(rng) * 5000);
    const double df = 1.0 + std::floor(u(rng) * n);
    const double tf = 1.0 + std::floor(u(rng) * 50);
    const double dl = 1.0 + std::floor(u(rng) * 500);
    const double avg = 1.0 + u(rng) * 300;
    worst = std::max(worst, std::abs(tfidf_weight(tf, df, n) -
                                     testing::tfidf_reference(tf, df, n)));
    worst = std::max(worst, std::abs(bm25_weight(tf, df, n, dl, avg, 2.0, 0.75) -
                                     testing::bm25_reference(tf, df, n, dl, avg, 2.0, 0.75)));
  }
  c.expect(worst <= 1e-10, fmt("max deviation %.3g", worst));
  // (1 + ln 3) ln 2
  const double t = tfidf_weight(3, 2, 4);
  const double b = bm25_weight(2, 3, 10, 8, 8, 2.0, 0.75);
  c.expect(std::abs(t - 1.4546472) < 5e-8, fmt("tfidf worked value %.8f", t));
  c.expect(std::abs(b - 0.38107) < 5e-6, fmt("bm25 worked value %.8f", b));
  if (c.ok) c.detail = fmt("max deviation %.3g", worst) + fmt(", tfidf %.7f", t) +
                       fmt(", bm25 %.5f", b);
  return c;
}

Check normalization_invariants() {
  Check c;
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g(0.0, 4.0);
  for (int i = 0; i < 1000 && c.ok; ++i) {
    SparseVector x;
    const int n = 2 + static_cast<int>(rng() % 40);
    for (int j = 0; j < n; ++j) x.entries.emplace_back(j, g(rng));
    const SparseVector m = normalize_minmax(x);
    double lo = 1e9;
    double hi = -1e9;
    for (const auto& e : m.entries) {
      lo = std::min(lo, e.second);
      hi = std::max(hi, e.second);
    }
    c.expect(lo == 0.01 && hi == 1.01, fmt("minmax range off on instance %.0f", i));
    const double norm = std::sqrt(normalize_l2(x).squared_norm());
    c.expect(std::abs(norm - 1.0) <= 1e-9, fmt("l2 norm %.12f", norm));
  }
  c.expect(normalize_minmax(SparseVector{{{3, 0.7}}}).entries[0].second == 1.01,
           "single feature");
  const SparseVector zero{{{0, 0.0}, {5, 0.0}}};
  c.expect(normalize_l2(zero) == zero, "zero vector");
  if (c.ok) c.detail = "1000 instances, degenerate cases ok";
  return c;
}

Check macro_f1_oracle() {
  Check c;
  std::mt19937_64 rng(4);
  int disagreements = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 1 + rng() % 6;
    const std::size_t n = 1 + rng() % 300;
    std::vector<std::string> classes;
    for (std::size_t j = 0; j < k; ++j) classes.push_back(std::string(1, 'A' + j));
    std::vector<std::string> gold;
    std::vector<std::string> pred;
    for (std::size_t i = 0; i < n; ++i) {
      gold.push_back(classes[rng() % k]);
      pred.push_back(rng() % 2 ? gold.back() : classes[rng() % k]);
    }
    const double got = macro_f1(confusion(gold, pred, classes));
    if (std::abs(got - testing::macro_f1_reference(gold, pred, classes)) > 1e-12) {
      ++disagreements;
    }
  }
  c.expect(disagreements == 0, fmt("%.0f disagreements", disagreements));
  const std::vector<std::string> ab = {"A", "B"};
  const double w = macro_f1(confusion(std::vector<std::string>{"A", "B", "A", "B"},
                                      std::vector<std::string>{"A", "A", "A", "B"}, ab));
  c.expect(std::abs(w - 0.7333) < 5e-5, fmt("worked example %.6f", w));
  if (c.ok) c.detail = "1000 pairs agree" + fmt(", worked example %.4f", w);
  return c;
}

Check solver_correctness() {
  Check c;
  std::mt19937_64 rng(555);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_obj = 0.0;
  double worst_grad = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng() % 49;
    const std::size_t dim = 1 + rng() % 20;
    const auto x = testing::random_instances(n, dim, 0.5, 1000 + t);
    std::vector<int> y;
    std::vector<double> costs;
    const double C = std::exp(-3.0 + 6.0 * u(rng));
    const double w_pos = 0.2 + 4.8 * u(rng);
    for (std::size_t i = 0; i < n; ++i) {
      y.push_back(i < 2 ? (i == 0 ? 1 : -1) : (rng() % 2 ? 1 : -1));
      costs.push_back(y.back() > 0 ? C * w_pos : C);
    }
    const BinaryModel m = train_binary(x, y, costs, dim, TrainConfig{});
    const auto ref = testing::newton_reference(x, y, costs, dim, true);
    worst_obj = std::max(
        worst_obj, std::abs(objective(x, y, costs, m.weights, m.bias, true) - ref.objective));

    // Gradient check at a random point.
    std::vector<double> w(dim);
    for (double& v : w) v = 2.0 * u(rng) - 1.0;
    const double bias = 2.0 * u(rng) - 1.0;
    const auto grad = objective_gradient(x, y, costs, w, bias, true);
    const double h = 1e-5;
    for (std::size_t j = 0; j <= dim; ++j) {
      auto wp = w;
      auto wm = w;
      double bp = bias;
      double bm = bias;
      (j < dim ? wp[j] : bp) += h;
      (j < dim ? wm[j] : bm) -= h;
      const double fd = (objective(x, y, costs, wp, bp, true) -
                         objective(x, y, costs, wm, bm, true)) / (2 * h);
      worst_grad = std::max(worst_grad,
                            std::abs(fd - grad[j]) / std::max(1.0, std::abs(grad[j])));
    }
  }
  c.expect(worst_obj <= 1e-6, fmt("objective gap %.3g", worst_obj));
  c.expect(worst_grad <= 1e-4, fmt("gradient relative error %.3g", worst_grad));

  std::vector<SparseVector> sx;
  std::vector<int> sy;
  for (int i = 1; i <= 8; ++i) {
    sx.push_back(SparseVector{{{0, 0.5 * i}, {1, 1.0}}});
    sy.push_back(1);
    sx.push_back(SparseVector{{{0, -0.5 * i}, {1, 1.0}}});
    sy.push_back(-1);
  }
  const std::vector<double> sc(sx.size(), 100.0);
  const BinaryModel sm = train_binary(sx, sy, sc, 2, TrainConfig{});
  int correct = 0;
  for (std::size_t i = 0; i < sx.size(); ++i) correct += sy[i] * sm.decision(sx[i]) > 0;
  c.expect(correct == static_cast<int>(sx.size()), "separable data misclassified");
  if (c.ok) c.detail = fmt("objective gap %.3g", worst_obj) +
                       fmt(", gradient rel err %.3g", worst_grad) + ", separable acc 1.0";
  return c;
}

Check end_to_end_synthetic() {
  Check c;
  const Dataset corpus = testing::make_motif_corpus();
  CVOptions opts;
  opts.k = 3;
  opts.stratify_by = "task2";
  const CVReport a = cross_validate(corpus, preset("english1"), opts);
  const CVReport b = cross_validate(corpus, preset("english1"), opts);
  c.expect(a.mean_macro_f1 >= 0.9, fmt("mean Macro-F1 %.4f", a.mean_macro_f1));
  c.expect(to_json(a).dump() == to_json(b).dump(), "repeat run differs");
  if (c.ok) c.detail = fmt("mean Macro-F1 %.4f, repeat identical", a.mean_macro_f1);
  return c;
}

Check no_leakage() {
  Check c;
  const Dataset corpus = testing::make_motif_corpus();
  const PipelineConfig cfg = preset("english1");
  CVOptions opts;
  opts.stratify_by = "task2";
  std::vector<LinearModel> models;
  cross_validate(corpus, cfg, opts, &models);
  const FoldAssignment folds = split_stratified(corpus, opts.k, opts.stratify_by, opts.seed);
  c.expect(models.size() == static_cast<std::size_t>(opts.k), "missing fold models");
  for (int f = 0; f < opts.k && c.ok; ++f) {
    const Vocabulary fresh =
        build_vocabulary(preprocess_all(corpus.subset(folds.train_rows(f))), cfg.ngram);
    c.expect(models[f].vocabulary == fresh, fmt("fold %.0f vocabulary differs", f));
  }
  if (c.ok) c.detail = "3 folds match training-only builds";
  return c;
}

Check threads_determinism() {
  Check c;
  const fs::path dir = testing::make_temp_dir("acceptance");
  const std::string data = (dir / "data.tsv").string();
  testing::write_tsv(data, testing::make_motif_corpus());
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  auto cli = [](std::vector<std::string> args) {
    args.insert(args.begin(), "ngramclf");
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return std::pair{code, out.str()};
  };
  std::vector<std::string> outputs[2];
  int idx = 0;
  for (const std::string threads : {"1", "8"}) {
    const std::string model = (dir / ("model" + threads + ".json")).string();
    const std::string pred = (dir / ("pred" + threads + ".tsv")).string();
    const auto t = cli({"train", "--threads", threads, "--data", data, "--preset",
                        "english1", "-o", model});
    const auto p = cli({"predict", "--threads", threads, "--model", model, "--data", data,
                        "-o", pred});
    const auto v = cli({"cv", "--threads", threads, "--data", data, "--preset", "english1",
                        "--stratify-by", "task2", "--json"});
    c.expect(t.first == 0 && p.first == 0 && v.first == 0, "command failed");
    outputs[idx++] = {slurp(model), slurp(pred), v.second};
  }
  c.expect(outputs[0][0] == outputs[1][0], "model files differ");
  c.expect(outputs[0][1] == outputs[1][1], "predictions differ");
  c.expect(outputs[0][2] == outputs[1][2], "cv reports differ");
  fs::remove_all(dir);
  if (c.ok) c.detail = "model, predictions and cv report identical";
  return c;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  // 0 = no runtime bound
  std::function<Check()> run;
};

int run_all() {
  const std::vector<Criterion> criteria = {
      {1, "leaderboard reproduction", 1.0, leaderboard_reproduction},
      {2, "weighting oracle", 0.0, weighting_oracle},
      {3, "normalization invariants", 0.0, normalization_invariants},
      {4, "macro-F1 oracle", 0.0, macro_f1_oracle},
      {5, "solver correctness", 60.0, solver_correctness},
      {6, "end-to-end synthetic run", 60.0, end_to_end_synthetic},
      {7, "no leakage across folds", 0.0, no_leakage},
      {8, "determinism under threads", 0.0, threads_determinism},
  };
  int failures = 0;
  for (const auto& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = cr.run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.budget_seconds > 0 && secs >= cr.budget_seconds) {
      c.ok = false;
      c.detail += fmt(" (over %.0f s budget)", cr.budget_seconds);
    }
    failures += !c.ok;
    std::printf("%s [%d] %s: %s (%.2f s)\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name,
                c.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace ngramclf

int main() { return ngramclf::run_all(); }
