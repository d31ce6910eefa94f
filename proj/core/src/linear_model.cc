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

#include "ngramclf/linear_model.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <random>
#include <set>

#include "ngramclf/error.h"
#include "ngramclf/parallel.h"

namespace ngramclf {
namespace {

// log(1 + exp(-m)) without overflow.
double logistic_loss(double margin) {
  return margin >= 0.0 ? std::log1p(std::exp(-margin))
                       : -margin + std::log1p(std::exp(margin));
}

// 1 / (1 + exp(m)).
double sigmoid_neg(double margin) {
  if (margin >= 0.0) {
    const double e = std::exp(-margin);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(margin));
}

void check_problem(std::span<const SparseVector> x, std::span<const int> y,
                   std::span<const double> costs, std::size_t dim) {
  if (x.size() != y.size() || x.size() != costs.size()) {
    throw DataError("train_binary: instance, label and cost counts differ");
  }
  if (x.size() < 2) throw DataError("train_binary: need at least 2 instances");
  bool has_pos = false;
  bool has_neg = false;
  for (int label : y) {
    if (label == 1) {
      has_pos = true;
    } else if (label == -1) {
      has_neg = true;
    } else {
      throw DataError("train_binary: labels must be -1 or +1");
    }
  }
  if (!has_pos || !has_neg) {
    throw DataError("train_binary: both classes must be present");
  }
  for (double c : costs) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw DataError("train_binary: instance costs must be positive");
    }
  }
  for (const SparseVector& xi : x) {
    for (const auto& [index, value] : xi.entries) {
      if (index >= dim) throw DataError("train_binary: feature index out of range");
      if (!std::isfinite(value)) {
        throw DataError("train_binary: non-finite feature value");
      }
    }
  }
}

double gradient_norm(std::span<const SparseVector> x, std::span<const int> y,
                     std::span<const double> costs,
                     std::span<const double> weights, double bias,
                     bool use_bias) {
  const std::vector<double> g =
      objective_gradient(x, y, costs, weights, bias, use_bias);
  double sum = 0.0;
  for (double v : g) sum += v * v;
  return std::sqrt(sum);
}

// Fixed seed for the coordinate visiting order; training is deterministic.
constexpr std::uint64_t kCoordinateSeed = 0x5eed1e55;

}  // namespace

void validate(const TrainConfig& config) {
  if (!(config.C > 0.0) || !std::isfinite(config.C)) {
    throw DataError("C must be positive");
  }
  for (const auto& [name, w] : config.class_weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw DataError("class weight for '" + name + "' must be positive");
    }
  }
  if (!(config.tolerance > 0.0)) throw DataError("tolerance must be positive");
  if (config.max_iterations < 1) {
    throw DataError("max_iterations must be at least 1");
  }
}

double objective(std::span<const SparseVector> x, std::span<const int> y,
                 std::span<const double> costs, std::span<const double> weights,
                 double bias, bool use_bias) {
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  if (use_bias) reg += bias * bias;
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = x[i].dot(weights) + (use_bias ? bias : 0.0);
    loss += costs[i] * logistic_loss(y[i] * z);
  }
  return 0.5 * reg + loss;
}

std::vector<double> objective_gradient(std::span<const SparseVector> x,
                                       std::span<const int> y,
                                       std::span<const double> costs,
                                       std::span<const double> weights,
                                       double bias, bool use_bias) {
  std::vector<double> g(weights.begin(), weights.end());
  double g_bias = use_bias ? bias : 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = x[i].dot(weights) + (use_bias ? bias : 0.0);
    const double coef = -costs[i] * y[i] * sigmoid_neg(y[i] * z);
    for (const auto& [index, value] : x[i].entries) g[index] += coef * value;
    g_bias += coef;
  }
  if (use_bias) g.push_back(g_bias);
  return g;
}

// Coordinate descent on the dual
//   min_a 1/2 a'Qa + sum_i a_i log a_i + (C_i - a_i) log(C_i - a_i),
//   0 <= a_i <= C_i,  Q_ij = y_i y_j x_i.x_j,
// solving each one-variable subproblem by a safeguarded Newton iteration on
// the pair (a_i, C_i - a_i). w = sum_i a_i y_i x_i throughout.
BinaryModel train_binary(std::span<const SparseVector> x, std::span<const int> y,
                         std::span<const double> costs, std::size_t dim,
                         const TrainConfig& config,
                         TrainDiagnostics* diagnostics) {
  validate(config);
  check_problem(x, y, costs, dim);

  const std::size_t l = x.size();
  const bool use_bias = config.bias;
  const double bias_feature = use_bias ? 1.0 : 0.0;

  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  std::vector<double> alpha(2 * l);  // alpha_i and C_i - alpha_i interleaved
  std::vector<double> xtx(l);
  std::vector<std::size_t> order(l);
  for (std::size_t i = 0; i < l; ++i) {
    const double c = costs[i];
    alpha[2 * i] = std::min(0.001 * c, 1e-8);
    alpha[2 * i + 1] = c - alpha[2 * i];
    xtx[i] = x[i].squared_norm() + bias_feature * bias_feature;
    const double scale = y[i] * alpha[2 * i];
    for (const auto& [index, value] : x[i].entries) w[index] += scale * value;
    b += scale * bias_feature;
    order[i] = i;
  }

  constexpr int kMaxInnerIterations = 100;
  constexpr double kEta = 0.1;
  constexpr double kInnerEpsFloor = 1e-15;
  double inner_eps = 1e-2;
  const double inner_eps_min = std::min(1e-8, config.tolerance);

  std::mt19937_64 rng(kCoordinateSeed);
  TrainDiagnostics diag;
  int iter = 0;
  while (iter < config.max_iterations) {
    for (std::size_t i = 0; i + 1 < l; ++i) {
      const std::size_t j = i + rng() % (l - i);
      std::swap(order[i], order[j]);
    }

    int newton_iter = 0;
    for (std::size_t i : order) {
      const double yi = y[i];
      const double c = costs[i];
      const double a = xtx[i];
      const double ywx = yi * (x[i].dot(w) + b * bias_feature);

      std::size_t ind1 = 2 * i;
      std::size_t ind2 = 2 * i + 1;
      double sign = 1.0;
      if (0.5 * a * (alpha[ind2] - alpha[ind1]) + ywx < 0.0) {
        std::swap(ind1, ind2);
        sign = -1.0;
      }

      // g(z) = z log z + (C - z) log(C - z) + a/2 (z - z0)^2 + sign ywx (z - z0)
      const double alpha_old = alpha[ind1];
      double z = alpha_old;
      if (c - z < 0.5 * c) z *= 0.1;
      double gp = a * (z - alpha_old) + sign * ywx + std::log(z / (c - z));

      int inner = 0;
      while (inner <= kMaxInnerIterations) {
        if (std::fabs(gp) < inner_eps) break;
        const double gpp = a + c / (c - z) / z;
        const double next = z - gp / gpp;
        z = next <= 0.0 ? z * kEta : next;
        gp = a * (z - alpha_old) + sign * ywx + std::log(z / (c - z));
        ++newton_iter;
        ++inner;
      }

      if (inner > 0) {
        alpha[ind1] = z;
        alpha[ind2] = c - z;
        const double delta = sign * (z - alpha_old) * yi;
        for (const auto& [index, value] : x[i].entries) w[index] += delta * value;
        b += delta * bias_feature;
      }
    }
    ++iter;

    diag.gradient_norm = gradient_norm(x, y, costs, w, b, use_bias);
    if (diag.gradient_norm <= config.tolerance) {
      diag.converged = true;
      break;
    }
    if (newton_iter == 0) {
      // Every subproblem already meets inner_eps; only a tighter inner
      // tolerance can make progress.
      if (inner_eps <= kInnerEpsFloor) break;
      inner_eps = std::max(kInnerEpsFloor, 0.01 * inner_eps);
    } else if (static_cast<std::size_t>(newton_iter) <= l / 10) {
      inner_eps = std::max(inner_eps_min, 0.1 * inner_eps);
    }
  }
  diag.iterations = iter;
  if (!diag.converged) {
    std::cerr << "warning: logistic regression stopped after " << iter
              << " iterations with gradient norm " << diag.gradient_norm
              << " (tolerance " << config.tolerance << ")\n";
  }
  if (diagnostics) *diagnostics = diag;

  BinaryModel model;
  model.weights = std::move(w);
  model.bias = use_bias ? b : 0.0;
  return model;
}

std::size_t argmax_first(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

std::vector<double> LinearModel::decision_values(const SparseVector& x) const {
  std::vector<double> out(classes.size(), 0.0);
  if (classes.size() == 2 && models.size() == 1) {
    const double v = models[0].decision(x);
    const bool first_positive = models[0].positive_class == classes[0];
    out[0] = first_positive ? v : -v;
    out[1] = -out[0];
    return out;
  }
  for (std::size_t c = 0; c < models.size() && c < out.size(); ++c) {
    out[c] = models[c].decision(x);
  }
  return out;
}

std::size_t LinearModel::predict(const SparseVector& x) const {
  return argmax_first(decision_values(x));
}

nlohmann::json LinearModel::to_json() const {
  nlohmann::json per_class = nlohmann::json::array();
  for (const BinaryModel& m : models) {
    nlohmann::json weights = nlohmann::json::array();
    for (std::size_t i = 0; i < m.weights.size(); ++i) {
      if (m.weights[i] != 0.0) {
        weights.push_back(nlohmann::json::array({i, m.weights[i]}));
      }
    }
    per_class.push_back({{"class", m.positive_class},
                         {"bias", m.bias},
                         {"weights", std::move(weights)}});
  }
  return {{"format_version", kFormatVersion},
          {"classes", classes},
          {"weighting",
           {{"scheme", to_string(weighting.scheme)},
            {"k1", weighting.k1},
            {"b", weighting.b},
            {"normalization", to_string(weighting.normalization)}}},
          {"vocabulary", vocabulary.to_json()},
          {"models", std::move(per_class)}};
}

LinearModel LinearModel::from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kFormatVersion) {
      throw DataError("unsupported model format_version " +
                      std::to_string(version) + " (expected " +
                      std::to_string(kFormatVersion) + ")");
    }
    LinearModel m;
    m.classes = j.at("classes").get<std::vector<std::string>>();
    const auto& wj = j.at("weighting");
    m.weighting.scheme = parse_scheme(wj.at("scheme").get<std::string>());
    m.weighting.k1 = wj.at("k1").get<double>();
    m.weighting.b = wj.at("b").get<double>();
    m.weighting.normalization =
        parse_normalization(wj.at("normalization").get<std::string>());
    validate(m.weighting);
    m.vocabulary = Vocabulary::from_json(j.at("vocabulary"));
    const std::size_t dim = m.vocabulary.size();
    for (const auto& mj : j.at("models")) {
      BinaryModel bm;
      bm.positive_class = mj.at("class").get<std::string>();
      bm.bias = mj.at("bias").get<double>();
      bm.weights.assign(dim, 0.0);
      for (const auto& e : mj.at("weights")) {
        const auto index = e.at(0).get<std::size_t>();
        if (index >= dim) throw DataError("model weight index out of range");
        bm.weights[index] = e.at(1).get<double>();
      }
      m.models.push_back(std::move(bm));
    }
    if (m.classes.size() < 2) throw DataError("model declares fewer than 2 classes");
    const std::size_t expected = m.classes.size() == 2 ? 1 : m.classes.size();
    if (m.models.size() != expected) {
      throw DataError("model has " + std::to_string(m.models.size()) +
                      " per-class entries, expected " + std::to_string(expected));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

std::vector<double> instance_costs(std::span<const int> labels,
                                   std::span<const std::string> classes,
                                   const TrainConfig& config) {
  std::vector<double> per_class(classes.size(), config.C);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (auto it = config.class_weights.find(classes[c]);
        it != config.class_weights.end()) {
      per_class[c] *= it->second;
    }
  }
  std::vector<double> costs;
  costs.reserve(labels.size());
  for (int label : labels) costs.push_back(per_class.at(label));
  return costs;
}

LinearModel train_ovr(std::span<const SparseVector> x, std::span<const int> labels,
                      std::span<const std::string> classes, std::size_t dim,
                      const TrainConfig& config, int threads) {
  validate(config);
  if (classes.size() < 2) throw DataError("need at least 2 classes");
  if (x.size() != labels.size()) {
    throw DataError("instance and label counts differ");
  }
  for (const auto& [name, w] : config.class_weights) {
    (void)w;
    if (std::find(classes.begin(), classes.end(), name) == classes.end()) {
      throw DataError("class weight given for unknown class '" + name + "'");
    }
  }
  std::set<int> present(labels.begin(), labels.end());
  for (int label : present) {
    if (label < 0 || static_cast<std::size_t>(label) >= classes.size()) {
      throw DataError("label index out of range");
    }
  }
  if (present.size() < 2) throw DataError("training data contains a single class");

  const std::vector<double> costs = instance_costs(labels, classes, config);

  LinearModel model;
  model.classes.assign(classes.begin(), classes.end());

  std::vector<std::size_t> targets;
  if (classes.size() == 2) {
    std::size_t positive = 0;
    if (!config.positive_class.empty()) {
      const auto it =
          std::find(classes.begin(), classes.end(), config.positive_class);
      if (it == classes.end()) {
        throw DataError("positive class '" + config.positive_class +
                        "' is not a class of the problem");
      }
      positive = static_cast<std::size_t>(it - classes.begin());
    }
    targets.push_back(positive);
  } else {
    for (std::size_t c = 0; c < classes.size(); ++c) targets.push_back(c);
  }

  model.models.resize(targets.size());
  parallel_for(targets.size(), threads, [&](std::size_t t) {
    const int target = static_cast<int>(targets[t]);
    std::vector<int> y(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      y[i] = labels[i] == target ? 1 : -1;
    }
    if (!present.contains(target)) {
      throw DataError("class '" + classes[target] +
                      "' has no training instances");
    }
    BinaryModel m = train_binary(x, y, costs, dim, config);
    m.positive_class = classes[target];
    model.models[t] = std::move(m);
  });
  return model;
}

}  // namespace ngramclf
