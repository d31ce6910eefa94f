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

// Class-weighted L2-regularized logistic regression trained in the dual by
// coordinate descent, and one-vs-rest assembly for multiclass problems.

#ifndef NGRAMCLF_LINEAR_MODEL_H_
#define NGRAMCLF_LINEAR_MODEL_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ngramclf/features.h"
#include "ngramclf/weighting.h"

namespace ngramclf {

struct TrainConfig {
  double C = 1.0;
  // Multiplier of C for instances whose gold class is the key; default 1.
  std::map<std::string, double> class_weights;
  // Class scored by the single model of a binary problem. Empty selects the
  // first class in class order.
  std::string positive_class;
  bool bias = true;
  double tolerance = 1e-6;
  int max_iterations = 10000;

  bool operator==(const TrainConfig&) const = default;
};

void validate(const TrainConfig& config);

struct BinaryModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::string positive_class;

  double decision(const SparseVector& x) const { return x.dot(weights) + bias; }
};

struct TrainDiagnostics {
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

// Minimizes
//   1/2 (|w|^2 + bias^2) + sum_i cost_i log(1 + exp(-y_i (w.x_i + bias)))
// with y_i in {-1, +1}. With config.bias off the bias is fixed at 0. The
// intercept is regularized like any other weight, i.e. it acts as a constant
// feature of value 1. Stops when the primal gradient norm drops to
// config.tolerance; otherwise warns on stderr and returns the last iterate.
// Indices of x_i must be < dim.
BinaryModel train_binary(std::span<const SparseVector> x, std::span<const int> y,
                         std::span<const double> costs, std::size_t dim,
                         const TrainConfig& config,
                         TrainDiagnostics* diagnostics = nullptr);

// Primal objective minimized by train_binary.
double objective(std::span<const SparseVector> x, std::span<const int> y,
                 std::span<const double> costs, std::span<const double> weights,
                 double bias, bool use_bias);

// Gradient of `objective`: dim entries for the weights followed by one entry
// for the bias when use_bias is set.
std::vector<double> objective_gradient(std::span<const SparseVector> x,
                                       std::span<const int> y,
                                       std::span<const double> costs,
                                       std::span<const double> weights,
                                       double bias, bool use_bias);

struct LinearModel {
  static constexpr int kFormatVersion = 1;

  std::vector<std::string> classes;
  // One model for binary problems (scoring `positive_class`), otherwise one
  // per class in class order.
  std::vector<BinaryModel> models;
  Vocabulary vocabulary;
  WeightingConfig weighting;

  // Per class, in class order. Binary: the negative class gets the negation.
  std::vector<double> decision_values(const SparseVector& x) const;
  // Index into `classes` of the largest decision value; ties go to the
  // earlier class.
  std::size_t predict(const SparseVector& x) const;
  const std::string& predict_label(const SparseVector& x) const {
    return classes[predict(x)];
  }

  nlohmann::json to_json() const;
  static LinearModel from_json(const nlohmann::json& j);
};

// Argmax with ties resolved to the lowest index.
std::size_t argmax_first(std::span<const double> values);

// Cost of each instance: C times the weight of its gold class.
std::vector<double> instance_costs(std::span<const int> labels,
                                   std::span<const std::string> classes,
                                   const TrainConfig& config);

// Trains one binary model (binary problems) or one model per class. Labels
// are indices into `classes`. The returned model has no vocabulary attached.
LinearModel train_ovr(std::span<const SparseVector> x, std::span<const int> labels,
                      std::span<const std::string> classes, std::size_t dim,
                      const TrainConfig& config, int threads = 1);

}  // namespace ngramclf

#endif  // NGRAMCLF_LINEAR_MODEL_H_
