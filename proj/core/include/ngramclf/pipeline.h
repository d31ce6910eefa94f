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

// End-to-end configuration and the fit/predict glue between corpus,
// features, weighting and the linear model.

#ifndef NGRAMCLF_PIPELINE_H_
#define NGRAMCLF_PIPELINE_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ngramclf/corpus.h"
#include "ngramclf/features.h"
#include "ngramclf/linear_model.h"
#include "ngramclf/weighting.h"

namespace ngramclf {

struct PipelineConfig {
  std::string problem = "task1";
  // Explicit class order of `problem`; empty means lexicographic.
  std::vector<std::string> class_order;
  VocabularyOptions ngram;
  WeightingConfig weighting;
  TrainConfig train;
  std::uint64_t seed = 42;

  bool operator==(const PipelineConfig&) const = default;
};

void validate(const PipelineConfig& config);

nlohmann::json to_json(const PipelineConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig base);

// Presets for the five submitted systems: english1, english2, hindi1,
// hindi2, marathi.
std::vector<std::string> preset_names();
PipelineConfig preset(std::string_view name);

// LoadOptions carrying the configured class order.
LoadOptions load_options(const PipelineConfig& config);

std::vector<PaddedText> preprocess_all(const Dataset& dataset, int threads = 1);

std::vector<SparseVector> featurize(std::span<const PaddedText> docs,
                                    const Vocabulary& vocabulary,
                                    const WeightingConfig& weighting,
                                    int threads = 1);

// Builds the vocabulary on `train` only, weights, and trains on
// config.problem.
LinearModel fit(const Dataset& train, const PipelineConfig& config,
                int threads = 1);

// Predicted class index (into model.classes) for each document.
std::vector<std::size_t> predict(const LinearModel& model, const Dataset& data,
                                 int threads = 1);

}  // namespace ngramclf

#endif  // NGRAMCLF_PIPELINE_H_
