// Copyright 2026 The ripu Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "classifier.hpp"
#include "losses.hpp"
#include "metrics.hpp"
#include "scoring.hpp"
#include "selection.hpp"
#include "tensor_io.hpp"

namespace ripu {

inline constexpr int kDefaultRegionK = 1;  // RA
inline constexpr int kDefaultPixelK = 32;  // PA
inline constexpr int kDefaultRounds = 5;
inline constexpr long kDefaultPixelBudget = 40;
inline constexpr double kDefaultRegionBudget = 0.022;

struct LoopConfig {
  int iterations = 1500;
  int pretrain_iterations = 600;
  int rounds = kDefaultRounds;
  // Explicit selection iterations in [1, iterations]; derived when empty.
  std::vector<int> selection_iterations;
  Budget budget = Budget::Fraction(kDefaultRegionBudget);
  AnnotationMode mode = AnnotationMode::kRegion;
  Strategy strategy = Strategy::kRipu;
  int k = kDefaultRegionK;
  int rect_h = 3;
  int rect_w = 3;
  double tau = kDefaultTau;
  double alpha1 = kDefaultAlpha1;
  double alpha2 = kDefaultAlpha2;
  double learning_rate = 0.1;
  double poly_power = 0.9;
  double momentum = 0.9;
  double weight_decay = 1e-4;
  int batch_per_domain = 1;  // one source + one target image per step
  std::uint64_t seed = 1;
  bool source_free = false;
  // Reference run: every target training label is known from the start.
  bool dense_target = false;
  bool eval_each_round = true;

  // Mode-dependent defaults: k=1 and 2.2% for RA, k=32 and 40 pixels for PA.
  static LoopConfig Defaults(AnnotationMode mode);

  // Rounds are spread over the first half of training, the first one
  // right after the first step: 1 + floor(j * N / (2S)), j = 0..S-1.
  std::vector<int> SelectionIterations() const;
  void Validate() const;
};

struct IterationRecord {
  int iteration = 0;
  int round = 0;  // selection rounds completed before this step
  double learning_rate = 0.0;
  LossReport loss;
};

struct RoundRecord {
  int round = 0;
  int iteration = 0;
  long round_spend = 0;       // pixels annotated this round, all images
  long cumulative_spend = 0;  // pixels annotated so far, all images
  double mean_spend_per_image = 0.0;
  int shortfall_images = 0;
  double miou = -1.0;  // target val mIoU after the round; -1 when not evaluated
};

struct LoopTrace {
  std::vector<IterationRecord> iterations;
  std::vector<RoundRecord> rounds;
  long source_reads_after_pretrain = 0;
  std::vector<std::string> warnings;
  double final_miou = 0.0;
};

struct LoopResult {
  ClassifierParams params;
  MetricsReport metrics;
  LoopTrace trace;
  std::vector<LabelMap> annotations;  // final active labels per target train image
};

// Seeded starting point of pretraining.
ClassifierParams InitialParams(int classes, int dims, const LoopConfig& config);

// Source-only training with the cross-entropy term.
ClassifierParams Pretrain(std::span<const io::Sample> source, const LoopConfig& config);

// Copies ground truth at exactly the newly annotated coordinates.
LabelMap OracleAnnotate(const LabelMap& ground_truth, const SelectionResult& picks,
                        const LabelMap& state);

// Runs one selection strategy on one image's prediction.
SelectionResult SelectFromPrediction(const PredictionMap& pred, const LabelMap& state,
                                     const LoopConfig& config, RoundBudget budget,
                                     std::uint64_t rng_seed);

// Same, predicting with `params` first (skipped for random selection).
SelectionResult SelectForImage(const ClassifierParams& params, const FeatureMap& features,
                               const LabelMap& state, const LoopConfig& config,
                               RoundBudget budget, std::uint64_t rng_seed);

LabelMap PredictLabels(const ClassifierParams& params, const FeatureMap& features);

MetricsReport Evaluate(const ClassifierParams& params, std::span<const io::Sample> val,
                       int classes);

LoopResult RunActiveLoop(const io::Dataset& data, const LoopConfig& config);

// Loads the manifest; in source-free mode the source tensors are released
// once pretraining is done.
LoopResult RunActiveLoop(const io::DatasetManifest& manifest, const LoopConfig& config);

std::string LoopConfigJson(const LoopConfig& config);
std::string MetricsJson(const MetricsReport& metrics, std::span<const std::string> class_names);
void WriteTraceCsv(const std::filesystem::path& path, const LoopTrace& trace);

}  // namespace ripu
