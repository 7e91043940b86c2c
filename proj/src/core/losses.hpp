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
#include <span>
#include <vector>

#include "classifier.hpp"
#include "tensor.hpp"

namespace ripu {

inline constexpr double kDefaultAlpha1 = 0.1;
inline constexpr double kDefaultAlpha2 = 1.0;
inline constexpr double kDefaultTau = 0.05;

// A loss value with its gradient w.r.t. the logits (H x W x C).
struct LossTerm {
  double value = 0.0;
  std::vector<double> dlogits;
  long count = 0;  // normalizer actually used (labeled pixels, pixels, or negatives)
};

// Sparse cross-entropy averaged over labeled pixels only. No labeled pixels
// gives a zero loss and zero gradient.
LossTerm CrossEntropyLoss(const Activations& act, const LabelMap& labels);

// Mean L1 distance between each pixel's prediction and the mean prediction
// of its clipped 3x3 neighborhood. Subgradient uses sign(0) = 0.
LossTerm ConsistencyLoss(const Activations& act);

struct NegativeMask {
  std::vector<std::uint8_t> mask;  // H x W x C, 1 where P < tau
  long count = 0;
};

NegativeMask ComputeNegativeMask(std::span<const double> probs, double tau);
NegativeMask ComputeNegativeMask(const PredictionMap& pred, double tau);

// -(1/count) * sum mask * ln(1 - P); the mask is a constant.
LossTerm NegativeLearningLoss(const Activations& act, const NegativeMask& mask);
LossTerm NegativeLearningLoss(const Activations& act, double tau);

struct ObjectiveWeights {
  double alpha1 = kDefaultAlpha1;
  double alpha2 = kDefaultAlpha2;
  double tau = kDefaultTau;
  bool source_free = false;
};

struct LossReport {
  double sup_source = 0.0;
  double sup_target = 0.0;
  double consistency = 0.0;
  double negative = 0.0;
  double total = 0.0;
  long source_labeled = 0;
  long target_labeled = 0;
  long negatives = 0;
};

struct SourceItem {
  const FeatureMap* features;
  const LabelMap* labels;  // dense
};

struct TargetItem {
  const FeatureMap* features;
  const LabelMap* annotations;  // sparse, kUnlabeled where unknown
};

struct ObjectiveResult {
  LossReport report;
  ClassifierParams gradient;
  // Per-term gradients, before the alpha weights.
  ClassifierParams grad_sup_source;
  ClassifierParams grad_sup_target;
  ClassifierParams grad_consistency;
  ClassifierParams grad_negative;
};

// sup_source + sup_target + alpha1 * consistency + alpha2 * negative, each
// averaged over the images of its batch. Source-free drops both source terms
// and never touches the source batch.
ObjectiveResult TotalObjective(const ClassifierParams& params,
                               std::span<const SourceItem> source,
                               std::span<const TargetItem> target,
                               const ObjectiveWeights& weights);

}  // namespace ripu
