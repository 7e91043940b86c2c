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

#include "tensor.hpp"

namespace ripu {

class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int classes);

  // Accumulates every pixel whose ground truth is labeled. Predictions must
  // be dense and in range.
  void Add(const LabelMap& ground_truth, const LabelMap& prediction);

  int classes() const { return classes_; }
  // Rows are ground truth, columns prediction.
  long at(int truth, int predicted) const {
    return counts_[static_cast<std::size_t>(truth) * classes_ + predicted];
  }
  long total() const;

 private:
  int classes_;
  std::vector<long> counts_;
};

struct MetricsReport {
  std::vector<double> iou;           // per class, in [0, 1]
  std::vector<std::uint8_t> counted;  // 0 for classes absent from truth and prediction
  double miou = 0.0;                  // mean IoU over counted classes
  std::vector<double> selected_frequency;
  std::vector<double> dataset_frequency;
  std::vector<double> enrichment;
};

// IoU_c = TP / (TP + FP + FN); classes with an empty union are excluded.
MetricsReport IoUReport(const ConfusionMatrix& confusion);

struct ClassFrequencies {
  std::vector<double> selected;    // class histogram of annotated pixels
  std::vector<double> dataset;     // class histogram of dense ground truth
  std::vector<double> enrichment;  // selected / dataset, 0 where dataset is 0
};

ClassFrequencies ClassFrequencyReport(std::span<const LabelMap> annotations,
                                      std::span<const LabelMap> ground_truth, int classes);

// Mean enrichment of the `n` classes with the lowest dataset frequency.
double RarestClassEnrichment(const ClassFrequencies& freq, int n);

}  // namespace ripu
