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

#include "metrics.hpp"

#include <algorithm>
#include <numeric>

namespace ripu {

ConfusionMatrix::ConfusionMatrix(int classes)
    : classes_(classes), counts_(static_cast<std::size_t>(classes) * classes, 0) {
  Require(classes >= 1 && classes <= kMaxClasses, "confusion: 1 <= classes <= 65535");
}

void ConfusionMatrix::Add(const LabelMap& ground_truth, const LabelMap& prediction) {
  Require(ground_truth.SameShape(prediction.height(), prediction.width()),
          "evaluate: prediction and ground truth share dimensions");
  for (std::size_t p = 0; p < ground_truth.size(); ++p) {
    const ClassId truth = ground_truth[p];
    if (truth == kUnlabeled) continue;
    const ClassId pred = prediction[p];
    if (truth >= classes_ || pred >= classes_) {
      Fail(ErrorKind::kValidation,
           "evaluate: class id " + std::to_string(std::max(truth, pred)) +
               " out of range for " + std::to_string(classes_) + " classes");
    }
    ++counts_[static_cast<std::size_t>(truth) * classes_ + pred];
  }
}

long ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), 0L);
}

MetricsReport IoUReport(const ConfusionMatrix& confusion) {
  const int classes = confusion.classes();
  MetricsReport report;
  report.iou.assign(classes, 0.0);
  report.counted.assign(classes, 0);
  double sum = 0.0;
  int used = 0;
  for (int c = 0; c < classes; ++c) {
    long row = 0;
    long col = 0;
    for (int k = 0; k < classes; ++k) {
      row += confusion.at(c, k);
      col += confusion.at(k, c);
    }
    const long tp = confusion.at(c, c);
    const long uni = row + col - tp;
    if (uni == 0) continue;
    report.iou[c] = static_cast<double>(tp) / static_cast<double>(uni);
    report.counted[c] = 1;
    sum += report.iou[c];
    ++used;
  }
  report.miou = used ? sum / used : 0.0;
  return report;
}

ClassFrequencies ClassFrequencyReport(std::span<const LabelMap> annotations,
                                      std::span<const LabelMap> ground_truth, int classes) {
  Require(classes >= 1, "class frequency: classes >= 1");
  std::vector<double> selected(classes, 0.0);
  std::vector<double> dataset(classes, 0.0);
  auto tally = [&](const LabelMap& labels, std::vector<double>& hist) {
    for (ClassId c : labels.values()) {
      if (c == kUnlabeled) continue;
      Require(c < classes, "class frequency: class id in range");
      hist[c] += 1.0;
    }
  };
  for (const auto& a : annotations) tally(a, selected);
  for (const auto& g : ground_truth) tally(g, dataset);
  auto normalize = [](std::vector<double>& hist) {
    const double total = std::accumulate(hist.begin(), hist.end(), 0.0);
    if (total > 0.0) {
      for (double& v : hist) v /= total;
    }
    return total;
  };
  if (normalize(selected) == 0.0) {
    Fail(ErrorKind::kValidation, "class frequency: at least one annotated pixel required");
  }
  normalize(dataset);
  ClassFrequencies out{selected, dataset, std::vector<double>(classes, 0.0)};
  for (int c = 0; c < classes; ++c) {
    if (dataset[c] > 0.0) out.enrichment[c] = selected[c] / dataset[c];
  }
  return out;
}

double RarestClassEnrichment(const ClassFrequencies& freq, int n) {
  const int classes = static_cast<int>(freq.dataset.size());
  std::vector<int> order(classes);
  std::iota(order.begin(), order.end(), 0);
  // Classes that never occur cannot be enriched; rank only present ones.
  std::erase_if(order, [&](int c) { return freq.dataset[c] <= 0.0; });
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return freq.dataset[a] < freq.dataset[b]; });
  n = std::min<int>(n, static_cast<int>(order.size()));
  Require(n >= 1, "rarest-class enrichment: at least one present class");
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += freq.enrichment[order[i]];
  return sum / n;
}

}  // namespace ripu
