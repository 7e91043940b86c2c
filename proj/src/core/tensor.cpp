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

#include "tensor.hpp"

#include <algorithm>
#include <cmath>

namespace ripu {

PredictionMap::PredictionMap(int height, int width, int classes,
                             std::vector<float> probs)
    : height_(height), width_(width), classes_(classes), probs_(std::move(probs)) {
  Require(height >= 1 && width >= 1, "prediction: height >= 1 and width >= 1");
  Require(classes >= 1 && classes <= kMaxClasses, "prediction: 1 <= classes <= 65535");
  Require(probs_.size() == pixels() * classes_,
          "prediction: values length equals height*width*classes");
  for (std::size_t p = 0; p < pixels(); ++p) {
    double sum = 0.0;
    for (float v : pixel(p)) {
      if (!(v >= 0.0f) || !std::isfinite(v)) {
        Fail(ErrorKind::kValidation,
             "prediction: entries nonnegative and finite (pixel " +
                 std::to_string(p) + ")");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      Fail(ErrorKind::kValidation,
           "prediction: per-pixel probabilities sum to 1 within 1e-4 (pixel " +
               std::to_string(p) + " sums to " + std::to_string(sum) + ")");
    }
  }
}

std::size_t LabelMap::CountLabeled() const {
  const auto v = values();
  return static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [](ClassId c) { return c != kUnlabeled; }));
}

int LabelMap::ClassUpperBound() const {
  int bound = 0;
  for (ClassId c : values()) {
    if (c != kUnlabeled) bound = std::max(bound, static_cast<int>(c) + 1);
  }
  return bound;
}

FeatureMap::FeatureMap(int height, int width, int dims, std::vector<float> feats)
    : height_(height), width_(width), dims_(dims), feats_(std::move(feats)) {
  Require(height >= 1 && width >= 1, "features: height >= 1 and width >= 1");
  Require(dims >= 1, "features: dims >= 1");
  Require(feats_.size() == pixels() * dims_,
          "features: values length equals height*width*dims");
  Require(std::all_of(feats_.begin(), feats_.end(),
                      [](float v) { return std::isfinite(v); }),
          "features: all entries finite");
}

}  // namespace ripu
