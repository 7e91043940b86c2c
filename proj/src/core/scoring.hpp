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
#include <string_view>
#include <vector>

#include "tensor.hpp"

namespace ripu {

// RA labels every pixel of a selected region; PA labels only its center.
enum class AnnotationMode { kRegion, kPixel };

const char* AnnotationModeName(AnnotationMode mode);
// "ra" or "pa"; anything else is a usage error.
AnnotationMode ParseAnnotationMode(std::string_view name);

struct RegionSpec {
  enum class Kind { kSquareNeighbors, kFixedRectangle };

  Kind kind = Kind::kSquareNeighbors;
  int k = 1;       // half-width of the (2k+1) x (2k+1) window
  int rect_h = 3;  // tile size for kFixedRectangle
  int rect_w = 3;

  static RegionSpec SquareNeighbors(int k) {
    Require(k >= 0, "region: k >= 0");
    return RegionSpec{Kind::kSquareNeighbors, k, 2 * k + 1, 2 * k + 1};
  }
  static RegionSpec FixedRectangle(int rect_h, int rect_w) {
    Require(rect_h >= 1 && rect_w >= 1, "region: rectangle sides >= 1");
    return RegionSpec{Kind::kFixedRectangle, 0, rect_h, rect_w};
  }
};

// Square window around (i, j) clipped to the image; bounds are inclusive.
struct Window {
  int top = 0;
  int left = 0;
  int bottom = 0;
  int right = 0;

  static Window Around(int height, int width, int i, int j, int k);
  int Area() const { return (bottom - top + 1) * (right - left + 1); }
  bool Contains(int i, int j) const {
    return i >= top && i <= bottom && j >= left && j <= right;
  }
};

// Per-pixel class counts over the clipped k-square-neighbors window.
struct ClassHistogramField {
  int height = 0;
  int width = 0;
  int classes = 0;
  std::vector<std::uint32_t> counts;  // H x W x C, channel-last
  Grid2D<std::uint32_t> region_size;

  std::uint32_t count(int i, int j, int c) const {
    return counts[(static_cast<std::size_t>(i) * width + j) * classes + c];
  }
};

struct AcquisitionMaps {
  RealGrid impurity;     // region impurity of the pseudo-label window
  RealGrid entropy;      // per-pixel predictive entropy
  RealGrid uncertainty;  // window-mean entropy (RA) or entropy itself (PA)
  RealGrid score;        // uncertainty * impurity
};

// Argmax class per pixel; ties go to the lowest class index.
LabelMap PseudoLabels(const PredictionMap& pred);

// One summed-area table per class, then four-corner differencing of the
// clipped window. Cost is O(H*W*C) for any k.
ClassHistogramField ClassHistograms(const LabelMap& labels, int classes,
                                    const RegionSpec& spec);

RealGrid RegionImpurity(const ClassHistogramField& hist);

RealGrid PixelEntropy(const PredictionMap& pred);

// Mean of `values` over the clipped (2k+1)^2 window, via a summed-area table.
RealGrid WindowMean(const RealGrid& values, int k);

RealGrid RegionUncertainty(const RealGrid& entropy, const RegionSpec& spec,
                           AnnotationMode mode);

AcquisitionMaps ComputeAcquisition(const PredictionMap& pred, const RegionSpec& spec,
                                   AnnotationMode mode);

// 1 - max_c P, the softmax-confidence baseline score.
RealGrid SoftmaxUncertainty(const PredictionMap& pred);

}  // namespace ripu
