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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace ripu {

using ClassId = std::uint16_t;

// Reserved label value for pixels without an annotation. It is the maximum
// value of the on-disk label dtype, so no class id can collide with it.
inline constexpr ClassId kUnlabeled = 0xFFFF;
inline constexpr int kMaxClasses = 0xFFFF;

// Dense row-major H x W grid.
template <typename T>
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(int height, int width, T fill = T{})
      : height_(height), width_(width) {
    Require(height >= 1 && width >= 1, "grid: height >= 1 and width >= 1");
    values_.assign(static_cast<std::size_t>(height) * width, fill);
  }
  Grid2D(int height, int width, std::vector<T> values)
      : height_(height), width_(width), values_(std::move(values)) {
    Require(height >= 1 && width >= 1, "grid: height >= 1 and width >= 1");
    Require(values_.size() == static_cast<std::size_t>(height) * width,
            "grid: values length equals height*width");
  }

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  T& operator()(int i, int j) { return values_[Index(i, j)]; }
  const T& operator()(int i, int j) const { return values_[Index(i, j)]; }
  T& operator[](std::size_t idx) { return values_[idx]; }
  const T& operator[](std::size_t idx) const { return values_[idx]; }

  std::size_t Index(int i, int j) const {
    return static_cast<std::size_t>(i) * width_ + j;
  }
  bool Contains(int i, int j) const {
    return i >= 0 && j >= 0 && i < height_ && j < width_;
  }
  bool SameShape(int height, int width) const {
    return height_ == height && width_ == width;
  }

  std::span<const T> values() const { return values_; }
  std::span<T> values() { return values_; }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<T> values_;
};

using RealGrid = Grid2D<double>;

// H x W x C softmax outputs, channel-last. Immutable once constructed.
class PredictionMap {
 public:
  static constexpr double kSumTolerance = 1e-4;

  PredictionMap() = default;
  // Validates nonnegativity and per-pixel normalization.
  PredictionMap(int height, int width, int classes, std::vector<float> probs);

  int height() const { return height_; }
  int width() const { return width_; }
  int classes() const { return classes_; }
  std::size_t pixels() const { return static_cast<std::size_t>(height_) * width_; }

  float at(int i, int j, int c) const {
    return probs_[(static_cast<std::size_t>(i) * width_ + j) * classes_ + c];
  }
  std::span<const float> pixel(int i, int j) const {
    return pixel(static_cast<std::size_t>(i) * width_ + j);
  }
  std::span<const float> pixel(std::size_t idx) const {
    return {probs_.data() + idx * classes_, static_cast<std::size_t>(classes_)};
  }
  std::span<const float> values() const { return probs_; }

  friend bool operator==(const PredictionMap&, const PredictionMap&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int classes_ = 0;
  std::vector<float> probs_;
};

// Class id per pixel, kUnlabeled where no label is known.
class LabelMap : public Grid2D<ClassId> {
 public:
  LabelMap() = default;
  LabelMap(int height, int width, ClassId fill = kUnlabeled)
      : Grid2D<ClassId>(height, width, fill) {}
  LabelMap(int height, int width, std::vector<ClassId> labels)
      : Grid2D<ClassId>(height, width, std::move(labels)) {}

  static LabelMap Unlabeled(int height, int width) {
    return LabelMap(height, width, kUnlabeled);
  }

  bool IsLabeled(int i, int j) const { return (*this)(i, j) != kUnlabeled; }
  std::size_t CountLabeled() const;
  bool IsDense() const { return CountLabeled() == size(); }
  // Largest class id present plus one; 0 when nothing is labeled.
  int ClassUpperBound() const;

  friend bool operator==(const LabelMap&, const LabelMap&) = default;
};

// H x W x D per-pixel input features, channel-last.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int height, int width, int dims, std::vector<float> feats);

  int height() const { return height_; }
  int width() const { return width_; }
  int dims() const { return dims_; }
  std::size_t pixels() const { return static_cast<std::size_t>(height_) * width_; }

  std::span<const float> pixel(std::size_t idx) const {
    return {feats_.data() + idx * dims_, static_cast<std::size_t>(dims_)};
  }
  std::span<const float> values() const { return feats_; }

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  int height_ = 0;
  int width_ = 0;
  int dims_ = 0;
  std::vector<float> feats_;
};

}  // namespace ripu
