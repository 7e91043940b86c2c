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
#include <vector>

#include "tensor.hpp"

namespace ripu {

// Linear softmax pixel classifier: P(i,j,.) = softmax(W * phi(i,j) + bias).
// Gradients share this layout.
struct ClassifierParams {
  int classes = 0;
  int dims = 0;
  std::vector<double> weights;  // classes x dims, row-major
  std::vector<double> bias;     // classes

  static ClassifierParams Zeros(int classes, int dims);
  // Gaussian weights with standard deviation `scale`, zero bias.
  static ClassifierParams Random(int classes, int dims, std::uint64_t seed,
                                 double scale = 0.01);

  double& w(int c, int d) { return weights[static_cast<std::size_t>(c) * dims + d]; }
  double w(int c, int d) const { return weights[static_cast<std::size_t>(c) * dims + d]; }

  bool AllFinite() const;
  std::size_t ParameterCount() const { return weights.size() + bias.size(); }
  // Flat view for optimizers and finite differences: weights then bias.
  double& flat(std::size_t idx) {
    return idx < weights.size() ? weights[idx] : bias[idx - weights.size()];
  }
  double flat(std::size_t idx) const {
    return idx < weights.size() ? weights[idx] : bias[idx - weights.size()];
  }

  // this += scale * other
  void AddScaled(const ClassifierParams& other, double scale);

  friend bool operator==(const ClassifierParams&, const ClassifierParams&) = default;
};

// Stored on disk as a C x (D+1) f32 plane whose last column is the bias.
Grid2D<float> ParamsToPlane(const ClassifierParams& params);
ClassifierParams ParamsFromPlane(const Grid2D<float>& plane);

// Softmax output kept in double precision for the losses.
struct Activations {
  int height = 0;
  int width = 0;
  int classes = 0;
  std::vector<double> probs;      // H x W x C
  std::vector<double> log_probs;  // H x W x C

  std::size_t pixels() const { return static_cast<std::size_t>(height) * width; }
  const double* pixel(std::size_t idx) const { return probs.data() + idx * classes; }
};

Activations Forward(const ClassifierParams& params, const FeatureMap& feats);

// Forward pass narrowed to the f32 prediction map used by scoring.
PredictionMap Predict(const ClassifierParams& params, const FeatureMap& feats);
PredictionMap ToPredictionMap(const Activations& act);

// dL/dz given dL/dP, for each pixel's softmax.
std::vector<double> SoftmaxBackward(const Activations& act, const std::vector<double>& dprobs);

// Chains dL/dz (H x W x C) to the parameters.
ClassifierParams Backprop(const ClassifierParams& params, const FeatureMap& feats,
                          const std::vector<double>& dlogits);

}  // namespace ripu
