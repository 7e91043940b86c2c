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

#include "classifier.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ripu {

ClassifierParams ClassifierParams::Zeros(int classes, int dims) {
  Require(classes >= 1 && dims >= 1, "classifier: classes >= 1 and dims >= 1");
  ClassifierParams p;
  p.classes = classes;
  p.dims = dims;
  p.weights.assign(static_cast<std::size_t>(classes) * dims, 0.0);
  p.bias.assign(classes, 0.0);
  return p;
}

ClassifierParams ClassifierParams::Random(int classes, int dims, std::uint64_t seed,
                                          double scale) {
  ClassifierParams p = Zeros(classes, dims);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  for (double& w : p.weights) w = normal(rng);
  return p;
}

bool ClassifierParams::AllFinite() const {
  auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(weights.begin(), weights.end(), finite) &&
         std::all_of(bias.begin(), bias.end(), finite);
}

void ClassifierParams::AddScaled(const ClassifierParams& other, double scale) {
  Require(other.classes == classes && other.dims == dims, "classifier: shape mismatch");
  for (std::size_t i = 0; i < weights.size(); ++i) weights[i] += scale * other.weights[i];
  for (std::size_t i = 0; i < bias.size(); ++i) bias[i] += scale * other.bias[i];
}

Grid2D<float> ParamsToPlane(const ClassifierParams& params) {
  Grid2D<float> plane(params.classes, params.dims + 1);
  for (int c = 0; c < params.classes; ++c) {
    for (int d = 0; d < params.dims; ++d) plane(c, d) = static_cast<float>(params.w(c, d));
    plane(c, params.dims) = static_cast<float>(params.bias[c]);
  }
  return plane;
}

ClassifierParams ParamsFromPlane(const Grid2D<float>& plane) {
  Require(plane.width() >= 2, "classifier plane: at least one feature column plus bias");
  ClassifierParams p = ClassifierParams::Zeros(plane.height(), plane.width() - 1);
  for (int c = 0; c < p.classes; ++c) {
    for (int d = 0; d < p.dims; ++d) p.w(c, d) = plane(c, d);
    p.bias[c] = plane(c, p.dims);
  }
  Require(p.AllFinite(), "classifier: all parameters finite");
  return p;
}

Activations Forward(const ClassifierParams& params, const FeatureMap& feats) {
  if (feats.dims() != params.dims) {
    Fail(ErrorKind::kValidation, "forward: feature dims " + std::to_string(feats.dims()) +
                                     " do not match classifier dims " +
                                     std::to_string(params.dims));
  }
  const int classes = params.classes;
  Activations act;
  act.height = feats.height();
  act.width = feats.width();
  act.classes = classes;
  act.probs.resize(feats.pixels() * classes);
  act.log_probs.resize(act.probs.size());
  std::vector<double> z(classes);
  for (std::size_t p = 0; p < feats.pixels(); ++p) {
    const auto phi = feats.pixel(p);
    double zmax = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < classes; ++c) {
      double acc = params.bias[c];
      const double* row = &params.weights[static_cast<std::size_t>(c) * params.dims];
      for (int d = 0; d < params.dims; ++d) acc += row[d] * phi[d];
      z[c] = acc;
      zmax = std::max(zmax, acc);
    }
    double denom = 0.0;
    for (int c = 0; c < classes; ++c) denom += std::exp(z[c] - zmax);
    const double log_denom = std::log(denom);
    double* probs = &act.probs[p * classes];
    double* logs = &act.log_probs[p * classes];
    for (int c = 0; c < classes; ++c) {
      logs[c] = z[c] - zmax - log_denom;
      probs[c] = std::exp(logs[c]);
    }
  }
  return act;
}

PredictionMap ToPredictionMap(const Activations& act) {
  std::vector<float> probs(act.probs.begin(), act.probs.end());
  return PredictionMap(act.height, act.width, act.classes, std::move(probs));
}

PredictionMap Predict(const ClassifierParams& params, const FeatureMap& feats) {
  return ToPredictionMap(Forward(params, feats));
}

std::vector<double> SoftmaxBackward(const Activations& act, const std::vector<double>& dprobs) {
  Require(dprobs.size() == act.probs.size(), "softmax backward: gradient shape");
  std::vector<double> dz(dprobs.size());
  const int classes = act.classes;
  for (std::size_t p = 0; p < act.pixels(); ++p) {
    const double* P = act.pixel(p);
    const double* g = &dprobs[p * classes];
    double dot = 0.0;
    for (int c = 0; c < classes; ++c) dot += P[c] * g[c];
    for (int c = 0; c < classes; ++c) dz[p * classes + c] = P[c] * (g[c] - dot);
  }
  return dz;
}

ClassifierParams Backprop(const ClassifierParams& params, const FeatureMap& feats,
                          const std::vector<double>& dlogits) {
  Require(dlogits.size() == feats.pixels() * params.classes, "backprop: gradient shape");
  ClassifierParams grad = ClassifierParams::Zeros(params.classes, params.dims);
  for (std::size_t p = 0; p < feats.pixels(); ++p) {
    const auto phi = feats.pixel(p);
    const double* dz = &dlogits[p * params.classes];
    for (int c = 0; c < params.classes; ++c) {
      if (dz[c] == 0.0) continue;
      double* row = &grad.weights[static_cast<std::size_t>(c) * params.dims];
      for (int d = 0; d < params.dims; ++d) row[d] += dz[c] * phi[d];
      grad.bias[c] += dz[c];
    }
  }
  return grad;
}

}  // namespace ripu
