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

#include "losses.hpp"

#include <algorithm>
#include <cmath>

#include "scoring.hpp"

namespace ripu {

namespace {

constexpr double kProbCap = 1.0 - 1e-7;

double Sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

LossTerm CrossEntropyLoss(const Activations& act, const LabelMap& labels) {
  Require(labels.SameShape(act.height, act.width), "cross-entropy: label/prediction shape");
  LossTerm term;
  term.dlogits.assign(act.probs.size(), 0.0);
  for (std::size_t p = 0; p < act.pixels(); ++p) {
    const ClassId y = labels[p];
    if (y == kUnlabeled) continue;
    if (y >= act.classes) {
      Fail(ErrorKind::kValidation, "cross-entropy: label " + std::to_string(y) +
                                       " out of range for " + std::to_string(act.classes) +
                                       " classes");
    }
    ++term.count;
  }
  if (term.count == 0) return term;
  const double inv = 1.0 / static_cast<double>(term.count);
  for (std::size_t p = 0; p < act.pixels(); ++p) {
    const ClassId y = labels[p];
    if (y == kUnlabeled) continue;
    term.value -= act.log_probs[p * act.classes + y] * inv;
    const double* P = act.pixel(p);
    double* dz = &term.dlogits[p * act.classes];
    for (int c = 0; c < act.classes; ++c) dz[c] = P[c] * inv;
    dz[y] -= inv;
  }
  return term;
}

LossTerm ConsistencyLoss(const Activations& act) {
  const int h = act.height;
  const int w = act.width;
  const int classes = act.classes;
  const std::size_t n = act.pixels();

  // Window means via one summed-area table per class.
  std::vector<double> mean(n * classes, 0.0);
  for (int c = 0; c < classes; ++c) {
    RealGrid plane(h, w);
    for (std::size_t p = 0; p < n; ++p) plane[p] = act.probs[p * classes + c];
    const RealGrid m = WindowMean(plane, 1);
    for (std::size_t p = 0; p < n; ++p) mean[p * classes + c] = m[p];
  }

  LossTerm term;
  term.count = static_cast<long>(n);
  std::vector<double> sign(n * classes);
  for (std::size_t i = 0; i < sign.size(); ++i) {
    const double diff = act.probs[i] - mean[i];
    term.value += std::abs(diff);
    sign[i] = Sign(diff);
  }
  term.value /= static_cast<double>(n);

  // dL/dP(q) = (s(q) - sum_{p : q in N1(p)} s(p) / |N1(p)|) / n. Windows are
  // symmetric, so the sum runs over the window of q.
  std::vector<double> dprobs(n * classes, 0.0);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const std::size_t q = static_cast<std::size_t>(i) * w + j;
      const auto win = Window::Around(h, w, i, j, 1);
      for (int c = 0; c < classes; ++c) {
        double spread = 0.0;
        for (int u = win.top; u <= win.bottom; ++u) {
          for (int v = win.left; v <= win.right; ++v) {
            const auto pw = Window::Around(h, w, u, v, 1);
            spread += sign[(static_cast<std::size_t>(u) * w + v) * classes + c] / pw.Area();
          }
        }
        dprobs[q * classes + c] = (sign[q * classes + c] - spread) / static_cast<double>(n);
      }
    }
  }
  term.dlogits = SoftmaxBackward(act, dprobs);
  return term;
}

NegativeMask ComputeNegativeMask(std::span<const double> probs, double tau) {
  Require(tau > 0.0 && tau < 1.0, "negative mask: tau in (0, 1)");
  NegativeMask m;
  m.mask.resize(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    m.mask[i] = probs[i] < tau ? 1 : 0;
    m.count += m.mask[i];
  }
  return m;
}

NegativeMask ComputeNegativeMask(const PredictionMap& pred, double tau) {
  const auto v = pred.values();
  std::vector<double> probs(v.begin(), v.end());
  return ComputeNegativeMask(probs, tau);
}

LossTerm NegativeLearningLoss(const Activations& act, const NegativeMask& mask) {
  Require(mask.mask.size() == act.probs.size(), "negative learning: mask shape");
  LossTerm term;
  term.count = mask.count;
  term.dlogits.assign(act.probs.size(), 0.0);
  if (mask.count == 0) return term;
  const double inv = 1.0 / static_cast<double>(mask.count);
  std::vector<double> dprobs(act.probs.size(), 0.0);
  for (std::size_t i = 0; i < act.probs.size(); ++i) {
    if (!mask.mask[i]) continue;
    const double p = act.probs[i];
    const double capped = std::min(p, kProbCap);
    term.value -= std::log1p(-capped) * inv;
    if (p < kProbCap) dprobs[i] = inv / (1.0 - p);
  }
  term.dlogits = SoftmaxBackward(act, dprobs);
  return term;
}

LossTerm NegativeLearningLoss(const Activations& act, double tau) {
  return NegativeLearningLoss(act, ComputeNegativeMask(act.probs, tau));
}

ObjectiveResult TotalObjective(const ClassifierParams& params,
                               std::span<const SourceItem> source,
                               std::span<const TargetItem> target,
                               const ObjectiveWeights& weights) {
  Require(weights.tau > 0.0 && weights.tau < 1.0, "objective: tau in (0, 1)");
  if (target.empty() && (source.empty() || weights.source_free)) {
    Fail(ErrorKind::kValidation, "objective: empty target batch with no usable source batch");
  }
  if (source.empty() && !weights.source_free) {
    Fail(ErrorKind::kValidation, "objective: source batch may be empty only in source-free mode");
  }

  ObjectiveResult out;
  const auto zeros = ClassifierParams::Zeros(params.classes, params.dims);
  out.grad_sup_source = zeros;
  out.grad_sup_target = zeros;
  out.grad_consistency = zeros;
  out.grad_negative = zeros;
  LossReport& r = out.report;

  if (!weights.source_free) {
    const double scale = 1.0 / static_cast<double>(source.size());
    for (const auto& item : source) {
      const Activations act = Forward(params, *item.features);
      const LossTerm ce = CrossEntropyLoss(act, *item.labels);
      const LossTerm cr = ConsistencyLoss(act);
      r.sup_source += scale * ce.value;
      r.consistency += scale * cr.value;
      r.source_labeled += ce.count;
      out.grad_sup_source.AddScaled(Backprop(params, *item.features, ce.dlogits), scale);
      out.grad_consistency.AddScaled(Backprop(params, *item.features, cr.dlogits), scale);
    }
  }
  if (!target.empty()) {
    const double scale = 1.0 / static_cast<double>(target.size());
    for (const auto& item : target) {
      const Activations act = Forward(params, *item.features);
      const LossTerm ce = CrossEntropyLoss(act, *item.annotations);
      const LossTerm nl = NegativeLearningLoss(act, weights.tau);
      r.sup_target += scale * ce.value;
      r.negative += scale * nl.value;
      r.target_labeled += ce.count;
      r.negatives += nl.count;
      out.grad_sup_target.AddScaled(Backprop(params, *item.features, ce.dlogits), scale);
      out.grad_negative.AddScaled(Backprop(params, *item.features, nl.dlogits), scale);
    }
  }

  r.total = r.sup_source + r.sup_target + weights.alpha1 * r.consistency +
            weights.alpha2 * r.negative;
  out.gradient = zeros;
  out.gradient.AddScaled(out.grad_sup_source, 1.0);
  out.gradient.AddScaled(out.grad_sup_target, 1.0);
  out.gradient.AddScaled(out.grad_consistency, weights.alpha1);
  out.gradient.AddScaled(out.grad_negative, weights.alpha2);
  if (!std::isfinite(r.total) || !out.gradient.AllFinite()) {
    Fail(ErrorKind::kNumerical, "objective: non-finite loss or gradient");
  }
  return out;
}

}  // namespace ripu
