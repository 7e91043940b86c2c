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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "classifier.hpp"
#include "losses.hpp"
#include "oracles.hpp"

namespace ripu {
namespace {

using testing::GradientError;
using testing::NumericGradient;
using testing::SmallestL1Argument;
using testing::SmallestThresholdGap;
using testing::WindowMeanAt;

constexpr double kGradTol = 1e-4;

TEST(Forward, ZeroParamsGiveUniform) {
  std::mt19937_64 rng(1);
  const auto feats = testing::RandomFeatures(rng, 3, 4, 5);
  const auto act = Forward(ClassifierParams::Zeros(4, 5), feats);
  for (double p : act.probs) EXPECT_DOUBLE_EQ(p, 0.25);
}

TEST(Forward, SaturatedBias) {
  std::mt19937_64 rng(2);
  const auto feats = testing::RandomFeatures(rng, 2, 2, 3);
  auto params = ClassifierParams::Zeros(3, 3);
  params.bias[0] = 50.0;
  const auto act = Forward(params, feats);
  for (std::size_t p = 0; p < act.pixels(); ++p) EXPECT_GE(act.pixel(p)[0], 1.0 - 1e-9);
}

TEST(Forward, MatchesScalarSoftmax) {
  std::mt19937_64 rng(3);
  const auto feats = testing::RandomFeatures(rng, 4, 3, 6);
  const auto params = ClassifierParams::Random(5, 6, 11, 1.0);
  const auto act = Forward(params, feats);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 3; ++j) {
      std::vector<double> z(5);
      double zmax = -1e300;
      for (int c = 0; c < 5; ++c) {
        z[c] = params.bias[c];
        for (int d = 0; d < 6; ++d) z[c] += params.w(c, d) * double(feats.pixel(i * 3 + j)[d]);
        zmax = std::max(zmax, z[c]);
      }
      double norm = 0.0;
      for (double v : z) norm += std::exp(v - zmax);
      double total = 0.0;
      for (int c = 0; c < 5; ++c) {
        const double expect = std::exp(z[c] - zmax) / norm;
        EXPECT_NEAR(act.pixel(i * 3 + j)[c], expect, 1e-9);
        total += act.pixel(i * 3 + j)[c];
      }
      EXPECT_NEAR(total, 1.0, 1e-6);
    }
  }
}

TEST(Forward, DimensionMismatch) {
  std::mt19937_64 rng(4);
  EXPECT_THROW(Forward(ClassifierParams::Zeros(3, 4), testing::RandomFeatures(rng, 2, 2, 5)),
               Error);
}

TEST(Params, PlaneRoundTrip) {
  const auto params = ClassifierParams::Random(3, 4, 7, 0.5);
  const auto back = ParamsFromPlane(ParamsToPlane(params));
  ASSERT_EQ(back.classes, 3);
  ASSERT_EQ(back.dims, 4);
  for (std::size_t i = 0; i < params.ParameterCount(); ++i) {
    EXPECT_EQ(back.flat(i), double(float(params.flat(i))));
  }
}

TEST(CrossEntropy, ScalarCases) {
  std::mt19937_64 rng(5);
  const auto feats = testing::RandomFeatures(rng, 3, 3, 2);
  const auto uniform = Forward(ClassifierParams::Zeros(4, 2), feats);
  const auto labels = testing::RandomLabels(rng, 3, 3, 4, 1);
  EXPECT_NEAR(CrossEntropyLoss(uniform, labels).value, std::log(4.0), 1e-12);

  auto confident = ClassifierParams::Zeros(2, 2);
  confident.bias[1] = 800.0;
  const auto act = Forward(confident, feats);
  const LabelMap ones(3, 3, ClassId{1});
  EXPECT_NEAR(CrossEntropyLoss(act, ones).value, 0.0, 1e-12);

  const LabelMap none(3, 3, kUnlabeled);
  const auto empty = CrossEntropyLoss(uniform, none);
  EXPECT_EQ(empty.value, 0.0);
  EXPECT_EQ(empty.count, 0);
  for (double g : empty.dlogits) EXPECT_EQ(g, 0.0);
}

TEST(CrossEntropy, NormalizesByLabeledPixels) {
  std::mt19937_64 rng(6);
  const auto feats = testing::RandomFeatures(rng, 4, 4, 3);
  const auto act = Forward(ClassifierParams::Random(3, 3, 2, 1.0), feats);
  LabelMap labels(4, 4, kUnlabeled);
  labels(0, 1) = 2;
  labels(3, 2) = 0;
  const auto ce = CrossEntropyLoss(act, labels);
  EXPECT_EQ(ce.count, 2);
  const double expect = -(act.log_probs[1 * 3 + 2] + act.log_probs[(3 * 4 + 2) * 3 + 0]) / 2.0;
  EXPECT_NEAR(ce.value, expect, 1e-12);
}

TEST(CrossEntropy, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto feats = testing::RandomFeatures(rng, 6, 6, 4);
    auto labels = testing::RandomLabels(rng, 6, 6, 3, 2);
    const auto sparse = testing::RandomState(rng, 6, 6, 0.5);
    for (std::size_t p = 0; p < labels.size(); ++p) {
      if (sparse[p] == kUnlabeled && trial % 2) labels[p] = kUnlabeled;
    }
    const auto params = ClassifierParams::Random(3, 4, 100 + trial, 0.7);
    auto f = [&](const ClassifierParams& p) { return CrossEntropyLoss(Forward(p, feats), labels).value; };
    const auto analytic = Backprop(params, feats, CrossEntropyLoss(Forward(params, feats), labels).dlogits);
    EXPECT_LT(GradientError(analytic, NumericGradient(params, f)), kGradTol) << "trial " << trial;
  }
}

TEST(Consistency, ConstantFieldAndSinglePixel) {
  std::vector<float> flat(4 * 5 * 2, 0.0f);
  for (std::size_t p = 0; p < 20; ++p) flat[2 * p] = 1.0f;
  const FeatureMap feats(4, 5, 2, flat);
  EXPECT_NEAR(ConsistencyLoss(Forward(ClassifierParams::Random(3, 2, 1, 1.0), feats)).value, 0.0,
              1e-15);

  std::mt19937_64 rng(8);
  const auto one = testing::RandomFeatures(rng, 1, 1, 3);
  EXPECT_EQ(ConsistencyLoss(Forward(ClassifierParams::Random(3, 3, 2, 1.0), one)).value, 0.0);
}

TEST(Consistency, MatchesDirectEvaluation) {
  std::mt19937_64 rng(9);
  const auto feats = testing::RandomFeatures(rng, 5, 5, 3);
  const auto act = Forward(ClassifierParams::Random(3, 3, 4, 1.0), feats);
  double expect = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const auto mean = WindowMeanAt(act, i, j);
      for (int c = 0; c < 3; ++c) expect += std::abs(act.pixel(i * 5 + j)[c] - mean[c]);
    }
  }
  EXPECT_NEAR(ConsistencyLoss(act).value, expect / 25.0, 1e-12);
}

TEST(Consistency, GradientMatchesFiniteDifferencesAwayFromKinks) {
  std::mt19937_64 rng(10);
  int checked = 0;
  for (int attempt = 0; attempt < 200 && checked < 20; ++attempt) {
    const auto feats = testing::RandomFeatures(rng, 5, 5, 3);
    const auto params = ClassifierParams::Random(3, 3, 200 + attempt, 0.8);
    const auto act = Forward(params, feats);
    if (SmallestL1Argument(act) < 1e-4) continue;
    auto f = [&](const ClassifierParams& p) { return ConsistencyLoss(Forward(p, feats)).value; };
    const auto analytic = Backprop(params, feats, ConsistencyLoss(act).dlogits);
    EXPECT_LT(GradientError(analytic, NumericGradient(params, f)), kGradTol);
    ++checked;
  }
  EXPECT_EQ(checked, 20);
}

TEST(NegativeMask, WorkedExample) {
  const std::vector<double> probs{0.49, 0.50, 0.01};
  const auto mask = ComputeNegativeMask(probs, 0.05);
  EXPECT_EQ(mask.mask, (std::vector<std::uint8_t>{0, 0, 1}));
  EXPECT_EQ(mask.count, 1);
}

TEST(NegativeMask, UniformAndBoundary) {
  EXPECT_EQ(ComputeNegativeMask(std::vector<double>(4, 0.25), 0.05).count, 0);
  const auto at = ComputeNegativeMask(std::vector<double>{0.05, 0.95}, 0.05);
  EXPECT_EQ(at.mask[0], 0);
  EXPECT_EQ(at.count, 0);
}

TEST(NegativeMask, MonotoneInTau) {
  std::mt19937_64 rng(11);
  const auto pred = testing::RandomPrediction(rng, 6, 6, 5, 2.0);
  NegativeMask prev = ComputeNegativeMask(pred, 0.01);
  for (double tau : {0.05, 0.1, 0.2, 0.4}) {
    const auto next = ComputeNegativeMask(pred, tau);
    for (std::size_t n = 0; n < next.mask.size(); ++n) EXPECT_LE(prev.mask[n], next.mask[n]);
    EXPECT_GE(next.count, prev.count);
    prev = next;
  }
}

TEST(NegativeLearning, ScalarCases) {
  Activations act;
  act.height = act.width = 1;
  act.classes = 3;
  act.probs = {0.49, 0.50, 0.01};
  for (double p : act.probs) act.log_probs.push_back(std::log(p));
  const auto nl = NegativeLearningLoss(act, 0.05);
  EXPECT_NEAR(nl.value, -std::log(0.99), 1e-12);
  EXPECT_EQ(nl.count, 1);

  act.probs = {0.3, 0.3, 0.4};
  const auto empty = NegativeLearningLoss(act, 0.05);
  EXPECT_EQ(empty.value, 0.0);
  for (double g : empty.dlogits) EXPECT_EQ(g, 0.0);
}

TEST(NegativeLearning, GradientWithFrozenMask) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto feats = testing::RandomFeatures(rng, 4, 4, 3);
    const auto params = ClassifierParams::Random(4, 3, 300 + trial, 1.5);
    const auto act = Forward(params, feats);
    const auto mask = ComputeNegativeMask(act.probs, 0.2);
    ASSERT_GT(mask.count, 0);
    auto f = [&](const ClassifierParams& p) {
      return NegativeLearningLoss(Forward(p, feats), mask).value;
    };
    const auto analytic = Backprop(params, feats, NegativeLearningLoss(act, mask).dlogits);
    EXPECT_LT(GradientError(analytic, NumericGradient(params, f)), kGradTol);
  }
}

struct Batch {
  std::vector<FeatureMap> src_feats, tgt_feats;
  std::vector<LabelMap> src_labels, tgt_labels;
  std::vector<SourceItem> source;
  std::vector<TargetItem> target;
};

Batch RandomBatch(std::mt19937_64& rng, int classes, int dims) {
  Batch b;
  for (int n = 0; n < 2; ++n) {
    b.src_feats.push_back(testing::RandomFeatures(rng, 5, 4, dims));
    b.src_labels.push_back(testing::RandomLabels(rng, 5, 4, classes, 2));
    b.tgt_feats.push_back(testing::RandomFeatures(rng, 4, 5, dims));
    auto ann = testing::RandomLabels(rng, 4, 5, classes, 1);
    const auto keep = testing::RandomState(rng, 4, 5, 0.3);
    for (std::size_t p = 0; p < ann.size(); ++p) {
      if (keep[p] == kUnlabeled) ann[p] = kUnlabeled;
    }
    b.tgt_labels.push_back(ann);
  }
  for (int n = 0; n < 2; ++n) {
    b.source.push_back({&b.src_feats[n], &b.src_labels[n]});
    b.target.push_back({&b.tgt_feats[n], &b.tgt_labels[n]});
  }
  return b;
}

TEST(TotalObjective, DefaultsAndDegenerateWeights) {
  const ObjectiveWeights defaults;
  EXPECT_EQ(defaults.alpha1, 0.1);
  EXPECT_EQ(defaults.alpha2, 1.0);
  EXPECT_EQ(defaults.tau, 0.05);

  std::mt19937_64 rng(13);
  const Batch b = RandomBatch(rng, 3, 4);
  const auto params = ClassifierParams::Random(3, 4, 5, 1.0);
  const auto r = TotalObjective(params, b.source, b.target, {0.0, 0.0, 0.05, false});
  EXPECT_NEAR(r.report.total, r.report.sup_source + r.report.sup_target, 1e-12);
  EXPECT_GE(r.report.consistency, 0.0);
  EXPECT_GE(r.report.negative, 0.0);
}

TEST(TotalObjective, LinearCombinationOfTerms) {
  std::mt19937_64 rng(14);
  const Batch b = RandomBatch(rng, 4, 3);
  const auto params = ClassifierParams::Random(4, 3, 6, 1.2);
  const ObjectiveWeights w{0.3, 0.7, 0.1, false};
  const auto r = TotalObjective(params, b.source, b.target, w);
  const auto& rep = r.report;
  EXPECT_NEAR(rep.total,
              rep.sup_source + rep.sup_target + w.alpha1 * rep.consistency + w.alpha2 * rep.negative,
              1e-12);
  for (std::size_t i = 0; i < params.ParameterCount(); ++i) {
    const double combo = r.grad_sup_source.flat(i) + r.grad_sup_target.flat(i) +
                         w.alpha1 * r.grad_consistency.flat(i) + w.alpha2 * r.grad_negative.flat(i);
    EXPECT_NEAR(r.gradient.flat(i), combo, 1e-10);
  }
}

TEST(TotalObjective, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(15);
  const ObjectiveWeights w{0.1, 1.0, 0.15, false};
  int checked = 0;
  for (int attempt = 0; attempt < 200 && checked < 20; ++attempt) {
    const Batch b = RandomBatch(rng, 3, 3);
    const auto params = ClassifierParams::Random(3, 3, 400 + attempt, 1.2);
    bool kinked = false;
    for (const auto& s : b.source) kinked |= SmallestL1Argument(Forward(params, *s.features)) < 1e-4;
    for (const auto& t : b.target) {
      kinked |= SmallestThresholdGap(Forward(params, *t.features), w.tau) < 1e-4;
    }
    if (kinked) continue;
    auto f = [&](const ClassifierParams& p) {
      return TotalObjective(p, b.source, b.target, w).report.total;
    };
    const auto r = TotalObjective(params, b.source, b.target, w);
    EXPECT_LT(GradientError(r.gradient, NumericGradient(params, f)), kGradTol);
    ++checked;
  }
  EXPECT_EQ(checked, 20);
}

TEST(TotalObjective, SourceFreeIgnoresSource) {
  std::mt19937_64 rng(16);
  const Batch b = RandomBatch(rng, 3, 3);
  const auto params = ClassifierParams::Random(3, 3, 7, 1.0);
  const auto r = TotalObjective(params, {}, b.target, {0.1, 1.0, 0.05, true});
  EXPECT_EQ(r.report.sup_source, 0.0);
  EXPECT_EQ(r.report.consistency, 0.0);
  EXPECT_NEAR(r.report.total, r.report.sup_target + r.report.negative, 1e-12);
  const auto with_src = TotalObjective(params, b.source, b.target, {0.1, 1.0, 0.05, true});
  EXPECT_EQ(with_src.report.total, r.report.total);
}

TEST(TotalObjective, EmptyBatchesRejected) {
  const auto params = ClassifierParams::Zeros(3, 3);
  EXPECT_THROW(TotalObjective(params, {}, {}, ObjectiveWeights{}), Error);
}

}  // namespace
}  // namespace ripu
