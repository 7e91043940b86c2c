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

#include "active_loop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "json.hpp"
#include "seeds.hpp"

namespace ripu {

namespace {

constexpr std::uint64_t kInitStream = 21;
constexpr std::uint64_t kPretrainStream = 22;
constexpr std::uint64_t kBatchStream = 23;
constexpr std::uint64_t kSelectStream = 24;

class SgdMomentum {
 public:
  SgdMomentum(const ClassifierParams& like, double momentum, double weight_decay)
      : velocity_(ClassifierParams::Zeros(like.classes, like.dims)),
        momentum_(momentum),
        weight_decay_(weight_decay) {}

  void Step(ClassifierParams& params, const ClassifierParams& grad, double lr) {
    for (std::size_t i = 0; i < params.ParameterCount(); ++i) {
      double& v = velocity_.flat(i);
      v = momentum_ * v + grad.flat(i) + weight_decay_ * params.flat(i);
      params.flat(i) -= lr * v;
    }
  }

 private:
  ClassifierParams velocity_;
  double momentum_;
  double weight_decay_;
};

double PolyRate(double base, int n, int total, double power) {
  if (total <= 0) return base;
  const double frac = 1.0 - static_cast<double>(n) / total;
  return base * std::pow(std::max(0.0, frac), power);
}

void CheckFinite(const LossReport& r, const ClassifierParams& params, int iteration,
                 const char* phase) {
  if (!std::isfinite(r.total) || !params.AllFinite()) {
    Fail(ErrorKind::kNumerical, std::string(phase) + ": non-finite loss or parameters at iteration " +
                                    std::to_string(iteration));
  }
}

std::size_t Draw(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

LoopResult Adapt(const io::Dataset& data, ClassifierParams params, const LoopConfig& config) {
  if (data.target_train.empty()) {
    Fail(ErrorKind::kValidation, "active loop: target train split is empty");
  }
  if (data.target_val.empty()) {
    Fail(ErrorKind::kValidation, "active loop: target val split is empty");
  }
  if (!config.source_free && data.source_train.empty()) {
    Fail(ErrorKind::kValidation, "active loop: source train split is empty");
  }
  const int classes = data.classes;
  const auto& targets = data.target_train;

  LoopResult result;
  LoopTrace& trace = result.trace;
  std::vector<LabelMap> state;
  std::vector<long> spent(targets.size(), 0);
  for (const auto& s : targets) {
    state.push_back(config.dense_target ? s.labels
                                        : LabelMap::Unlabeled(s.labels.height(), s.labels.width()));
  }

  const auto select_at = config.SelectionIterations();
  std::mt19937_64 batch_rng(DeriveSeed({config.seed, kBatchStream}));
  SgdMomentum opt(params, config.momentum, config.weight_decay);
  const ObjectiveWeights weights{config.alpha1, config.alpha2, config.tau, config.source_free};
  int round = 0;
  long cumulative = 0;

  for (int n = 1; n <= config.iterations; ++n) {
    std::vector<SourceItem> src;
    std::vector<TargetItem> tgt;
    if (!config.source_free) {
      for (int b = 0; b < config.batch_per_domain; ++b) {
        const auto& s = data.source_train[Draw(batch_rng, data.source_train.size())];
        src.push_back({&s.features, &s.labels});
        ++trace.source_reads_after_pretrain;
      }
    }
    for (int b = 0; b < config.batch_per_domain; ++b) {
      const std::size_t t = Draw(batch_rng, targets.size());
      tgt.push_back({&targets[t].features, &state[t]});
    }
    const double lr = PolyRate(config.learning_rate, n, config.iterations, config.poly_power);
    const ObjectiveResult obj = TotalObjective(params, src, tgt, weights);
    opt.Step(params, obj.gradient, lr);
    CheckFinite(obj.report, params, n, "active loop");
    trace.iterations.push_back({n, round, lr, obj.report});

    if (config.dense_target || std::find(select_at.begin(), select_at.end(), n) == select_at.end()) {
      continue;
    }
    ++round;
    RoundRecord rec;
    rec.round = round;
    rec.iteration = n;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const long total = config.budget.PixelsPerImage(targets[t].labels.height(),
                                                      targets[t].labels.width());
      const BudgetLedger ledger(total, config.rounds);
      const RoundBudget budget = ledger.ForRound(round, spent[t]);
      if (budget.pixels == 0) continue;
      const auto seed = DeriveSeed({config.seed, kSelectStream, static_cast<std::uint64_t>(round),
                                    static_cast<std::uint64_t>(t)});
      const SelectionResult picks =
          SelectForImage(params, targets[t].features, state[t], config, budget, seed);
      state[t] = OracleAnnotate(targets[t].labels, picks, state[t]);
      spent[t] += picks.pixels_spent;
      rec.round_spend += picks.pixels_spent;
      if (picks.shortfall) ++rec.shortfall_images;
    }
    cumulative += rec.round_spend;
    rec.cumulative_spend = cumulative;
    rec.mean_spend_per_image = static_cast<double>(cumulative) / targets.size();
    if (rec.shortfall_images > 0) {
      trace.warnings.push_back("round " + std::to_string(round) + ": budget shortfall on " +
                               std::to_string(rec.shortfall_images) + " image(s)");
    }
    if (config.eval_each_round) rec.miou = Evaluate(params, data.target_val, classes).miou;
    trace.rounds.push_back(rec);
  }

  result.params = params;
  result.metrics = Evaluate(params, data.target_val, classes);
  trace.final_miou = result.metrics.miou;

  std::vector<LabelMap> truth;
  for (const auto& s : targets) truth.push_back(s.labels);
  bool any_annotated = false;
  for (const auto& s : state) any_annotated = any_annotated || s.CountLabeled() > 0;
  if (any_annotated) {
    const ClassFrequencies freq = ClassFrequencyReport(state, truth, classes);
    result.metrics.selected_frequency = freq.selected;
    result.metrics.dataset_frequency = freq.dataset;
    result.metrics.enrichment = freq.enrichment;
  }
  result.annotations = std::move(state);
  return result;
}

}  // namespace

LoopConfig LoopConfig::Defaults(AnnotationMode mode) {
  LoopConfig c;
  c.mode = mode;
  if (mode == AnnotationMode::kPixel) {
    c.k = kDefaultPixelK;
    c.budget = Budget::Pixels(kDefaultPixelBudget);
  } else {
    c.k = kDefaultRegionK;
    c.budget = Budget::Fraction(kDefaultRegionBudget);
  }
  return c;
}

std::vector<int> LoopConfig::SelectionIterations() const {
  if (!selection_iterations.empty()) return selection_iterations;
  std::vector<int> out;
  for (int j = 0; j < rounds; ++j) {
    out.push_back(1 + static_cast<int>(static_cast<long long>(j) * iterations / (2LL * rounds)));
  }
  return out;
}

void LoopConfig::Validate() const {
  Require(iterations >= 0, "loop: iterations >= 0");
  Require(pretrain_iterations >= 0, "loop: pretrain iterations >= 0");
  Require(rounds >= 1, "loop: rounds >= 1");
  Require(k >= 0, "loop: k >= 0");
  Require(rect_h >= 1 && rect_w >= 1, "loop: rectangle sides >= 1");
  Require(tau > 0.0 && tau < 1.0, "loop: tau in (0, 1)");
  Require(alpha1 >= 0.0 && alpha2 >= 0.0, "loop: alpha weights >= 0");
  Require(learning_rate > 0.0 && std::isfinite(learning_rate), "loop: learning rate > 0");
  Require(momentum >= 0.0 && momentum < 1.0, "loop: momentum in [0, 1)");
  Require(weight_decay >= 0.0, "loop: weight decay >= 0");
  Require(batch_per_domain >= 1, "loop: batch per domain >= 1");
  const auto iters = SelectionIterations();
  Require(static_cast<int>(iters.size()) == rounds, "loop: one selection iteration per round");
  for (std::size_t i = 0; i < iters.size(); ++i) {
    Require(iters[i] >= 1 && iters[i] <= std::max(1, iterations),
            "loop: selection iterations within [1, N]");
    if (i > 0) Require(iters[i] > iters[i - 1], "loop: selection iterations strictly increasing");
  }
}

ClassifierParams InitialParams(int classes, int dims, const LoopConfig& config) {
  return ClassifierParams::Random(classes, dims, DeriveSeed({config.seed, kInitStream}));
}

ClassifierParams Pretrain(std::span<const io::Sample> source, const LoopConfig& config) {
  Require(!source.empty(), "pretrain: source train split is nonempty");
  const int classes = [&] {
    int bound = 0;
    for (const auto& s : source) bound = std::max(bound, s.labels.ClassUpperBound());
    return bound;
  }();
  return [&](int num_classes) {
    ClassifierParams params = InitialParams(num_classes, source.front().features.dims(), config);
    std::mt19937_64 rng(DeriveSeed({config.seed, kPretrainStream}));
    SgdMomentum opt(params, config.momentum, config.weight_decay);
    for (int n = 1; n <= config.pretrain_iterations; ++n) {
      const auto& s = source[Draw(rng, source.size())];
      const Activations act = Forward(params, s.features);
      const LossTerm ce = CrossEntropyLoss(act, s.labels);
      const ClassifierParams grad = Backprop(params, s.features, ce.dlogits);
      opt.Step(params, grad,
               PolyRate(config.learning_rate, n, config.pretrain_iterations, config.poly_power));
      LossReport r;
      r.total = ce.value;
      CheckFinite(r, params, n, "pretrain");
    }
    return params;
  }(classes);
}

LabelMap OracleAnnotate(const LabelMap& ground_truth, const SelectionResult& picks,
                        const LabelMap& state) {
  Require(ground_truth.SameShape(state.height(), state.width()),
          "annotate: ground truth and state share dimensions");
  LabelMap out = state;
  for (const Coord& c : picks.annotated) {
    if (!state.Contains(c.row, c.col)) {
      Fail(ErrorKind::kValidation, "annotate: coordinate out of bounds (" +
                                       std::to_string(c.row) + "," + std::to_string(c.col) + ")");
    }
    if (out(c.row, c.col) != kUnlabeled) {
      Fail(ErrorKind::kValidation, "annotate: pixel already annotated (" +
                                       std::to_string(c.row) + "," + std::to_string(c.col) + ")");
    }
    const ClassId truth = ground_truth(c.row, c.col);
    Require(truth != kUnlabeled, "annotate: ground truth is dense");
    out(c.row, c.col) = truth;
  }
  return out;
}

SelectionResult SelectFromPrediction(const PredictionMap& pred, const LabelMap& state,
                                     const LoopConfig& config, RoundBudget budget,
                                     std::uint64_t rng_seed) {
  Require(pred.height() == state.height() && pred.width() == state.width(),
          "select: prediction and annotation share dimensions");
  const RegionSpec square = RegionSpec::SquareNeighbors(config.k);
  switch (config.strategy) {
    case Strategy::kRandom:
      return SelectRandom(rng_seed, state, square, config.mode, budget);
    case Strategy::kRipu:
      return SelectRipu(ComputeAcquisition(pred, square, config.mode), state, square, config.mode,
                        budget);
    case Strategy::kEntropy:
      return SelectEntropy(ComputeAcquisition(pred, square, config.mode), state, square,
                           config.mode, budget);
    case Strategy::kSoftmaxConfidence:
      return SelectSoftmaxConfidence(pred, state, square, config.mode, budget);
    case Strategy::kFixedRectangle:
      return SelectFixedRectangles(ComputeAcquisition(pred, square, AnnotationMode::kRegion), state,
                                   RegionSpec::FixedRectangle(config.rect_h, config.rect_w),
                                   budget);
  }
  Fail(ErrorKind::kUsage, "unsupported strategy");
}

SelectionResult SelectForImage(const ClassifierParams& params, const FeatureMap& features,
                               const LabelMap& state, const LoopConfig& config,
                               RoundBudget budget, std::uint64_t rng_seed) {
  if (config.strategy == Strategy::kRandom) {
    return SelectRandom(rng_seed, state, RegionSpec::SquareNeighbors(config.k), config.mode,
                        budget);
  }
  return SelectFromPrediction(Predict(params, features), state, config, budget, rng_seed);
}

LabelMap PredictLabels(const ClassifierParams& params, const FeatureMap& features) {
  const Activations act = Forward(params, features);
  LabelMap out(act.height, act.width, ClassId{0});
  for (std::size_t p = 0; p < act.pixels(); ++p) {
    const double* P = act.pixel(p);
    out[p] = static_cast<ClassId>(std::max_element(P, P + act.classes) - P);
  }
  return out;
}

MetricsReport Evaluate(const ClassifierParams& params, std::span<const io::Sample> val,
                       int classes) {
  Require(!val.empty(), "evaluate: validation split is nonempty");
  if (params.classes != classes) {
    Fail(ErrorKind::kValidation, "evaluate: classifier has " + std::to_string(params.classes) +
                                     " classes, data has " + std::to_string(classes));
  }
  ConfusionMatrix confusion(classes);
  for (const auto& s : val) confusion.Add(s.labels, PredictLabels(params, s.features));
  return IoUReport(confusion);
}

LoopResult RunActiveLoop(const io::Dataset& data, const LoopConfig& config) {
  config.Validate();
  ClassifierParams params = Pretrain(data.source_train, config);
  if (params.classes < data.classes) {
    params = [&] {
      // Classes absent from the source still get an output row.
      ClassifierParams wide = ClassifierParams::Zeros(data.classes, params.dims);
      for (int c = 0; c < params.classes; ++c) {
        for (int d = 0; d < params.dims; ++d) wide.w(c, d) = params.w(c, d);
        wide.bias[c] = params.bias[c];
      }
      return wide;
    }();
  }
  return Adapt(data, std::move(params), config);
}

LoopResult RunActiveLoop(const io::DatasetManifest& manifest, const LoopConfig& config) {
  io::Dataset data = io::LoadDataset(manifest);
  if (!config.source_free) return RunActiveLoop(data, config);
  config.Validate();
  ClassifierParams params = Pretrain(data.source_train, config);
  if (params.classes != data.classes) {
    Fail(ErrorKind::kValidation, "source-free: source labels do not cover all classes");
  }
  data.source_train.clear();
  data.source_train.shrink_to_fit();
  data.source_val.clear();
  return Adapt(data, std::move(params), config);
}

std::string LoopConfigJson(const LoopConfig& c) {
  nlohmann::json j = {
      {"iterations", c.iterations},
      {"pretrain_iterations", c.pretrain_iterations},
      {"rounds", c.rounds},
      {"selection_iterations", c.SelectionIterations()},
      {"budget", c.budget.ToString()},
      {"mode", AnnotationModeName(c.mode)},
      {"strategy", StrategyName(c.strategy)},
      {"k", c.k},
      {"rect_h", c.rect_h},
      {"rect_w", c.rect_w},
      {"tau", c.tau},
      {"alpha1", c.alpha1},
      {"alpha2", c.alpha2},
      {"learning_rate", c.learning_rate},
      {"poly_power", c.poly_power},
      {"momentum", c.momentum},
      {"weight_decay", c.weight_decay},
      {"batch_per_domain", c.batch_per_domain},
      {"seed", c.seed},
      {"source_free", c.source_free},
      {"dense_target", c.dense_target},
  };
  return j.dump(2);
}

std::string MetricsJson(const MetricsReport& m, std::span<const std::string> class_names) {
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t c = 0; c < m.iou.size(); ++c) {
    nlohmann::json row = {{"name", c < class_names.size() ? class_names[c] : std::to_string(c)},
                          {"iou", m.iou[c]},
                          {"counted", m.counted[c] != 0}};
    if (c < m.selected_frequency.size()) {
      row["selected_frequency"] = m.selected_frequency[c];
      row["dataset_frequency"] = m.dataset_frequency[c];
      row["enrichment"] = m.enrichment[c];
    }
    classes.push_back(row);
  }
  return nlohmann::json{{"miou", m.miou}, {"classes", classes}}.dump(2);
}

void WriteTraceCsv(const std::filesystem::path& path, const LoopTrace& trace) {
  std::string out = "round,iter,lr,sup_source,sup_target,consistency,negative,total,spend,miou\n";
  std::size_t next_round = 0;
  double spend = 0.0;
  char buf[512];
  for (const auto& it : trace.iterations) {
    double miou = -1.0;
    int round = it.round;
    if (next_round < trace.rounds.size() && trace.rounds[next_round].iteration == it.iteration) {
      const auto& r = trace.rounds[next_round++];
      spend = r.mean_spend_per_image;
      miou = r.miou;
      round = r.round;
    }
    if (&it == &trace.iterations.back()) miou = trace.final_miou;
    std::snprintf(buf, sizeof buf, "%d,%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,", round,
                  it.iteration, it.learning_rate, it.loss.sup_source, it.loss.sup_target,
                  it.loss.consistency, it.loss.negative, it.loss.total, spend);
    out += buf;
    if (miou >= 0.0) {
      std::snprintf(buf, sizeof buf, "%.9g", miou);
      out += buf;
    }
    out += "\n";
  }
  io::WriteBytes(path, std::span(reinterpret_cast<const std::uint8_t*>(out.data()), out.size()));
}

}  // namespace ripu
