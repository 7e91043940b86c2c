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
#include <string>
#include <string_view>
#include <vector>

#include "scoring.hpp"
#include "tensor.hpp"

namespace ripu {

enum class Strategy {
  kRipu,
  kRandom,
  kEntropy,
  kSoftmaxConfidence,
  kFixedRectangle,
};

const char* StrategyName(Strategy strategy);
Strategy ParseStrategy(std::string_view name);

// Annotation budget per image: an absolute pixel count, or a fraction of
// H*W written with a '%' suffix ("2.2%").
struct Budget {
  enum class Unit { kPixels, kFraction };

  Unit unit = Unit::kFraction;
  double value = 0.022;

  static Budget Pixels(long count);
  static Budget Fraction(double fraction);
  static Budget Parse(std::string_view text);

  long PixelsPerImage(int height, int width) const;
  std::string ToString() const;
};

struct RoundBudget {
  long pixels = 0;
  // Only the final round may start a region larger than what is left.
  bool allow_overshoot = false;
};

// Splits a per-image total over S rounds: b = floor(total / S) per round and
// the remainder in the final round. Round budgets are measured against what
// has actually been spent, so an underspent round carries over.
class BudgetLedger {
 public:
  BudgetLedger(long total, int rounds);

  long total() const { return total_; }
  int rounds() const { return rounds_; }
  long per_round() const { return total_ / rounds_; }

  // Target cumulative spend after `round` (1-based) rounds.
  long CumulativeTarget(int round) const;
  RoundBudget ForRound(int round, long spent_so_far) const;

 private:
  long total_;
  int rounds_;
};

struct Coord {
  int row = 0;
  int col = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

struct Pick {
  int row = 0;
  int col = 0;
  double score = 0.0;
  long pixels = 0;  // pixels newly annotated by this pick
};

struct SelectionResult {
  std::vector<Pick> picks;
  std::vector<Coord> annotated;
  long pixels_spent = 0;
  // Candidates ran out before the round budget was spent.
  bool shortfall = false;
};

// Greedy selection over a static score plane. Candidates are centers that are
// unannotated in `state` and farther than 2k (Chebyshev) from every pick made
// in this round; the best one is taken until the budget is spent. Ties go to
// the row-major first pixel. Uses a max-heap with lazy invalidation.
SelectionResult GreedySelect(const RealGrid& score, const LabelMap& state,
                             const RegionSpec& spec, AnnotationMode mode,
                             RoundBudget budget);

SelectionResult SelectRipu(const AcquisitionMaps& maps, const LabelMap& state,
                           const RegionSpec& spec, AnnotationMode mode,
                           RoundBudget budget);

// Uniformly random valid candidates under the same constraints.
SelectionResult SelectRandom(std::uint64_t seed, const LabelMap& state,
                             const RegionSpec& spec, AnnotationMode mode,
                             RoundBudget budget);

// Entropy (PA) or window-mean entropy (RA) as the score.
SelectionResult SelectEntropy(const AcquisitionMaps& maps, const LabelMap& state,
                              const RegionSpec& spec, AnnotationMode mode,
                              RoundBudget budget);

SelectionResult SelectSoftmaxConfidence(const PredictionMap& pred, const LabelMap& state,
                                        const RegionSpec& spec, AnnotationMode mode,
                                        RoundBudget budget);

// Non-overlapping rect_h x rect_w tiles (edge tiles may be smaller) ranked
// by their mean acquisition score.
SelectionResult SelectFixedRectangles(const AcquisitionMaps& maps, const LabelMap& state,
                                      const RegionSpec& spec, RoundBudget budget);

}  // namespace ripu
