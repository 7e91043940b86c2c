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

#include "selection.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>
#include <queue>
#include <random>

namespace ripu {

const char* StrategyName(Strategy strategy) {
  switch (strategy) {
    case Strategy::kRipu: return "ripu";
    case Strategy::kRandom: return "rand";
    case Strategy::kEntropy: return "ent";
    case Strategy::kSoftmaxConfidence: return "sconf";
    case Strategy::kFixedRectangle: return "rect";
  }
  return "?";
}

Strategy ParseStrategy(std::string_view name) {
  for (auto s : {Strategy::kRipu, Strategy::kRandom, Strategy::kEntropy,
                 Strategy::kSoftmaxConfidence, Strategy::kFixedRectangle}) {
    if (name == StrategyName(s)) return s;
  }
  Fail(ErrorKind::kUsage, "unknown strategy \"" + std::string(name) +
                              "\" (expected ripu, rand, ent, sconf or rect)");
}

Budget Budget::Pixels(long count) {
  Require(count >= 0, "budget: pixel count >= 0");
  return Budget{Unit::kPixels, static_cast<double>(count)};
}

Budget Budget::Fraction(double fraction) {
  Require(fraction > 0.0 && fraction <= 1.0, "budget: fraction in (0, 1]");
  return Budget{Unit::kFraction, fraction};
}

Budget Budget::Parse(std::string_view text) {
  auto bad = [&]() -> Budget {
    Fail(ErrorKind::kUsage, "invalid budget \"" + std::string(text) +
                                "\" (expected a pixel count or a percentage like 2.2%)");
  };
  if (text.empty()) return bad();
  if (text.back() == '%') {
    const std::string number(text.substr(0, text.size() - 1));
    std::size_t used = 0;
    double percent = 0.0;
    try {
      percent = std::stod(number, &used);
    } catch (const std::exception&) {
      return bad();
    }
    if (used != number.size() || !(percent > 0.0) || percent > 100.0) return bad();
    return Fraction(percent / 100.0);
  }
  long count = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), count);
  if (ec != std::errc() || ptr != text.data() + text.size() || count < 0) return bad();
  return Pixels(count);
}

long Budget::PixelsPerImage(int height, int width) const {
  if (unit == Unit::kPixels) return static_cast<long>(value);
  const long area = static_cast<long>(height) * width;
  // The small epsilon keeps e.g. 100% of H*W from flooring one pixel short.
  return std::min(area, static_cast<long>(std::floor(value * area + 1e-9)));
}

std::string Budget::ToString() const {
  if (unit == Unit::kPixels) return std::to_string(static_cast<long>(value));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g%%", value * 100.0);
  return buf;
}

BudgetLedger::BudgetLedger(long total, int rounds) : total_(total), rounds_(rounds) {
  Require(total >= 0, "budget ledger: total >= 0");
  Require(rounds >= 1, "budget ledger: rounds >= 1");
}

long BudgetLedger::CumulativeTarget(int round) const {
  Require(round >= 1 && round <= rounds_, "budget ledger: round in [1, rounds]");
  return round == rounds_ ? total_ : per_round() * round;
}

RoundBudget BudgetLedger::ForRound(int round, long spent_so_far) const {
  return RoundBudget{std::max(0L, CumulativeTarget(round) - spent_so_far), round == rounds_};
}

namespace {

struct Candidate {
  std::size_t index;
  double score;
};

// Count of unannotated pixels in any window, via an integral image.
class UnlabeledCounter {
 public:
  explicit UnlabeledCounter(const LabelMap& state)
      : width_(state.width()),
        sat_(static_cast<std::size_t>(state.height() + 1) * (state.width() + 1), 0) {
    const std::size_t stride = width_ + 1;
    for (int i = 0; i < state.height(); ++i) {
      long running = 0;
      for (int j = 0; j < width_; ++j) {
        running += state(i, j) == kUnlabeled ? 1 : 0;
        sat_[(i + 1) * stride + j + 1] = sat_[i * stride + j + 1] + running;
      }
    }
  }

  long Count(const Window& w) const {
    const std::size_t stride = width_ + 1;
    return sat_[(w.bottom + 1) * stride + w.right + 1] - sat_[w.top * stride + w.right + 1] -
           sat_[(w.bottom + 1) * stride + w.left] + sat_[w.top * stride + w.left];
  }

 private:
  int width_;
  std::vector<long> sat_;
};

// Shared greedy mechanics; `next` yields candidates in priority order.
template <typename Next>
SelectionResult RunGreedy(const LabelMap& state, int k, AnnotationMode mode,
                          RoundBudget budget, Next next) {
  Require(k >= 0, "selection: k >= 0");
  Require(budget.pixels >= 0, "selection: budget >= 0");
  SelectionResult result;
  if (budget.pixels == 0) return result;

  const int h = state.height();
  const int w = state.width();
  const UnlabeledCounter unlabeled(state);
  std::vector<std::uint8_t> blocked(state.size(), 0);
  for (std::size_t p = 0; p < state.size(); ++p) blocked[p] = state[p] != kUnlabeled;

  long remaining = budget.pixels;
  std::vector<Candidate> too_big;

  auto region_of = [&](std::size_t idx) {
    const int i = static_cast<int>(idx / w);
    const int j = static_cast<int>(idx % w);
    return mode == AnnotationMode::kRegion ? Window::Around(h, w, i, j, k) : Window{i, j, i, j};
  };
  auto take = [&](const Candidate& c) {
    const int i = static_cast<int>(c.index / w);
    const int j = static_cast<int>(c.index % w);
    const Window region = region_of(c.index);
    Pick pick{i, j, c.score, 0};
    for (int u = region.top; u <= region.bottom; ++u) {
      for (int v = region.left; v <= region.right; ++v) {
        if (state(u, v) == kUnlabeled) {
          result.annotated.push_back({u, v});
          ++pick.pixels;
        }
      }
    }
    const Window exclusion = Window::Around(h, w, i, j, 2 * k);
    for (int u = exclusion.top; u <= exclusion.bottom; ++u) {
      std::fill_n(blocked.begin() + static_cast<std::ptrdiff_t>(state.Index(u, exclusion.left)),
                  exclusion.right - exclusion.left + 1, std::uint8_t{1});
    }
    result.pixels_spent += pick.pixels;
    remaining -= pick.pixels;
    result.picks.push_back(pick);
  };

  while (remaining > 0) {
    const std::optional<Candidate> c = next();
    if (!c) break;
    if (blocked[c->index]) continue;
    const long cost = unlabeled.Count(region_of(c->index));
    if (cost > remaining) {
      if (budget.allow_overshoot) too_big.push_back(*c);
      continue;
    }
    take(*c);
  }
  if (remaining > 0 && budget.allow_overshoot) {
    // Nothing else fits: spend the rest on the best region still valid.
    for (const auto& c : too_big) {
      if (!blocked[c.index]) {
        take(c);
        break;
      }
    }
  }
  result.shortfall = result.pixels_spent < budget.pixels;
  return result;
}

SelectionResult HeapGreedy(const RealGrid& score, const LabelMap& state, int k,
                           AnnotationMode mode, RoundBudget budget) {
  Require(score.SameShape(state.height(), state.width()),
          "selection: score and annotation state share dimensions");
  auto worse = [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.index > b.index;
  };
  std::vector<Candidate> items;
  items.reserve(score.size());
  for (std::size_t p = 0; p < score.size(); ++p) {
    if (!std::isfinite(score[p])) {
      Fail(ErrorKind::kNumerical, "selection: non-finite score at pixel " + std::to_string(p));
    }
    if (state[p] == kUnlabeled) items.push_back({p, score[p]});
  }
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(worse)> heap(
      worse, std::move(items));
  return RunGreedy(state, k, mode, budget, [&]() -> std::optional<Candidate> {
    if (heap.empty()) return std::nullopt;
    Candidate top = heap.top();
    heap.pop();
    return top;
  });
}

void RequireSquare(const RegionSpec& spec) {
  if (spec.kind != RegionSpec::Kind::kSquareNeighbors) {
    Fail(ErrorKind::kValidation, "selection: strategy requires a square-neighbors region");
  }
}

}  // namespace

SelectionResult GreedySelect(const RealGrid& score, const LabelMap& state,
                             const RegionSpec& spec, AnnotationMode mode,
                             RoundBudget budget) {
  RequireSquare(spec);
  return HeapGreedy(score, state, spec.k, mode, budget);
}

SelectionResult SelectRipu(const AcquisitionMaps& maps, const LabelMap& state,
                           const RegionSpec& spec, AnnotationMode mode,
                           RoundBudget budget) {
  return GreedySelect(maps.score, state, spec, mode, budget);
}

SelectionResult SelectRandom(std::uint64_t seed, const LabelMap& state,
                             const RegionSpec& spec, AnnotationMode mode,
                             RoundBudget budget) {
  RequireSquare(spec);
  // Walking a uniform permutation and skipping invalid entries draws each
  // pick uniformly from the candidates still valid at that point.
  std::vector<std::size_t> order;
  order.reserve(state.size());
  for (std::size_t p = 0; p < state.size(); ++p) {
    if (state[p] == kUnlabeled) order.push_back(p);
  }
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t cursor = 0;
  return RunGreedy(state, spec.k, mode, budget, [&]() -> std::optional<Candidate> {
    if (cursor == order.size()) return std::nullopt;
    return Candidate{order[cursor++], 0.0};
  });
}

SelectionResult SelectEntropy(const AcquisitionMaps& maps, const LabelMap& state,
                              const RegionSpec& spec, AnnotationMode mode,
                              RoundBudget budget) {
  RequireSquare(spec);
  const RealGrid score = mode == AnnotationMode::kRegion ? WindowMean(maps.entropy, spec.k)
                                                         : maps.entropy;
  return HeapGreedy(score, state, spec.k, mode, budget);
}

SelectionResult SelectSoftmaxConfidence(const PredictionMap& pred, const LabelMap& state,
                                        const RegionSpec& spec, AnnotationMode mode,
                                        RoundBudget budget) {
  RequireSquare(spec);
  const RealGrid raw = SoftmaxUncertainty(pred);
  const RealGrid score = mode == AnnotationMode::kRegion ? WindowMean(raw, spec.k) : raw;
  return HeapGreedy(score, state, spec.k, mode, budget);
}

SelectionResult SelectFixedRectangles(const AcquisitionMaps& maps, const LabelMap& state,
                                      const RegionSpec& spec, RoundBudget budget) {
  if (spec.kind != RegionSpec::Kind::kFixedRectangle) {
    Fail(ErrorKind::kValidation, "selection: rect strategy requires a fixed-rectangle region");
  }
  Require(spec.rect_h >= 1 && spec.rect_w >= 1, "region: rectangle sides >= 1");
  Require(maps.score.SameShape(state.height(), state.width()),
          "selection: score and annotation state share dimensions");
  Require(budget.pixels >= 0, "selection: budget >= 0");
  SelectionResult result;
  if (budget.pixels == 0) return result;

  const int h = state.height();
  const int w = state.width();
  const UnlabeledCounter unlabeled(state);
  std::vector<Window> tiles;
  std::vector<double> tile_score;
  for (int top = 0; top < h; top += spec.rect_h) {
    for (int left = 0; left < w; left += spec.rect_w) {
      const Window t{top, left, std::min(h, top + spec.rect_h) - 1,
                     std::min(w, left + spec.rect_w) - 1};
      double sum = 0.0;
      for (int u = t.top; u <= t.bottom; ++u) {
        for (int v = t.left; v <= t.right; ++v) sum += maps.score(u, v);
      }
      tiles.push_back(t);
      tile_score.push_back(sum / t.Area());
    }
  }
  std::vector<std::size_t> order(tiles.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return tile_score[a] > tile_score[b]; });

  long remaining = budget.pixels;
  std::optional<std::size_t> fallback;
  auto take = [&](std::size_t t) {
    const Window& tile = tiles[t];
    Pick pick{(tile.top + tile.bottom) / 2, (tile.left + tile.right) / 2, tile_score[t], 0};
    for (int u = tile.top; u <= tile.bottom; ++u) {
      for (int v = tile.left; v <= tile.right; ++v) {
        if (state(u, v) == kUnlabeled) {
          result.annotated.push_back({u, v});
          ++pick.pixels;
        }
      }
    }
    result.pixels_spent += pick.pixels;
    remaining -= pick.pixels;
    result.picks.push_back(pick);
  };
  for (std::size_t t : order) {
    if (remaining <= 0) break;
    const long cost = unlabeled.Count(tiles[t]);
    if (cost == 0) continue;
    if (cost > remaining) {
      if (budget.allow_overshoot && !fallback) fallback = t;
      continue;
    }
    take(t);
  }
  if (remaining > 0 && fallback) take(*fallback);
  result.shortfall = result.pixels_spent < budget.pixels;
  return result;
}

}  // namespace ripu
