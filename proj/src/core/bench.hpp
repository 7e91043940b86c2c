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
#include <vector>

#include "active_loop.hpp"
#include "tensor_io.hpp"

namespace ripu {

struct BenchSpec {
  std::vector<Strategy> strategies;
  std::vector<Budget> budgets;
  std::vector<std::uint64_t> seeds;
  LoopConfig base;  // per-cell strategy, budget and seed are overwritten
  int jobs = 1;
};

struct BenchCell {
  Strategy strategy = Strategy::kRipu;
  Budget budget;
  std::uint64_t seed = 0;
  std::string status = "ok";  // "ok" or "error: <kind>: <message>"
  double miou = 0.0;
  std::vector<double> iou;
  double mean_spend = 0.0;  // annotated pixels per target image
  double rare_enrichment = 0.0;
};

struct BenchSummaryRow {
  Strategy strategy = Strategy::kRipu;
  Budget budget;
  int runs = 0;    // successful cells
  int failed = 0;
  double median_miou = 0.0;
};

struct BenchResult {
  std::vector<BenchCell> cells;             // strategy-major, then budget, then seed
  std::vector<BenchSummaryRow> summary;      // sorted by median mIoU, descending
};

// Every (strategy, budget, seed) cell runs the full active loop. A failing
// cell becomes a row with its error status instead of aborting the run.
BenchResult RunBench(const io::Dataset& data, const BenchSpec& spec);

double Median(std::vector<double> values);

std::string BenchCsv(const BenchResult& result, const std::vector<std::string>& class_names);
std::string BenchSummaryCsv(const BenchResult& result);

}  // namespace ripu
