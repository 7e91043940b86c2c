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

#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <thread>

namespace ripu {

namespace {

constexpr int kRareClasses = 3;

BenchCell RunCell(const io::Dataset& data, const LoopConfig& base, Strategy strategy,
                  const Budget& budget, std::uint64_t seed) {
  BenchCell cell;
  cell.strategy = strategy;
  cell.budget = budget;
  cell.seed = seed;
  try {
    LoopConfig config = base;
    config.strategy = strategy;
    config.budget = budget;
    config.seed = seed;
    config.eval_each_round = false;
    const LoopResult r = RunActiveLoop(data, config);
    cell.miou = r.metrics.miou;
    cell.iou = r.metrics.iou;
    if (!r.trace.rounds.empty()) cell.mean_spend = r.trace.rounds.back().mean_spend_per_image;
    if (!r.metrics.enrichment.empty()) {
      const ClassFrequencies freq{r.metrics.selected_frequency, r.metrics.dataset_frequency,
                                  r.metrics.enrichment};
      cell.rare_enrichment =
          RarestClassEnrichment(freq, std::min<int>(kRareClasses, data.classes));
    }
  } catch (const Error& e) {
    cell.status = std::string("error: ") + ErrorKindName(e.kind()) + ": " + e.what();
  } catch (const std::exception& e) {
    cell.status = std::string("error: ") + e.what();
  }
  return cell;
}

std::string Quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

double Median(std::vector<double> values) {
  Require(!values.empty(), "median of a nonempty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

BenchResult RunBench(const io::Dataset& data, const BenchSpec& spec) {
  if (spec.strategies.empty()) Fail(ErrorKind::kUsage, "bench: empty strategy list");
  if (spec.budgets.empty()) Fail(ErrorKind::kUsage, "bench: empty budget list");
  if (spec.seeds.empty()) Fail(ErrorKind::kUsage, "bench: empty seed list");
  if (spec.jobs < 1) Fail(ErrorKind::kUsage, "bench: --jobs must be >= 1");

  struct Job {
    Strategy strategy;
    Budget budget;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (Strategy s : spec.strategies)
    for (const Budget& b : spec.budgets)
      for (std::uint64_t seed : spec.seeds) jobs.push_back({s, b, seed});

  BenchResult result;
  result.cells.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      result.cells[i] = RunCell(data, spec.base, jobs[i].strategy, jobs[i].budget, jobs[i].seed);
    }
  };
  const int threads = std::min<int>(spec.jobs, static_cast<int>(jobs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  const std::size_t per_group = spec.seeds.size();
  for (std::size_t g = 0; g < jobs.size(); g += per_group) {
    BenchSummaryRow row;
    row.strategy = jobs[g].strategy;
    row.budget = jobs[g].budget;
    std::vector<double> mious;
    for (std::size_t i = g; i < g + per_group; ++i) {
      if (result.cells[i].status == "ok") {
        mious.push_back(result.cells[i].miou);
      } else {
        ++row.failed;
      }
    }
    row.runs = static_cast<int>(mious.size());
    row.median_miou = mious.empty() ? 0.0 : Median(mious);
    result.summary.push_back(row);
  }
  std::stable_sort(result.summary.begin(), result.summary.end(),
                   [](const BenchSummaryRow& a, const BenchSummaryRow& b) {
                     if ((a.runs > 0) != (b.runs > 0)) return a.runs > 0;
                     return a.median_miou > b.median_miou;
                   });
  return result;
}

std::string BenchCsv(const BenchResult& result, const std::vector<std::string>& class_names) {
  std::string out = "strategy,budget,seed,status,miou";
  for (const auto& name : class_names) out += ",iou_" + Quote(name);
  out += ",spend,rare_enrichment\n";
  for (const auto& c : result.cells) {
    out += std::string(StrategyName(c.strategy)) + "," + c.budget.ToString() + "," +
           std::to_string(c.seed) + "," + Quote(c.status) + ",";
    const bool ok = c.status == "ok";
    if (ok) out += Num(c.miou);
    for (std::size_t k = 0; k < class_names.size(); ++k) {
      out += ",";
      if (ok && k < c.iou.size()) out += Num(c.iou[k]);
    }
    out += ",";
    if (ok) out += Num(c.mean_spend);
    out += ",";
    if (ok) out += Num(c.rare_enrichment);
    out += "\n";
  }
  return out;
}

std::string BenchSummaryCsv(const BenchResult& result) {
  std::string out = "strategy,budget,runs,failed,median_miou\n";
  for (const auto& r : result.summary) {
    out += std::string(StrategyName(r.strategy)) + "," + r.budget.ToString() + "," +
           std::to_string(r.runs) + "," + std::to_string(r.failed) + "," +
           (r.runs > 0 ? Num(r.median_miou) : std::string()) + "\n";
  }
  return out;
}

}  // namespace ripu
