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

#include "ripu/ripu.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "active_loop.hpp"
#include "bench.hpp"
#include "digest.hpp"
#include "json.hpp"
#include "seeds.hpp"
#include "synthgen.hpp"
#include "tensor_io.hpp"

#ifndef RIPU_VERSION_STRING
#define RIPU_VERSION_STRING "0.0.0"
#endif

static_assert(std::endian::native == std::endian::little,
              "tensor handles expose payloads in host order");

struct ripu_tensor {
  ripu::io::RawTensor raw;
};

struct ripu_selection {
  std::vector<ripu_pick> picks;
  ripu::io::RawTensor annotation;
  long spent = 0;
  long total_budget = 0;
  int shortfall_rounds = 0;
};

namespace {

using ripu::ErrorKind;
using ripu::Fail;
namespace io = ripu::io;

thread_local std::string g_last_error;

ripu_status StatusOf(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
      return RIPU_E_USAGE;
    case ErrorKind::kValidation:
    case ErrorKind::kParse:
      return RIPU_E_VALIDATION;
    case ErrorKind::kIo:
      return RIPU_E_IO;
    case ErrorKind::kNumerical:
      return RIPU_E_NUMERICAL;
  }
  return RIPU_E_INTERNAL;
}

template <typename F>
ripu_status try_(F&& f) {
  g_last_error.clear();
  try {
    f();
    return RIPU_OK;
  } catch (const ripu::Error& e) {
    g_last_error = e.what();
    return StatusOf(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return RIPU_E_INTERNAL;
}

template <typename T>
T& deref(T* p, const char* what) {
  if (p == nullptr) Fail(ErrorKind::kUsage, std::string("null argument: ") + what);
  return *p;
}

const char* Str(const char* p, const char* what) {
  if (p == nullptr) Fail(ErrorKind::kUsage, std::string("null argument: ") + what);
  return p;
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ripu_tensor_t NewTensor(io::RawTensor raw) { return new ripu_tensor{std::move(raw)}; }

ripu::PredictionMap AsPrediction(ripu_tensor_t t) {
  return std::get<ripu::PredictionMap>(
      io::FromRaw(deref(t, "prediction").raw, io::TensorKind::kPrediction));
}

ripu::LabelMap AsLabels(ripu_tensor_t t, const char* what) {
  return std::get<ripu::LabelMap>(io::FromRaw(deref(t, what).raw, io::TensorKind::kLabels));
}

void CheckClassRange(const ripu::LabelMap& labels, int classes, const char* what) {
  const int bound = labels.ClassUpperBound();
  if (bound > classes) {
    Fail(ErrorKind::kValidation, std::string("class count mismatch: ") + what + " contains class " +
                                     std::to_string(bound - 1) + " but the prediction has " +
                                     std::to_string(classes) + " classes");
  }
}

ripu::LoopConfig ToLoopConfig(const ripu_loop_config& c) {
  const ripu::AnnotationMode mode =
      ripu::ParseAnnotationMode(c.mode != nullptr ? c.mode : "ra");
  ripu::LoopConfig out = ripu::LoopConfig::Defaults(mode);
  out.iterations = c.iterations;
  out.pretrain_iterations = c.pretrain_iterations;
  out.rounds = c.rounds;
  if (c.budget != nullptr) out.budget = ripu::Budget::Parse(c.budget);
  if (c.strategy != nullptr) out.strategy = ripu::ParseStrategy(c.strategy);
  out.k = c.k;
  out.rect_h = c.rect_h;
  out.rect_w = c.rect_w;
  out.tau = c.tau;
  out.alpha1 = c.alpha1;
  out.alpha2 = c.alpha2;
  out.learning_rate = c.learning_rate;
  out.poly_power = c.poly_power;
  out.momentum = c.momentum;
  out.weight_decay = c.weight_decay;
  out.batch_per_domain = c.batch_per_domain;
  out.seed = c.seed;
  out.source_free = c.source_free != 0;
  out.dense_target = c.dense_target != 0;
  out.Validate();
  return out;
}

std::vector<std::string> SplitList(const char* text, const char* what) {
  std::vector<std::string> out;
  std::string cur;
  for (const char* p = text; *p != '\0'; ++p) {
    if (*p == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (*p != ' ') {
      cur += *p;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  if (out.empty()) Fail(ErrorKind::kUsage, std::string("empty ") + what + " list");
  return out;
}

std::uint64_t ParseSeed(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    Fail(ErrorKind::kUsage, "invalid seed \"" + s + "\"");
  }
  return v;
}

void MakeDirs(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    Fail(ErrorKind::kIo, "cannot create output directory " + dir.string());
  }
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  io::WriteBytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

ripu::synth::Preset ResolvePreset(const char* name, std::uint64_t seed, const char* overrides) {
  ripu::synth::Preset preset = ripu::synth::GetPreset(Str(name, "preset"));
  if (overrides != nullptr && overrides[0] != '\0') ripu::synth::ApplyOverrides(preset, overrides);
  preset.scene.seed = seed;
  preset.scene.Validate();
  return preset;
}

}  // namespace

extern "C" {

const char* ripu_version(void) { return RIPU_VERSION_STRING; }

const char* ripu_status_name(ripu_status status) {
  switch (status) {
    case RIPU_OK:
      return "RIPU_OK";
    case RIPU_E_USAGE:
      return "RIPU_E_USAGE";
    case RIPU_E_VALIDATION:
      return "RIPU_E_VALIDATION";
    case RIPU_E_IO:
      return "RIPU_E_IO";
    case RIPU_E_NUMERICAL:
      return "RIPU_E_NUMERICAL";
    case RIPU_E_INTERNAL:
      return "RIPU_E_INTERNAL";
  }
  return "RIPU_E_INTERNAL";
}

const char* ripu_last_error(void) { return g_last_error.c_str(); }

void ripu_string_free(char* s) { std::free(s); }

ripu_status ripu_tensor_read(const char* path, ripu_tensor_t* out) {
  return try_([&] {
    auto raw = io::Decode(io::ReadBytes(Str(path, "path")));
    deref(out, "out") = NewTensor(std::move(raw));
  });
}

ripu_status ripu_tensor_write(ripu_tensor_t tensor, const char* path) {
  return try_([&] { io::WriteBytes(Str(path, "path"), io::Encode(deref(tensor, "tensor").raw)); });
}

ripu_status ripu_tensor_create(ripu_dtype dtype, int rank, const uint32_t* dims, const void* data,
                               ripu_tensor_t* out) {
  return try_([&] {
    if (dtype < RIPU_DTYPE_F32 || dtype > RIPU_DTYPE_U32) {
      Fail(ErrorKind::kUsage, "unknown dtype code " + std::to_string(static_cast<int>(dtype)));
    }
    if (rank != 2 && rank != 3) Fail(ErrorKind::kUsage, "rank must be 2 or 3");
    io::RawTensor raw;
    raw.dtype = static_cast<io::DType>(dtype);
    raw.dims.assign(&deref(dims, "dims"), dims + rank);
    for (auto d : raw.dims) {
      if (d == 0) Fail(ErrorKind::kValidation, "tensor dimensions must be positive");
    }
    const std::size_t bytes = raw.ElementCount() * io::DTypeSize(raw.dtype);
    const auto* p = static_cast<const std::uint8_t*>(data);
    if (p == nullptr) Fail(ErrorKind::kUsage, "null argument: data");
    raw.payload.assign(p, p + bytes);
    deref(out, "out") = NewTensor(std::move(raw));
  });
}

ripu_status ripu_tensor_info(ripu_tensor_t tensor, ripu_dtype* dtype, int* rank,
                             uint32_t dims[3]) {
  return try_([&] {
    const auto& raw = deref(tensor, "tensor").raw;
    if (dtype != nullptr) *dtype = static_cast<ripu_dtype>(raw.dtype);
    if (rank != nullptr) *rank = static_cast<int>(raw.dims.size());
    if (dims != nullptr) {
      for (int i = 0; i < 3; ++i) dims[i] = i < static_cast<int>(raw.dims.size()) ? raw.dims[i] : 0;
    }
  });
}

ripu_status ripu_tensor_data(ripu_tensor_t tensor, const void** data, size_t* bytes) {
  return try_([&] {
    const auto& raw = deref(tensor, "tensor").raw;
    deref(data, "data") = raw.payload.data();
    if (bytes != nullptr) *bytes = raw.payload.size();
  });
}

void ripu_tensor_destroy(ripu_tensor_t tensor) { delete tensor; }

ripu_status ripu_score(ripu_tensor_t prediction, const char* mode, int k, ripu_tensor_t out[4]) {
  return try_([&] {
    if (out == nullptr) Fail(ErrorKind::kUsage, "null argument: out");
    const auto m = ripu::ParseAnnotationMode(Str(mode, "mode"));
    if (k < 0) Fail(ErrorKind::kUsage, "k must be >= 0");
    const auto pred = AsPrediction(prediction);
    const auto maps = ripu::ComputeAcquisition(pred, ripu::RegionSpec::SquareNeighbors(k), m);
    const ripu::RealGrid* planes[4] = {&maps.impurity, &maps.entropy, &maps.uncertainty,
                                       &maps.score};
    std::vector<io::RawTensor> raws;
    for (const auto* p : planes) raws.push_back(io::ToRaw(*p));
    for (int i = 0; i < 4; ++i) out[i] = NewTensor(std::move(raws[i]));
  });
}

ripu_status ripu_select_options_init(ripu_select_options* options, const char* mode) {
  return try_([&] {
    const auto m = ripu::ParseAnnotationMode(mode != nullptr ? mode : "ra");
    const auto d = ripu::LoopConfig::Defaults(m);
    ripu_select_options& o = deref(options, "options");
    o.mode = m == ripu::AnnotationMode::kRegion ? "ra" : "pa";
    o.strategy = "ripu";
    o.k = d.k;
    o.rect_h = d.rect_h;
    o.rect_w = d.rect_w;
    o.budget = m == ripu::AnnotationMode::kRegion ? "2.2%" : "40";
    o.rounds = d.rounds;
    o.round = 0;
    o.seed = d.seed;
  });
}

ripu_status ripu_select(ripu_tensor_t prediction, ripu_tensor_t state, ripu_tensor_t ground_truth,
                        const ripu_select_options* options, ripu_selection_t* out) {
  return try_([&] {
    const ripu_select_options& o = deref(options, "options");
    ripu::LoopConfig cfg = ripu::LoopConfig::Defaults(
        ripu::ParseAnnotationMode(o.mode != nullptr ? o.mode : "ra"));
    if (o.strategy != nullptr) cfg.strategy = ripu::ParseStrategy(o.strategy);
    if (o.budget != nullptr) cfg.budget = ripu::Budget::Parse(o.budget);
    if (o.k < 0) Fail(ErrorKind::kUsage, "k must be >= 0");
    if (o.rect_h < 1 || o.rect_w < 1) Fail(ErrorKind::kUsage, "rectangle sides must be >= 1");
    if (o.rounds < 1) Fail(ErrorKind::kUsage, "rounds must be >= 1");
    if (o.round < 0 || o.round > o.rounds) {
      Fail(ErrorKind::kUsage, "round must be in [1, rounds] (or 0 for all rounds)");
    }
    cfg.k = o.k;
    cfg.rect_h = o.rect_h;
    cfg.rect_w = o.rect_w;
    cfg.rounds = o.rounds;

    const auto pred = AsPrediction(prediction);
    const int h = pred.height();
    const int w = pred.width();
    ripu::LabelMap current = state != nullptr ? AsLabels(state, "annotation")
                                              : ripu::LabelMap::Unlabeled(h, w);
    if (!current.SameShape(h, w)) {
      Fail(ErrorKind::kValidation, "annotation is " + std::to_string(current.height()) + "x" +
                                       std::to_string(current.width()) + ", prediction is " +
                                       std::to_string(h) + "x" + std::to_string(w));
    }
    CheckClassRange(current, pred.classes(), "annotation");
    ripu::LabelMap source_of_labels;
    if (ground_truth != nullptr) {
      source_of_labels = AsLabels(ground_truth, "ground truth");
      if (!source_of_labels.SameShape(h, w)) {
        Fail(ErrorKind::kValidation, "ground truth and prediction differ in size");
      }
      CheckClassRange(source_of_labels, pred.classes(), "ground truth");
    } else {
      source_of_labels = ripu::LabelMap(h, w, ripu::ClassId{0});
      for (std::size_t p = 0; p < pred.pixels(); ++p) {
        const auto px = pred.pixel(p);
        source_of_labels[p] =
            static_cast<ripu::ClassId>(std::max_element(px.begin(), px.end()) - px.begin());
      }
    }

    auto result = std::make_unique<ripu_selection>();
    const long total = cfg.budget.PixelsPerImage(h, w);
    const ripu::BudgetLedger ledger(total, cfg.rounds);
    long spent = static_cast<long>(current.CountLabeled());
    const int first = o.round == 0 ? 1 : o.round;
    const int last = o.round == 0 ? o.rounds : o.round;
    for (int r = first; r <= last; ++r) {
      const ripu::RoundBudget budget = ledger.ForRound(r, spent);
      if (budget.pixels == 0) continue;
      const auto sel = ripu::SelectFromPrediction(
          pred, current, cfg, budget, ripu::DeriveSeed({o.seed, static_cast<std::uint64_t>(r)}));
      current = ripu::OracleAnnotate(source_of_labels, sel, current);
      spent += sel.pixels_spent;
      result->spent += sel.pixels_spent;
      if (sel.shortfall) ++result->shortfall_rounds;
      for (const auto& p : sel.picks) result->picks.push_back({r, p.row, p.col, p.score, p.pixels});
    }
    result->total_budget = total;
    result->annotation = io::ToRaw(current);
    deref(out, "out") = result.release();
  });
}

size_t ripu_selection_pick_count(ripu_selection_t selection) {
  return selection == nullptr ? 0 : selection->picks.size();
}

ripu_status ripu_selection_pick(ripu_selection_t selection, size_t index, ripu_pick* out) {
  return try_([&] {
    const auto& s = deref(selection, "selection");
    if (index >= s.picks.size()) Fail(ErrorKind::kUsage, "pick index out of range");
    deref(out, "out") = s.picks[index];
  });
}

ripu_status ripu_selection_annotation(ripu_selection_t selection, ripu_tensor_t* out) {
  return try_([&] { deref(out, "out") = NewTensor(deref(selection, "selection").annotation); });
}

ripu_status ripu_selection_summary(ripu_selection_t selection, long* spent, long* total_budget,
                                   int* shortfall_rounds) {
  return try_([&] {
    const auto& s = deref(selection, "selection");
    if (spent != nullptr) *spent = s.spent;
    if (total_budget != nullptr) *total_budget = s.total_budget;
    if (shortfall_rounds != nullptr) *shortfall_rounds = s.shortfall_rounds;
  });
}

void ripu_selection_destroy(ripu_selection_t selection) { delete selection; }

ripu_status ripu_parse_budget(const char* text, int height, int width, long* pixels) {
  return try_([&] {
    if (height < 1 || width < 1) Fail(ErrorKind::kUsage, "image size must be positive");
    deref(pixels, "pixels") = ripu::Budget::Parse(Str(text, "text")).PixelsPerImage(height, width);
  });
}

ripu_status ripu_loop_config_init(ripu_loop_config* config, const char* mode) {
  return try_([&] {
    const auto m = ripu::ParseAnnotationMode(mode != nullptr ? mode : "ra");
    const auto d = ripu::LoopConfig::Defaults(m);
    ripu_loop_config& c = deref(config, "config");
    c.iterations = d.iterations;
    c.pretrain_iterations = d.pretrain_iterations;
    c.rounds = d.rounds;
    c.budget = m == ripu::AnnotationMode::kRegion ? "2.2%" : "40";
    c.mode = m == ripu::AnnotationMode::kRegion ? "ra" : "pa";
    c.strategy = "ripu";
    c.k = d.k;
    c.rect_h = d.rect_h;
    c.rect_w = d.rect_w;
    c.tau = d.tau;
    c.alpha1 = d.alpha1;
    c.alpha2 = d.alpha2;
    c.learning_rate = d.learning_rate;
    c.poly_power = d.poly_power;
    c.momentum = d.momentum;
    c.weight_decay = d.weight_decay;
    c.batch_per_domain = d.batch_per_domain;
    c.seed = d.seed;
    c.source_free = d.source_free ? 1 : 0;
    c.dense_target = d.dense_target ? 1 : 0;
  });
}

ripu_status ripu_loop_config_json(const ripu_loop_config* config, char** json) {
  return try_([&] {
    const auto cfg = ToLoopConfig(deref(config, "config"));
    deref(json, "json") = CopyString(ripu::LoopConfigJson(cfg));
  });
}

ripu_status ripu_train(const char* manifest, const ripu_loop_config* config, const char* out_dir,
                       char** summary) {
  return try_([&] {
    const auto cfg = ToLoopConfig(deref(config, "config"));
    const std::filesystem::path dir = Str(out_dir, "out_dir");
    const auto m = io::LoadManifest(Str(manifest, "manifest"));
    const auto result = ripu::RunActiveLoop(m, cfg);

    MakeDirs(dir);
    io::WriteTensor(dir / "params.rptf", ripu::ParamsToPlane(result.params));
    ripu::WriteTraceCsv(dir / "trace.csv", result.trace);
    WriteText(dir / "metrics.json", ripu::MetricsJson(result.metrics, m.class_names) + "\n");

    nlohmann::json rounds = nlohmann::json::array();
    for (const auto& r : result.trace.rounds) {
      rounds.push_back({{"round", r.round},
                        {"iteration", r.iteration},
                        {"mean_spend_per_image", r.mean_spend_per_image},
                        {"shortfall_images", r.shortfall_images},
                        {"miou", r.miou}});
    }
    nlohmann::json s = {{"miou", result.metrics.miou},
                        {"rounds", rounds},
                        {"warnings", result.trace.warnings},
                        {"source_reads_after_pretrain", result.trace.source_reads_after_pretrain},
                        {"outputs", {"params.rptf", "trace.csv", "metrics.json"}}};
    if (summary != nullptr) *summary = CopyString(s.dump(2));
  });
}

ripu_status ripu_eval_prediction(ripu_tensor_t prediction, ripu_tensor_t labels,
                                 char** metrics_json) {
  return try_([&] {
    const auto pred = AsPrediction(prediction);
    const auto gt = AsLabels(labels, "labels");
    if (!gt.SameShape(pred.height(), pred.width())) {
      Fail(ErrorKind::kValidation, "labels and prediction differ in size");
    }
    CheckClassRange(gt, pred.classes(), "labels");
    ripu::LabelMap hard(pred.height(), pred.width(), ripu::ClassId{0});
    for (std::size_t p = 0; p < pred.pixels(); ++p) {
      const auto px = pred.pixel(p);
      hard[p] = static_cast<ripu::ClassId>(std::max_element(px.begin(), px.end()) - px.begin());
    }
    ripu::ConfusionMatrix confusion(pred.classes());
    confusion.Add(gt, hard);
    deref(metrics_json, "metrics_json") = CopyString(ripu::MetricsJson(ripu::IoUReport(confusion), {}));
  });
}

ripu_status ripu_eval_params(const char* params_path, const char* manifest, char** metrics_json) {
  return try_([&] {
    const auto params = ripu::ParamsFromPlane(io::ReadPlane(Str(params_path, "params_path")));
    const auto m = io::LoadManifest(Str(manifest, "manifest"));
    const auto data = io::LoadDataset(m);
    const auto report = ripu::Evaluate(params, data.target_val, data.classes);
    deref(metrics_json, "metrics_json") = CopyString(ripu::MetricsJson(report, data.class_names));
  });
}

ripu_status ripu_bench(const char* manifest, const char* strategies, const char* budgets,
                       const char* seeds, const ripu_loop_config* base, int jobs,
                       const char* out_dir, char** summary) {
  return try_([&] {
    ripu::BenchSpec spec;
    for (const auto& s : SplitList(Str(strategies, "strategies"), "strategy")) {
      spec.strategies.push_back(ripu::ParseStrategy(s));
    }
    for (const auto& b : SplitList(Str(budgets, "budgets"), "budget")) {
      spec.budgets.push_back(ripu::Budget::Parse(b));
    }
    for (const auto& s : SplitList(Str(seeds, "seeds"), "seed")) spec.seeds.push_back(ParseSeed(s));
    spec.base = ToLoopConfig(deref(base, "base"));
    spec.jobs = jobs;
    if (jobs < 1) Fail(ErrorKind::kUsage, "jobs must be >= 1");
    const std::filesystem::path dir = Str(out_dir, "out_dir");
    const auto data = io::LoadDataset(io::LoadManifest(Str(manifest, "manifest")));

    const auto result = ripu::RunBench(data, spec);
    MakeDirs(dir);
    WriteText(dir / "bench.csv", ripu::BenchCsv(result, data.class_names));
    WriteText(dir / "bench_summary.csv", ripu::BenchSummaryCsv(result));

    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : result.summary) {
      rows.push_back({{"strategy", ripu::StrategyName(r.strategy)},
                      {"budget", r.budget.ToString()},
                      {"runs", r.runs},
                      {"failed", r.failed},
                      {"median_miou", r.median_miou}});
    }
    int failed = 0;
    for (const auto& c : result.cells) failed += c.status == "ok" ? 0 : 1;
    nlohmann::json s = {{"cells", result.cells.size()},
                        {"failed_cells", failed},
                        {"summary", rows},
                        {"outputs", {"bench.csv", "bench_summary.csv"}}};
    if (summary != nullptr) *summary = CopyString(s.dump(2));
  });
}

ripu_status ripu_preset_names(char** names) {
  return try_([&] {
    std::string out;
    for (const auto& n : ripu::synth::PresetNames()) out += (out.empty() ? "" : ",") + n;
    deref(names, "names") = CopyString(out);
  });
}

ripu_status ripu_preset_json(const char* preset, uint64_t seed, const char* overrides_json,
                             char** json) {
  return try_([&] {
    const auto p = ResolvePreset(preset, seed, overrides_json);
    deref(json, "json") = CopyString(ripu::synth::PresetJson(p));
  });
}

ripu_status ripu_generate(const char* preset, uint64_t seed, const char* overrides_json,
                          const char* out_dir, char** summary) {
  return try_([&] {
    const auto p = ResolvePreset(preset, seed, overrides_json);
    const std::filesystem::path dir = Str(out_dir, "out_dir");
    MakeDirs(dir);
    const auto m = ripu::synth::EmitBenchmark(dir, p);
    nlohmann::json s = {{"manifest", "manifest.json"},
                        {"entries", m.EntryCount()},
                        {"classes", m.classes},
                        {"config", nlohmann::json::parse(ripu::synth::PresetJson(p))}};
    if (summary != nullptr) *summary = CopyString(s.dump(2));
  });
}

ripu_status ripu_file_sha256(const char* path, char hex[65]) {
  return try_([&] {
    if (hex == nullptr) Fail(ErrorKind::kUsage, "null argument: hex");
    const std::string digest = ripu::FileSha256(Str(path, "path"));
    std::memcpy(hex, digest.c_str(), 65);
  });
}

}  // extern "C"
