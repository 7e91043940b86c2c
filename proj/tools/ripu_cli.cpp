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

// ripu: command-line front end over the C API.
//
// Every command validates its inputs before writing anything, then writes
// its outputs plus a run.json record (argv, resolved config, digests) into
// --out-dir. Failures print one line "RIPU_E_<KIND>: message" to stderr and
// exit with the matching status code.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ripu/ripu.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum class LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

LogLevel g_log_level = LogLevel::kInfo;

template <typename... Args>
void Log(LogLevel level, const char* fmt, Args... args) {
  if (level > g_log_level) return;
  std::fprintf(stderr, "[%s] ", level == LogLevel::kDebug ? "debug" : "info");
  if constexpr (sizeof...(Args) == 0) {
    std::fputs(fmt, stderr);
  } else {
    std::fprintf(stderr, fmt, args...);
  }
  std::fputc('\n', stderr);
}

struct Failure {
  ripu_status status;
  std::string message;
};

[[noreturn]] void Throw(ripu_status status, std::string message) {
  throw Failure{status, std::move(message)};
}

void Check(ripu_status status) {
  if (status != RIPU_OK) Throw(status, ripu_last_error());
}

// Owns a string returned by the library.
std::string Take(char* s) {
  std::string out = s != nullptr ? s : "";
  ripu_string_free(s);
  return out;
}

struct Tensor {
  ripu_tensor_t h = nullptr;
  Tensor() = default;
  explicit Tensor(const std::string& path) { Check(ripu_tensor_read(path.c_str(), &h)); }
  Tensor(const Tensor&) = delete;
  Tensor& operator=(const Tensor&) = delete;
  ~Tensor() { ripu_tensor_destroy(h); }
};

std::string Sha256(const fs::path& path) {
  char hex[65];
  Check(ripu_file_sha256(path.string().c_str(), hex));
  return hex;
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) Throw(RIPU_E_IO, "cannot create output directory " + dir.string());
}

void WriteFileAtomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) Throw(RIPU_E_IO, "cannot write " + tmp.string());
    out << text;
    if (!out.flush()) Throw(RIPU_E_IO, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) Throw(RIPU_E_IO, "cannot rename " + tmp.string() + " to " + path.string());
}

// Dataset files referenced by a manifest, for input digests.
std::vector<fs::path> ManifestFiles(const fs::path& manifest) {
  std::vector<fs::path> files{manifest};
  try {
    std::ifstream in(manifest);
    const json j = json::parse(in);
    for (const char* domain : {"source", "target"}) {
      if (!j.contains(domain)) continue;
      for (const auto& e : j.at(domain)) {
        for (const char* key : {"features", "labels"}) {
          fs::path p = e.at(key).get<std::string>();
          if (p.is_relative()) p = manifest.parent_path() / p;
          files.push_back(p);
        }
      }
    }
  } catch (const std::exception&) {
    // The library has already validated the manifest; keep what we have.
  }
  return files;
}

class RunRecord {
 public:
  RunRecord(std::string command, std::vector<std::string> argv)
      : command_(std::move(command)), argv_(std::move(argv)) {}

  void SetConfig(json config) { config_ = std::move(config); }
  void SetSeed(std::uint64_t seed) { seed_ = seed; }
  void AddInput(const fs::path& path) { inputs_.push_back(path); }
  void AddOutput(const fs::path& path) { outputs_.push_back(path); }

  void Write(const fs::path& out_dir) const {
    json inputs = json::array();
    for (const auto& p : inputs_) inputs.push_back({{"path", p.string()}, {"sha256", Sha256(p)}});
    json outputs = json::array();
    for (const auto& p : outputs_) {
      outputs.push_back({{"path", fs::relative(p, out_dir).generic_string()}, {"sha256", Sha256(p)}});
    }
    json j = {{"command", command_},
              {"argv", argv_},
              {"config", config_},
              {"version", ripu_version()},
              {"inputs", inputs},
              {"outputs", outputs}};
    if (seed_) j["seed"] = *seed_;
    WriteFileAtomic(out_dir / "run.json", j.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  json config_ = json::object();
  std::optional<std::uint64_t> seed_;
  std::vector<fs::path> inputs_;
  std::vector<fs::path> outputs_;
};

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// ---- options shared by train and bench ----

struct LoopFlags {
  std::string mode = "ra";
  std::string strategy = "ripu";
  std::optional<int> k;
  std::optional<std::string> budget;
  std::optional<int> rounds;
  std::optional<int> iters;
  std::optional<int> pretrain_iters;
  std::optional<double> tau, alpha1, alpha2, lr, momentum, weight_decay;
  std::optional<int> rect_h, rect_w;
  std::uint64_t seed = 1;
  bool source_free = false;
  bool dense_target = false;

  void Register(CLI::App* cmd, bool with_strategy_and_budget) {
    cmd->add_option("--mode", mode, "Annotation mode")->check(CLI::IsMember({"ra", "pa"}));
    if (with_strategy_and_budget) {
      cmd->add_option("--strategy", strategy, "Selection strategy")
          ->check(CLI::IsMember({"ripu", "rand", "ent", "sconf", "rect"}));
      cmd->add_option("--budget", budget, "Per-image budget: pixels or percent (2.2%)");
    }
    cmd->add_option("--k", k, "Neighborhood radius (default 1 for ra, 32 for pa)");
    cmd->add_option("--rounds", rounds, "Selection rounds");
    cmd->add_option("--iters", iters, "Adaptation iterations");
    cmd->add_option("--pretrain-iters", pretrain_iters, "Source pretraining iterations");
    cmd->add_option("--tau", tau, "Negative-label threshold");
    cmd->add_option("--alpha1", alpha1, "Consistency weight");
    cmd->add_option("--alpha2", alpha2, "Negative-learning weight");
    cmd->add_option("--lr", lr, "Initial learning rate");
    cmd->add_option("--momentum", momentum, "SGD momentum");
    cmd->add_option("--weight-decay", weight_decay, "L2 weight decay");
    cmd->add_option("--rect-h", rect_h, "Rectangle height for strategy rect");
    cmd->add_option("--rect-w", rect_w, "Rectangle width for strategy rect");
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_flag("--source-free", source_free, "Drop source data after pretraining");
    cmd->add_flag("--dense-target", dense_target, "Reference run with all target labels");
  }

  ripu_loop_config Resolve() const {
    ripu_loop_config c;
    Check(ripu_loop_config_init(&c, mode.c_str()));
    c.strategy = strategy.c_str();
    if (budget) c.budget = budget->c_str();
    if (k) c.k = *k;
    if (rounds) c.rounds = *rounds;
    if (iters) c.iterations = *iters;
    if (pretrain_iters) c.pretrain_iterations = *pretrain_iters;
    if (tau) c.tau = *tau;
    if (alpha1) c.alpha1 = *alpha1;
    if (alpha2) c.alpha2 = *alpha2;
    if (lr) c.learning_rate = *lr;
    if (momentum) c.momentum = *momentum;
    if (weight_decay) c.weight_decay = *weight_decay;
    if (rect_h) c.rect_h = *rect_h;
    if (rect_w) c.rect_w = *rect_w;
    c.seed = seed;
    c.source_free = source_free ? 1 : 0;
    c.dense_target = dense_target ? 1 : 0;
    return c;
  }
};

json ConfigJson(const ripu_loop_config& c) {
  char* text = nullptr;
  Check(ripu_loop_config_json(&c, &text));
  return json::parse(Take(text));
}

// ---- commands ----

int RunCommand(const std::vector<std::string>& args);

struct GenFlags {
  std::string preset = "desk-v1";
  std::string out_dir;
  std::uint64_t seed = 1;
  std::map<std::string, double> numeric;
  std::map<std::string, int> integer;
  std::string priors;
};

int CmdGen(const GenFlags& f, CLI::App* cmd, const std::vector<std::string>& argv) {
  json overrides = json::object();
  for (const auto& [key, value] : f.integer) {
    if (cmd->get_option("--" + key)->count() > 0) overrides[key] = value;
  }
  for (const auto& [key, value] : f.numeric) {
    if (cmd->get_option("--" + key)->count() > 0) overrides[key] = value;
  }
  if (!f.priors.empty()) {
    std::vector<double> p;
    std::stringstream ss(f.priors);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        p.push_back(std::stod(item));
      } catch (const std::exception&) {
        Throw(RIPU_E_USAGE, "invalid prior value \"" + item + "\"");
      }
    }
    overrides["priors"] = p;
  }
  // Flag names use dashes, scene fields use underscores.
  json fields = json::object();
  for (const auto& [key, value] : overrides.items()) {
    std::string k = key;
    std::replace(k.begin(), k.end(), '-', '_');
    fields[k] = value;
  }
  const std::string text = fields.dump();

  char* resolved = nullptr;
  Check(ripu_preset_json(f.preset.c_str(), f.seed, text.c_str(), &resolved));
  const json config = json::parse(Take(resolved));

  char* summary = nullptr;
  Check(ripu_generate(f.preset.c_str(), f.seed, text.c_str(), f.out_dir.c_str(), &summary));
  const json s = json::parse(Take(summary));

  RunRecord rec("gen", argv);
  rec.SetConfig(config);
  rec.SetSeed(f.seed);
  const fs::path dir = f.out_dir;
  rec.AddOutput(dir / "manifest.json");
  for (const auto& p : ManifestFiles(dir / "manifest.json")) {
    if (p != dir / "manifest.json") rec.AddOutput(p);
  }
  rec.Write(dir);
  Log(LogLevel::kInfo, "gen: wrote %d entries, %d classes to %s", s["entries"].get<int>(),
      s["classes"].get<int>(), f.out_dir.c_str());
  return 0;
}

struct ScoreFlags {
  std::string pred;
  std::string mode = "ra";
  std::optional<int> k;
  std::string out_dir;
};

int CmdScore(const ScoreFlags& f, const std::vector<std::string>& argv) {
  const int k = f.k.value_or(f.mode == "pa" ? 32 : 1);
  Tensor pred(f.pred);
  ripu_tensor_t planes[4] = {nullptr, nullptr, nullptr, nullptr};
  Check(ripu_score(pred.h, f.mode.c_str(), k, planes));
  Tensor owned[4];
  for (int i = 0; i < 4; ++i) owned[i].h = planes[i];

  const fs::path dir = f.out_dir;
  EnsureDir(dir);
  RunRecord rec("score", argv);
  rec.SetConfig({{"mode", f.mode}, {"k", k}});
  rec.AddInput(f.pred);
  const char* names[4] = {"impurity.rptf", "entropy.rptf", "uncertainty.rptf", "score.rptf"};
  for (int i = 0; i < 4; ++i) {
    Check(ripu_tensor_write(owned[i].h, (dir / names[i]).string().c_str()));
    rec.AddOutput(dir / names[i]);
  }
  rec.Write(dir);
  Log(LogLevel::kInfo, "score: wrote 4 planes to %s", f.out_dir.c_str());
  return 0;
}

struct SelectFlags {
  std::string pred;
  std::string annotation;
  std::string labels;
  std::string mode = "ra";
  std::string strategy = "ripu";
  std::optional<int> k;
  std::optional<std::string> budget;
  std::optional<int> rect_h, rect_w;
  int round = 0;
  int rounds = 5;
  std::uint64_t seed = 1;
  std::string out_dir;
};

int CmdSelect(const SelectFlags& f, const std::vector<std::string>& argv) {
  ripu_select_options o;
  Check(ripu_select_options_init(&o, f.mode.c_str()));
  o.strategy = f.strategy.c_str();
  if (f.k) o.k = *f.k;
  if (f.budget) o.budget = f.budget->c_str();
  if (f.rect_h) o.rect_h = *f.rect_h;
  if (f.rect_w) o.rect_w = *f.rect_w;
  o.round = f.round;
  o.rounds = f.rounds;
  o.seed = f.seed;

  Tensor pred(f.pred);
  std::optional<Tensor> state, labels;
  if (!f.annotation.empty()) state.emplace(f.annotation);
  if (!f.labels.empty()) labels.emplace(f.labels);
  ripu_selection_t sel = nullptr;
  Check(ripu_select(pred.h, state ? state->h : nullptr, labels ? labels->h : nullptr, &o, &sel));
  std::unique_ptr<ripu_selection, decltype(&ripu_selection_destroy)> guard(sel,
                                                                          ripu_selection_destroy);
  long spent = 0, total = 0;
  int shortfall = 0;
  Check(ripu_selection_summary(sel, &spent, &total, &shortfall));
  Tensor annotation;
  Check(ripu_selection_annotation(sel, &annotation.h));

  std::string csv = "round,i,j,score,pixels_spent\n";
  for (std::size_t n = 0; n < ripu_selection_pick_count(sel); ++n) {
    ripu_pick p;
    Check(ripu_selection_pick(sel, n, &p));
    csv += std::to_string(p.round) + "," + std::to_string(p.row) + "," + std::to_string(p.col) +
           "," + Num(p.score) + "," + std::to_string(p.pixels) + "\n";
  }

  const fs::path dir = f.out_dir;
  EnsureDir(dir);
  Check(ripu_tensor_write(annotation.h, (dir / "annotation.rptf").string().c_str()));
  WriteFileAtomic(dir / "picks.csv", csv);
  RunRecord rec("select", argv);
  rec.SetConfig({{"mode", o.mode},
                 {"strategy", o.strategy},
                 {"k", o.k},
                 {"rect_h", o.rect_h},
                 {"rect_w", o.rect_w},
                 {"budget", o.budget},
                 {"budget_pixels", total},
                 {"round", o.round},
                 {"rounds", o.rounds},
                 {"labels_from", f.labels.empty() ? "pseudo-label" : "ground-truth"}});
  rec.SetSeed(f.seed);
  rec.AddInput(f.pred);
  if (!f.annotation.empty()) rec.AddInput(f.annotation);
  if (!f.labels.empty()) rec.AddInput(f.labels);
  rec.AddOutput(dir / "annotation.rptf");
  rec.AddOutput(dir / "picks.csv");
  rec.Write(dir);
  if (shortfall > 0) {
    Log(LogLevel::kInfo, "select: warning: %d round(s) ran out of candidates", shortfall);
  }
  Log(LogLevel::kInfo, "select: %ld pixels annotated (total budget %ld per image)", spent, total);
  return 0;
}

struct TrainFlags {
  std::string manifest;
  std::string out_dir;
  bool print_config = false;
  LoopFlags loop;
};

int CmdTrain(const TrainFlags& f, const std::vector<std::string>& argv) {
  const ripu_loop_config cfg = f.loop.Resolve();
  const json config = ConfigJson(cfg);
  if (f.print_config) {
    std::printf("%s\n", config.dump(2).c_str());
    return 0;
  }
  if (f.manifest.empty()) Throw(RIPU_E_USAGE, "train: --manifest is required");
  if (f.out_dir.empty()) Throw(RIPU_E_USAGE, "train: --out-dir is required");
  char* summary = nullptr;
  Check(ripu_train(f.manifest.c_str(), &cfg, f.out_dir.c_str(), &summary));
  const json s = json::parse(Take(summary));

  const fs::path dir = f.out_dir;
  RunRecord rec("train", argv);
  rec.SetConfig(config);
  rec.SetSeed(cfg.seed);
  for (const auto& p : ManifestFiles(f.manifest)) rec.AddInput(p);
  for (const auto& name : s["outputs"]) rec.AddOutput(dir / name.get<std::string>());
  rec.Write(dir);
  for (const auto& w : s["warnings"]) Log(LogLevel::kInfo, "train: warning: %s", w.get<std::string>().c_str());
  for (const auto& r : s["rounds"]) {
    Log(LogLevel::kDebug, "round %d at iter %d: spend/image %.2f, mIoU %.4f", r["round"].get<int>(),
        r["iteration"].get<int>(), r["mean_spend_per_image"].get<double>(), r["miou"].get<double>());
  }
  std::printf("miou=%.6f\n", s["miou"].get<double>());
  return 0;
}

struct EvalFlags {
  std::string pred, labels, params, manifest, out_dir;
};

int CmdEval(const EvalFlags& f, const std::vector<std::string>& argv) {
  const bool pair = !f.pred.empty() || !f.labels.empty();
  const bool model = !f.params.empty() || !f.manifest.empty();
  if (pair == model) {
    Throw(RIPU_E_USAGE, "eval: give either --pred and --labels, or --params and --manifest");
  }
  RunRecord rec("eval", argv);
  std::string metrics;
  char* text = nullptr;
  if (pair) {
    if (f.pred.empty() || f.labels.empty()) Throw(RIPU_E_USAGE, "eval: --pred needs --labels");
    Tensor pred(f.pred), labels(f.labels);
    Check(ripu_eval_prediction(pred.h, labels.h, &text));
    rec.AddInput(f.pred);
    rec.AddInput(f.labels);
  } else {
    if (f.params.empty() || f.manifest.empty()) Throw(RIPU_E_USAGE, "eval: --params needs --manifest");
    Check(ripu_eval_params(f.params.c_str(), f.manifest.c_str(), &text));
    rec.AddInput(f.params);
    for (const auto& p : ManifestFiles(f.manifest)) rec.AddInput(p);
  }
  metrics = Take(text);
  const fs::path dir = f.out_dir;
  EnsureDir(dir);
  WriteFileAtomic(dir / "metrics.json", metrics + "\n");
  rec.SetConfig({{"source", pair ? "prediction" : "params"}});
  rec.AddOutput(dir / "metrics.json");
  rec.Write(dir);
  std::printf("miou=%.6f\n", json::parse(metrics)["miou"].get<double>());
  return 0;
}

struct BenchFlags {
  std::string manifest, out_dir;
  std::string strategies = "ripu,rand,ent,sconf";
  std::optional<std::string> budgets;
  std::string seeds = "1,2,3,4,5";
  int jobs = 1;
  LoopFlags loop;
};

int CmdBench(const BenchFlags& f, const std::vector<std::string>& argv) {
  const ripu_loop_config cfg = f.loop.Resolve();
  const std::string budgets = f.budgets.value_or(cfg.budget);
  json config = ConfigJson(cfg);
  config.erase("strategy");
  config.erase("budget");
  config.erase("seed");
  config["strategies"] = f.strategies;
  config["budgets"] = budgets;
  config["seeds"] = f.seeds;
  config["jobs"] = f.jobs;

  char* summary = nullptr;
  Check(ripu_bench(f.manifest.c_str(), f.strategies.c_str(), budgets.c_str(), f.seeds.c_str(), &cfg,
                   f.jobs, f.out_dir.c_str(), &summary));
  const json s = json::parse(Take(summary));
  const fs::path dir = f.out_dir;
  RunRecord rec("bench", argv);
  rec.SetConfig(config);
  for (const auto& p : ManifestFiles(f.manifest)) rec.AddInput(p);
  for (const auto& name : s["outputs"]) rec.AddOutput(dir / name.get<std::string>());
  rec.Write(dir);
  if (s["failed_cells"].get<int>() > 0) {
    Log(LogLevel::kInfo, "bench: warning: %d cell(s) failed; see bench.csv",
        s["failed_cells"].get<int>());
  }
  for (const auto& r : s["summary"]) {
    std::printf("%s %s median_miou=%.6f runs=%d\n", r["strategy"].get<std::string>().c_str(),
                r["budget"].get<std::string>().c_str(), r["median_miou"].get<double>(),
                r["runs"].get<int>());
  }
  return 0;
}

struct ReplayFlags {
  std::string run;
  std::string out_dir;
};

int CmdReplay(const ReplayFlags& f) {
  json record;
  try {
    std::ifstream in(f.run);
    if (!in) Throw(RIPU_E_IO, "cannot read " + f.run);
    record = json::parse(in);
  } catch (const json::exception& e) {
    Throw(RIPU_E_VALIDATION, std::string("run record: ") + e.what());
  }
  std::vector<std::string> args;
  std::map<std::string, std::string> expected;
  try {
    args = record.at("argv").get<std::vector<std::string>>();
    for (const auto& o : record.at("outputs")) {
      expected[o.at("path").get<std::string>()] = o.at("sha256").get<std::string>();
    }
  } catch (const json::exception& e) {
    Throw(RIPU_E_VALIDATION, std::string("run record: ") + e.what());
  }
  if (args.empty() || args[0] == "replay") Throw(RIPU_E_VALIDATION, "run record: nothing to replay");

  fs::path out_dir;
  bool replaced = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out-dir" && i + 1 < args.size()) {
      if (!f.out_dir.empty()) args[i + 1] = f.out_dir;
      out_dir = args[i + 1];
      replaced = true;
    } else if (args[i].rfind("--out-dir=", 0) == 0) {
      if (!f.out_dir.empty()) args[i] = "--out-dir=" + f.out_dir;
      out_dir = args[i].substr(10);
      replaced = true;
    }
  }
  if (!replaced) Throw(RIPU_E_VALIDATION, "run record: argv has no --out-dir");

  Log(LogLevel::kInfo, "replay: %s into %s", args[0].c_str(), out_dir.string().c_str());
  const int rc = RunCommand(args);
  if (rc != 0) return rc;
  std::size_t same = 0;
  for (const auto& [rel, digest] : expected) {
    const fs::path p = out_dir / rel;
    if (!fs::exists(p)) Throw(RIPU_E_VALIDATION, "replay: missing output " + rel);
    if (Sha256(p) != digest) Throw(RIPU_E_VALIDATION, "replay: output differs: " + rel);
    ++same;
  }
  std::printf("replay: %zu output(s) identical\n", same);
  return 0;
}

int RunCommand(const std::vector<std::string>& args) {
  CLI::App app{"Region-impurity active learning toolkit", "ripu"};
  app.set_version_flag("--version", std::string(ripu_version()));
  app.require_subcommand(1);

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic benchmark");
  gen_cmd->add_option("--preset", gen.preset, "Preset name");
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->required();
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  for (const char* key : {"height", "width", "classes", "dims", "head-classes", "smoothness",
                          "objects-min", "objects-max", "object-size-min", "object-size-max",
                          "source-train", "target-train", "target-val"}) {
    gen_cmd->add_option(std::string("--") + key, gen.integer[key]);
  }
  for (const char* key : {"prior-ratio", "mean-scale", "boundary-mix", "noise", "shift",
                          "tail-boost"}) {
    gen_cmd->add_option(std::string("--") + key, gen.numeric[key]);
  }
  gen_cmd->add_option("--priors", gen.priors, "Comma-separated class priors");

  ScoreFlags score;
  auto* score_cmd = app.add_subcommand("score", "Compute acquisition maps for a prediction");
  score_cmd->add_option("--pred", score.pred, "Prediction RPTF (H x W x C, f32)")->required();
  score_cmd->add_option("--mode", score.mode, "Annotation mode")->check(CLI::IsMember({"ra", "pa"}));
  score_cmd->add_option("--k", score.k, "Neighborhood radius (default 1 for ra, 32 for pa)");
  score_cmd->add_option("--out-dir", score.out_dir, "Output directory")->required();

  SelectFlags select;
  auto* select_cmd = app.add_subcommand("select", "Select regions or pixels to annotate");
  select_cmd->add_option("--pred", select.pred, "Prediction RPTF")->required();
  select_cmd->add_option("--annotation", select.annotation, "Current annotation RPTF (u16)");
  select_cmd->add_option("--labels", select.labels, "Ground-truth labels for the oracle");
  select_cmd->add_option("--mode", select.mode)->check(CLI::IsMember({"ra", "pa"}));
  select_cmd->add_option("--strategy", select.strategy)
      ->check(CLI::IsMember({"ripu", "rand", "ent", "sconf", "rect"}));
  select_cmd->add_option("--k", select.k);
  select_cmd->add_option("--budget", select.budget, "Total per-image budget: pixels or percent");
  select_cmd->add_option("--rect-h", select.rect_h);
  select_cmd->add_option("--rect-w", select.rect_w);
  select_cmd->add_option("--round", select.round, "Round to run (0 runs all rounds)");
  select_cmd->add_option("--rounds", select.rounds, "Total rounds");
  select_cmd->add_option("--seed", select.seed);
  select_cmd->add_option("--out-dir", select.out_dir, "Output directory")->required();

  TrainFlags train;
  auto* train_cmd = app.add_subcommand("train", "Run the active adaptation loop");
  train_cmd->add_option("--manifest", train.manifest, "Dataset manifest");
  train_cmd->add_option("--out-dir", train.out_dir, "Output directory");
  train_cmd->add_flag("--print-config", train.print_config, "Print the resolved config and exit");
  train.loop.Register(train_cmd, true);

  EvalFlags eval;
  auto* eval_cmd = app.add_subcommand("eval", "Compute IoU metrics");
  eval_cmd->add_option("--pred", eval.pred, "Prediction RPTF");
  eval_cmd->add_option("--labels", eval.labels, "Label RPTF");
  eval_cmd->add_option("--params", eval.params, "Classifier params RPTF");
  eval_cmd->add_option("--manifest", eval.manifest, "Dataset manifest (target val split)");
  eval_cmd->add_option("--out-dir", eval.out_dir, "Output directory")->required();

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "Compare strategies over budgets and seeds");
  bench_cmd->add_option("--manifest", bench.manifest, "Dataset manifest")->required();
  bench_cmd->add_option("--out-dir", bench.out_dir, "Output directory")->required();
  bench_cmd->add_option("--strategies", bench.strategies, "Comma-separated strategies");
  bench_cmd->add_option("--budgets", bench.budgets, "Comma-separated budgets");
  bench_cmd->add_option("--seeds", bench.seeds, "Comma-separated seeds");
  bench_cmd->add_option("--jobs", bench.jobs, "Cells run in parallel");
  bench.loop.Register(bench_cmd, false);

  ReplayFlags replay;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run a recorded command and compare outputs");
  replay_cmd->add_option("--run", replay.run, "run.json to replay")->required();
  replay_cmd->add_option("--out-dir", replay.out_dir, "Write outputs here instead");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    Throw(RIPU_E_USAGE, msg);
  }

  if (*gen_cmd) return CmdGen(gen, gen_cmd, args);
  if (*score_cmd) return CmdScore(score, args);
  if (*select_cmd) return CmdSelect(select, args);
  if (*train_cmd) return CmdTrain(train, args);
  if (*eval_cmd) return CmdEval(eval, args);
  if (*bench_cmd) return CmdBench(bench, args);
  if (*replay_cmd) return CmdReplay(replay);
  return 2;
}

void ConfigureLogging() {
  const char* env = std::getenv("RIPU_LOG");
  if (env == nullptr || env[0] == '\0') return;
  const std::string v = env;
  if (v == "error") {
    g_log_level = LogLevel::kError;
  } else if (v == "info") {
    g_log_level = LogLevel::kInfo;
  } else if (v == "debug") {
    g_log_level = LogLevel::kDebug;
  } else {
    Throw(RIPU_E_USAGE, "RIPU_LOG must be one of error, info, debug (got \"" + v + "\")");
  }
}

}  // namespace

int main(int argc, char** argv) {
  try {
    ConfigureLogging();
    return RunCommand(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const Failure& f) {
    std::string msg = f.message;
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::fprintf(stderr, "%s: %s\n", ripu_status_name(f.status), msg.c_str());
    return static_cast<int>(f.status);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "RIPU_E_INTERNAL: %s\n", e.what());
    return RIPU_E_INTERNAL;
  }
}
