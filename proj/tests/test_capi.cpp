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

// Exercises the shared library through its public C header only.
#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ripu/ripu.h"

namespace {

namespace fs = std::filesystem;

struct Tensor {
  ripu_tensor_t t = nullptr;
  ~Tensor() { ripu_tensor_destroy(t); }
};

struct CString {
  char* s = nullptr;
  ~CString() { ripu_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

fs::path TempDir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ripu_capi_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Random softmax-like prediction, H x W x C.
std::vector<float> RandomProbs(int h, int w, int c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.01f, 1.0f);
  std::vector<float> p(static_cast<std::size_t>(h) * w * c);
  for (std::size_t px = 0; px < static_cast<std::size_t>(h) * w; ++px) {
    float sum = 0.0f;
    for (int k = 0; k < c; ++k) sum += p[px * c + k] = u(rng);
    for (int k = 0; k < c; ++k) p[px * c + k] /= sum;
  }
  return p;
}

ripu_tensor_t MakePrediction(int h, int w, int c, std::uint64_t seed) {
  const auto probs = RandomProbs(h, w, c, seed);
  const uint32_t dims[3] = {uint32_t(h), uint32_t(w), uint32_t(c)};
  ripu_tensor_t t = nullptr;
  EXPECT_EQ(ripu_tensor_create(RIPU_DTYPE_F32, 3, dims, probs.data(), &t), RIPU_OK);
  return t;
}

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(ripu_version(), "");
  EXPECT_STREQ(ripu_status_name(RIPU_OK), "RIPU_OK");
  EXPECT_STREQ(ripu_status_name(RIPU_E_VALIDATION), "RIPU_E_VALIDATION");
  EXPECT_STREQ(ripu_status_name(RIPU_E_USAGE), "RIPU_E_USAGE");
}

TEST(CApi, TensorRoundTrip) {
  const auto dir = TempDir("tensor");
  const uint16_t labels[6] = {0, 1, 2, RIPU_UNLABELED, 1, 0};
  const uint32_t dims[2] = {2, 3};
  Tensor a, b;
  ASSERT_EQ(ripu_tensor_create(RIPU_DTYPE_U16, 2, dims, labels, &a.t), RIPU_OK);
  const auto path = (dir / "labels.rptf").string();
  ASSERT_EQ(ripu_tensor_write(a.t, path.c_str()), RIPU_OK);
  ASSERT_EQ(ripu_tensor_read(path.c_str(), &b.t), RIPU_OK);
  ripu_dtype dtype;
  int rank;
  uint32_t got[3];
  ASSERT_EQ(ripu_tensor_info(b.t, &dtype, &rank, got), RIPU_OK);
  EXPECT_EQ(dtype, RIPU_DTYPE_U16);
  EXPECT_EQ(rank, 2);
  EXPECT_EQ(got[0], 2u);
  EXPECT_EQ(got[1], 3u);
  const void* data;
  size_t bytes;
  ASSERT_EQ(ripu_tensor_data(b.t, &data, &bytes), RIPU_OK);
  ASSERT_EQ(bytes, sizeof(labels));
  EXPECT_EQ(std::memcmp(data, labels, bytes), 0);
  EXPECT_EQ(fs::file_size(path), 8u + 2 * 4 + sizeof(labels));

  char hex[65];
  ASSERT_EQ(ripu_file_sha256(path.c_str(), hex), RIPU_OK);
  EXPECT_EQ(std::strlen(hex), 64u);
  fs::remove_all(dir);
}

TEST(CApi, ErrorsCarryMessages) {
  Tensor t;
  EXPECT_EQ(ripu_tensor_read("/nonexistent/x.rptf", &t.t), RIPU_E_IO);
  EXPECT_STRNE(ripu_last_error(), "");
  EXPECT_EQ(ripu_tensor_read(nullptr, &t.t), RIPU_E_USAGE);
  const uint32_t dims[3] = {2, 2, 0};
  const float none = 0.0f;
  EXPECT_EQ(ripu_tensor_create(RIPU_DTYPE_F32, 3, dims, &none, &t.t), RIPU_E_VALIDATION);
  EXPECT_EQ(ripu_tensor_create(RIPU_DTYPE_F32, 4, dims, &none, &t.t), RIPU_E_USAGE);
  EXPECT_STREQ(ripu_version(), ripu_version());
  long px = 0;
  EXPECT_EQ(ripu_parse_budget("40", 64, 64, &px), RIPU_OK);
  EXPECT_STREQ(ripu_last_error(), "");
}

TEST(CApi, ParseBudget) {
  long px = 0;
  ASSERT_EQ(ripu_parse_budget("2.2%", 64, 64, &px), RIPU_OK);
  EXPECT_EQ(px, 90);
  ASSERT_EQ(ripu_parse_budget("40", 64, 64, &px), RIPU_OK);
  EXPECT_EQ(px, 40);
  EXPECT_EQ(ripu_parse_budget("lots", 64, 64, &px), RIPU_E_USAGE);
}

TEST(CApi, ScorePlanes) {
  Tensor pred;
  pred.t = MakePrediction(12, 10, 4, 1);
  ripu_tensor_t out[4] = {};
  ASSERT_EQ(ripu_score(pred.t, "ra", 1, out), RIPU_OK);
  const float* planes[4];
  for (int n = 0; n < 4; ++n) {
    ripu_dtype dtype;
    int rank;
    uint32_t dims[3];
    ASSERT_EQ(ripu_tensor_info(out[n], &dtype, &rank, dims), RIPU_OK);
    EXPECT_EQ(dtype, RIPU_DTYPE_F32);
    EXPECT_EQ(rank, 2);
    const void* data;
    size_t bytes;
    ASSERT_EQ(ripu_tensor_data(out[n], &data, &bytes), RIPU_OK);
    EXPECT_EQ(bytes, 12u * 10u * 4u);
    planes[n] = static_cast<const float*>(data);
  }
  for (int p = 0; p < 120; ++p) {
    EXPECT_NEAR(planes[3][p], planes[0][p] * planes[2][p], 1e-5);
    EXPECT_LE(planes[1][p], std::log(4.0) + 1e-6);
  }
  for (auto* t : out) ripu_tensor_destroy(t);
  ripu_tensor_t bad[4] = {};
  EXPECT_EQ(ripu_score(pred.t, "xa", 1, bad), RIPU_E_USAGE);
}

TEST(CApi, SelectFiveRoundsSpendsBudget) {
  Tensor pred;
  pred.t = MakePrediction(64, 64, 6, 2);
  ripu_select_options opts;
  ASSERT_EQ(ripu_select_options_init(&opts, "ra"), RIPU_OK);
  EXPECT_EQ(opts.k, 1);
  EXPECT_STREQ(opts.budget, "2.2%");
  EXPECT_EQ(opts.rounds, 5);
  ripu_selection_t sel = nullptr;
  ASSERT_EQ(ripu_select(pred.t, nullptr, nullptr, &opts, &sel), RIPU_OK) << ripu_last_error();
  long spent = 0, total = 0;
  int shortfall = -1;
  ASSERT_EQ(ripu_selection_summary(sel, &spent, &total, &shortfall), RIPU_OK);
  EXPECT_EQ(total, 90);
  // The final round may overshoot by at most one region minus a pixel.
  EXPECT_GE(spent, 90);
  EXPECT_LE(spent, 90 + 8);
  EXPECT_GE(shortfall, 0);
  long from_picks = 0;
  int last_round = 0;
  for (size_t n = 0; n < ripu_selection_pick_count(sel); ++n) {
    ripu_pick pick;
    ASSERT_EQ(ripu_selection_pick(sel, n, &pick), RIPU_OK);
    EXPECT_GE(pick.round, last_round);
    last_round = pick.round;
    from_picks += pick.pixels;
  }
  EXPECT_EQ(last_round, 5);
  EXPECT_EQ(from_picks, spent);

  Tensor ann;
  ASSERT_EQ(ripu_selection_annotation(sel, &ann.t), RIPU_OK);
  const void* data;
  size_t bytes;
  ASSERT_EQ(ripu_tensor_data(ann.t, &data, &bytes), RIPU_OK);
  const auto* labels = static_cast<const uint16_t*>(data);
  long labeled = 0;
  for (size_t p = 0; p < bytes / 2; ++p) {
    if (labels[p] == RIPU_UNLABELED) continue;
    ++labeled;
    EXPECT_LT(labels[p], 6);
  }
  EXPECT_EQ(labeled, spent);
  ripu_selection_destroy(sel);

  opts.round = 9;
  EXPECT_EQ(ripu_select(pred.t, nullptr, nullptr, &opts, &sel), RIPU_E_USAGE);
}

TEST(CApi, SelectSingleRoundContinuesFromState) {
  Tensor pred;
  pred.t = MakePrediction(32, 32, 3, 3);
  ripu_select_options opts;
  ASSERT_EQ(ripu_select_options_init(&opts, "ra"), RIPU_OK);
  opts.budget = "50";
  opts.round = 1;
  ripu_selection_t first = nullptr;
  ASSERT_EQ(ripu_select(pred.t, nullptr, nullptr, &opts, &first), RIPU_OK);
  Tensor state;
  ASSERT_EQ(ripu_selection_annotation(first, &state.t), RIPU_OK);
  long spent1 = 0, total = 0;
  int sf = 0;
  ripu_selection_summary(first, &spent1, &total, &sf);
  EXPECT_LE(spent1, 10);

  opts.round = 2;
  ripu_selection_t second = nullptr;
  ASSERT_EQ(ripu_select(pred.t, state.t, nullptr, &opts, &second), RIPU_OK);
  long spent2 = 0;
  ripu_selection_summary(second, &spent2, &total, &sf);
  EXPECT_GT(spent2, 0);
  EXPECT_LE(spent1 + spent2, 20);
  ripu_selection_destroy(first);
  ripu_selection_destroy(second);
}

TEST(CApi, EvalPredictionClassMismatch) {
  Tensor pred, labels;
  pred.t = MakePrediction(4, 4, 3, 4);
  std::vector<uint16_t> gt(16, 0);
  gt[5] = 7;
  const uint32_t dims[2] = {4, 4};
  ASSERT_EQ(ripu_tensor_create(RIPU_DTYPE_U16, 2, dims, gt.data(), &labels.t), RIPU_OK);
  CString json;
  EXPECT_EQ(ripu_eval_prediction(pred.t, labels.t, &json.s), RIPU_E_VALIDATION);
  EXPECT_NE(std::string(ripu_last_error()).find("class count"), std::string::npos);

  gt[5] = 1;
  Tensor ok;
  ASSERT_EQ(ripu_tensor_create(RIPU_DTYPE_U16, 2, dims, gt.data(), &ok.t), RIPU_OK);
  ASSERT_EQ(ripu_eval_prediction(pred.t, ok.t, &json.s), RIPU_OK);
  EXPECT_NE(json.str().find("\"miou\""), std::string::npos);
}

TEST(CApi, GenerateTrainEvalAndBench) {
  const auto dir = TempDir("loop");
  CString names;
  ASSERT_EQ(ripu_preset_names(&names.s), RIPU_OK);
  EXPECT_NE(names.str().find("desk-v1"), std::string::npos);

  const char* overrides = R"({"height": 24, "width": 24, "object_size_min": 2,
      "object_size_max": 5, "objects_max": 6, "source_train": 6, "target_train": 4,
      "target_val": 2})";
  CString gen;
  ASSERT_EQ(ripu_generate("desk-v1", 5, overrides, (dir / "data").c_str(), &gen.s), RIPU_OK)
      << ripu_last_error();
  const auto manifest = (dir / "data" / "manifest.json").string();
  ASSERT_TRUE(fs::exists(manifest));

  ripu_loop_config cfg;
  ASSERT_EQ(ripu_loop_config_init(&cfg, "ra"), RIPU_OK);
  cfg.iterations = 20;
  cfg.pretrain_iterations = 10;
  CString cfg_json;
  ASSERT_EQ(ripu_loop_config_json(&cfg, &cfg_json.s), RIPU_OK);
  EXPECT_NE(cfg_json.str().find("selection_iterations"), std::string::npos);

  CString summary;
  ASSERT_EQ(ripu_train(manifest.c_str(), &cfg, (dir / "run").c_str(), &summary.s), RIPU_OK)
      << ripu_last_error();
  for (const char* f : {"params.rptf", "trace.csv", "metrics.json"}) {
    EXPECT_TRUE(fs::exists(dir / "run" / f)) << f;
  }
  CString metrics;
  ASSERT_EQ(ripu_eval_params((dir / "run" / "params.rptf").c_str(), manifest.c_str(), &metrics.s),
            RIPU_OK);
  EXPECT_NE(metrics.str().find("\"iou\""), std::string::npos);

  CString bench;
  EXPECT_EQ(ripu_bench(manifest.c_str(), " , ", "2.2%", "1", &cfg, 1, (dir / "b").c_str(), &bench.s),
            RIPU_E_USAGE);
  EXPECT_FALSE(fs::exists(dir / "b"));
  ASSERT_EQ(ripu_bench(manifest.c_str(), "ripu,rand", "2.2%", "1,2", &cfg, 2, (dir / "b").c_str(),
                       &bench.s),
            RIPU_OK)
      << ripu_last_error();
  EXPECT_TRUE(fs::exists(dir / "b" / "bench.csv"));
  EXPECT_TRUE(fs::exists(dir / "b" / "bench_summary.csv"));

  cfg.mode = "xx";
  EXPECT_EQ(ripu_train(manifest.c_str(), &cfg, (dir / "bad").c_str(), &summary.s), RIPU_E_USAGE);
  fs::remove_all(dir);
}

TEST(CApi, PresetJsonAppliesSeedAndOverrides) {
  CString json;
  ASSERT_EQ(ripu_preset_json("desk-v1", 42, R"({"noise": 0.75})", &json.s), RIPU_OK);
  EXPECT_NE(json.str().find("\"seed\": 42"), std::string::npos) << json.str();
  EXPECT_NE(json.str().find("0.75"), std::string::npos);
  EXPECT_EQ(ripu_preset_json("nope", 1, nullptr, &json.s), RIPU_E_USAGE);
}

}  // namespace
