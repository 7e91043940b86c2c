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

#ifndef RIPU_RIPU_H_
#define RIPU_RIPU_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RIPU_EXPORT __declspec(dllexport)
#elif defined(__GNUC__)
#define RIPU_EXPORT __attribute__((visibility("default")))
#else
#define RIPU_EXPORT
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes in the command-line tool. */
typedef enum {
  RIPU_OK = 0,
  RIPU_E_USAGE = 2,
  RIPU_E_VALIDATION = 3,
  RIPU_E_IO = 4,
  RIPU_E_NUMERICAL = 5,
  RIPU_E_INTERNAL = 6
} ripu_status;

typedef enum {
  RIPU_DTYPE_F32 = 0,
  RIPU_DTYPE_U8 = 1,
  RIPU_DTYPE_U16 = 2,
  RIPU_DTYPE_U32 = 3
} ripu_dtype;

#define RIPU_UNLABELED 0xFFFFu

typedef struct ripu_tensor* ripu_tensor_t;
typedef struct ripu_selection* ripu_selection_t;

RIPU_EXPORT const char* ripu_version(void);
/* "RIPU_OK", "RIPU_E_VALIDATION", ... */
RIPU_EXPORT const char* ripu_status_name(ripu_status status);
/* Message of the last failed call on this thread; empty after success. */
RIPU_EXPORT const char* ripu_last_error(void);
/* Frees strings returned through char** out-parameters. */
RIPU_EXPORT void ripu_string_free(char* s);

/* ---- tensors ---- */

RIPU_EXPORT ripu_status ripu_tensor_read(const char* path, ripu_tensor_t* out);
RIPU_EXPORT ripu_status ripu_tensor_write(ripu_tensor_t tensor, const char* path);
/* Copies `data` (row-major, channel-last, host byte order). */
RIPU_EXPORT ripu_status ripu_tensor_create(ripu_dtype dtype, int rank, const uint32_t* dims,
                                           const void* data, ripu_tensor_t* out);
RIPU_EXPORT ripu_status ripu_tensor_info(ripu_tensor_t tensor, ripu_dtype* dtype, int* rank,
                                         uint32_t dims[3]);
/* Borrowed pointer, valid until the tensor is destroyed. */
RIPU_EXPORT ripu_status ripu_tensor_data(ripu_tensor_t tensor, const void** data, size_t* bytes);
RIPU_EXPORT void ripu_tensor_destroy(ripu_tensor_t tensor);

/* ---- scoring ---- */

/* Writes impurity, entropy, uncertainty and score planes (rank-2 f32) to
 * out[0..3]. mode is "ra" or "pa". */
RIPU_EXPORT ripu_status ripu_score(ripu_tensor_t prediction, const char* mode, int k,
                                   ripu_tensor_t out[4]);

/* ---- selection ---- */

typedef struct {
  const char* mode;      /* "ra" | "pa" */
  const char* strategy;  /* "ripu" | "rand" | "ent" | "sconf" | "rect" */
  int k;
  int rect_h;
  int rect_w;
  const char* budget; /* total per image: "40" or "2.2%" */
  int rounds;
  int round; /* 1..rounds; 0 runs every round in sequence */
  uint64_t seed;
} ripu_select_options;

typedef struct {
  int round;
  int row;
  int col;
  double score;
  long pixels;
} ripu_pick;

/* Defaults for `mode`: k=1 and 2.2% for RA, k=32 and 40 pixels for PA. */
RIPU_EXPORT ripu_status ripu_select_options_init(ripu_select_options* options, const char* mode);

/* `state` (u16 labels, may be NULL for an empty annotation) holds the
 * current annotation; its labeled count is the spend so far. With
 * `ground_truth` the new pixels receive their true class, otherwise their
 * pseudo-label. */
RIPU_EXPORT ripu_status ripu_select(ripu_tensor_t prediction, ripu_tensor_t state,
                                    ripu_tensor_t ground_truth,
                                    const ripu_select_options* options, ripu_selection_t* out);
RIPU_EXPORT size_t ripu_selection_pick_count(ripu_selection_t selection);
RIPU_EXPORT ripu_status ripu_selection_pick(ripu_selection_t selection, size_t index,
                                            ripu_pick* out);
RIPU_EXPORT ripu_status ripu_selection_annotation(ripu_selection_t selection, ripu_tensor_t* out);
/* Pixels spent by this call, total budget per image, rounds that ran short. */
RIPU_EXPORT ripu_status ripu_selection_summary(ripu_selection_t selection, long* spent,
                                               long* total_budget, int* shortfall_rounds);
RIPU_EXPORT void ripu_selection_destroy(ripu_selection_t selection);

/* ---- budgets ---- */

/* Resolves "40" or "2.2%" to pixels per image for an H x W image. */
RIPU_EXPORT ripu_status ripu_parse_budget(const char* text, int height, int width,
                                          long* pixels);

/* ---- training ---- */

typedef struct {
  int iterations;
  int pretrain_iterations;
  int rounds;
  const char* budget;
  const char* mode;
  const char* strategy;
  int k;
  int rect_h;
  int rect_w;
  double tau;
  double alpha1;
  double alpha2;
  double learning_rate;
  double poly_power;
  double momentum;
  double weight_decay;
  int batch_per_domain;
  uint64_t seed;
  int source_free;
  int dense_target;
} ripu_loop_config;

RIPU_EXPORT ripu_status ripu_loop_config_init(ripu_loop_config* config, const char* mode);
/* Fully resolved configuration as JSON, including selection iterations. */
RIPU_EXPORT ripu_status ripu_loop_config_json(const ripu_loop_config* config, char** json);

/* Runs the active loop on the manifest and writes params.rptf, trace.csv and
 * metrics.json under out_dir. `summary` receives a JSON object. */
RIPU_EXPORT ripu_status ripu_train(const char* manifest, const ripu_loop_config* config,
                                   const char* out_dir, char** summary);

/* Metrics JSON for one prediction/label pair. */
RIPU_EXPORT ripu_status ripu_eval_prediction(ripu_tensor_t prediction, ripu_tensor_t labels,
                                             char** metrics_json);
/* Metrics JSON for stored params on the manifest's target val split. */
RIPU_EXPORT ripu_status ripu_eval_params(const char* params_path, const char* manifest,
                                         char** metrics_json);

/* Comma-separated strategy, budget and seed lists. Writes bench.csv and
 * bench_summary.csv under out_dir. */
RIPU_EXPORT ripu_status ripu_bench(const char* manifest, const char* strategies,
                                   const char* budgets, const char* seeds,
                                   const ripu_loop_config* base, int jobs, const char* out_dir,
                                   char** summary);

/* ---- synthetic data ---- */

/* Comma-separated preset names. */
RIPU_EXPORT ripu_status ripu_preset_names(char** names);
/* Resolved scene config of a preset after `overrides_json` (an object keyed
 * by scene field names, may be NULL) and `seed`. */
RIPU_EXPORT ripu_status ripu_preset_json(const char* preset, uint64_t seed,
                                         const char* overrides_json, char** json);
/* Writes the benchmark and manifest.json under out_dir. */
RIPU_EXPORT ripu_status ripu_generate(const char* preset, uint64_t seed,
                                      const char* overrides_json, const char* out_dir,
                                      char** summary);

/* ---- misc ---- */

/* Lowercase hex SHA-256 of a file; `hex` must hold 65 bytes. */
RIPU_EXPORT ripu_status ripu_file_sha256(const char* path, char hex[65]);

#ifdef __cplusplus
}
#endif

#endif /* RIPU_RIPU_H_ */
