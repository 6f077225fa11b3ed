// Copyright 2026 The eyesam Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EYESAM_H_
#define EYESAM_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define EYESAM_API __declspec(dllexport)
#else
#define EYESAM_API __attribute__((visibility("default")))
#endif

typedef enum eyesam_status {
  EYESAM_OK = 0,
  EYESAM_ERR_EMPTY_MASK = 1,
  EYESAM_ERR_INVALID_FACTOR = 2,
  EYESAM_ERR_INVALID_FRACTION = 3,
  EYESAM_ERR_NO_BACKGROUND_AVAILABLE = 4,
  EYESAM_ERR_SHAPE_MISMATCH = 5,
  EYESAM_ERR_NO_DATA = 6,
  EYESAM_ERR_INVALID_LABEL_MAP = 7,
  EYESAM_ERR_INVALID_ARGUMENT = 8,
  EYESAM_ERR_DECODE = 9,
  EYESAM_ERR_INVALID_HANDLE = 10,
  EYESAM_ERR_EMPTY_PROMPT = 11,
  EYESAM_ERR_CAPABILITY = 12,
  EYESAM_ERR_BACKEND = 13,
  EYESAM_ERR_BACKEND_UNAVAILABLE = 14,
  EYESAM_ERR_MANIFEST = 15,
  EYESAM_ERR_IO = 16,
  EYESAM_ERR_CONFIG = 17,
  EYESAM_ERR_INTERNAL = 99
} eyesam_status;

/* Message of the last failed call on this thread ("" if none). */
EYESAM_API const char* eyesam_last_error(void);
EYESAM_API const char* eyesam_status_string(eyesam_status status);
EYESAM_API const char* eyesam_version(void);
/* Frees strings returned through char** out-parameters. */
EYESAM_API void eyesam_free_string(char* s);

/* ---- experiments ---- */

typedef struct eyesam_experiment eyesam_experiment;

typedef struct eyesam_run_result {
  size_t records;
  size_t scored;
  size_t skipped;
  size_t errors;
} eyesam_run_result;

EYESAM_API eyesam_status eyesam_experiment_from_file(const char* path, eyesam_experiment** out);
/* base_dir may be NULL; relative paths in the document resolve against it. */
EYESAM_API eyesam_status eyesam_experiment_from_json(const char* json, const char* base_dir,
                                                     eyesam_experiment** out);
/* Overrides one setting. Keys: dataset_root, layout, backend (kind name or
 * JSON object text), strategies and features (comma lists), seed, workers,
 * output_dir, multimask_policy, limit, overlays. */
EYESAM_API eyesam_status eyesam_experiment_set(eyesam_experiment* exp, const char* key,
                                               const char* value);
EYESAM_API eyesam_status eyesam_experiment_config_json(const eyesam_experiment* exp, char** out);
/* Runs the sweep. Cell-level failures are counted in result->errors and do
 * not make the call fail. */
EYESAM_API eyesam_status eyesam_experiment_run(eyesam_experiment* exp, eyesam_run_result* result);
EYESAM_API void eyesam_experiment_destroy(eyesam_experiment* exp);

/* formats: comma list of csv, json, png. written may be NULL. */
EYESAM_API eyesam_status eyesam_emit_reports(const char* results_dir, const char* formats,
                                             size_t* written);

/* ---- datasets ---- */

typedef struct eyesam_manifest eyesam_manifest;

EYESAM_API eyesam_status eyesam_manifest_load(const char* root, const char* layout,
                                              eyesam_manifest** out);
EYESAM_API size_t eyesam_manifest_count(const eyesam_manifest* m);
EYESAM_API size_t eyesam_manifest_labeled_count(const eyesam_manifest* m);
/* {"name", "layout", "width", "height", "items", "labeled", "warnings": [...]} */
EYESAM_API eyesam_status eyesam_manifest_summary_json(const eyesam_manifest* m, char** out);
EYESAM_API void eyesam_manifest_destroy(eyesam_manifest* m);

/* Writes a procedural generic-folder dataset. */
EYESAM_API eyesam_status eyesam_synthesize_dataset(const char* dir, int count, uint64_t seed,
                                                   int width, int height);

/* ---- masks and metrics ---- */

typedef struct eyesam_mask eyesam_mask;

typedef struct eyesam_metric_triple {
  double dice;
  double iou;
  double hausdorff;
  int degenerate;
} eyesam_metric_triple;

/* data: width*height bytes, row-major, nonzero = foreground. */
EYESAM_API eyesam_status eyesam_mask_create(int width, int height, const uint8_t* data,
                                            eyesam_mask** out);
EYESAM_API void eyesam_mask_destroy(eyesam_mask* mask);
EYESAM_API eyesam_status eyesam_score_masks(const eyesam_mask* predicted,
                                            const eyesam_mask* truth,
                                            eyesam_metric_triple* out);

/* ---- annotation server ---- */

typedef struct eyesam_server eyesam_server;

/* backend: kind name or JSON object text. dataset_root, layout and
 * static_dir may be NULL. */
EYESAM_API eyesam_status eyesam_server_create(const char* backend, const char* dataset_root,
                                              const char* layout, const char* static_dir,
                                              eyesam_server** out);
/* port 0 picks a free port; the bound port is stored in *bound_port. */
EYESAM_API eyesam_status eyesam_server_bind(eyesam_server* s, const char* host, int port,
                                            int* bound_port);
/* Blocks until eyesam_server_stop is called from another thread. */
EYESAM_API eyesam_status eyesam_server_listen(eyesam_server* s);
EYESAM_API void eyesam_server_stop(eyesam_server* s);
EYESAM_API void eyesam_server_destroy(eyesam_server* s);

#ifdef __cplusplus
}
#endif

#endif  /* EYESAM_H_ */
