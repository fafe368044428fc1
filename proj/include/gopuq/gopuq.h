/*
 * Copyright 2026 The gopuq Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the gopuq pronunciation-scoring engine.
 *
 * Every fallible call returns a gopuq_status. On failure a description is
 * available from gopuq_last_error() until the next call on the same thread.
 * Objects returned through out-pointers are owned by the caller and released
 * with the matching *_free function. Strings obtained from an object stay
 * valid until that object is freed.
 */

#ifndef GOPUQ_GOPUQ_H_
#define GOPUQ_GOPUQ_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GOPUQ_API __declspec(dllexport)
#else
#define GOPUQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gopuq_status {
  GOPUQ_OK = 0,
  GOPUQ_ERR_USAGE,
  GOPUQ_ERR_CONFIG,
  GOPUQ_ERR_UNKNOWN_LABEL,
  GOPUQ_ERR_BAD_MAGIC,
  GOPUQ_ERR_TRUNCATED,
  GOPUQ_ERR_WIDTH_MISMATCH,
  GOPUQ_ERR_NON_FINITE,
  GOPUQ_ERR_EMPTY_SEGMENT,
  GOPUQ_ERR_OVERLAP,
  GOPUQ_ERR_FRAME_OUT_OF_RANGE,
  GOPUQ_ERR_PARSE,
  GOPUQ_ERR_DUPLICATE_KEY,
  GOPUQ_ERR_NEGATIVE_SEVERITY,
  GOPUQ_ERR_PRIOR_SUM,
  GOPUQ_ERR_MISSING_LABEL,
  GOPUQ_ERR_UNSCORABLE,
  GOPUQ_ERR_UNDEFINED_CORRELATION,
  GOPUQ_ERR_IO,
  GOPUQ_ERR_INTERNAL
} gopuq_status;

GOPUQ_API const char* gopuq_version(void);
GOPUQ_API const char* gopuq_status_name(gopuq_status status);
/* 0 success, 1 usage, 2 data validation, 3 I/O (internal errors map to 2). */
GOPUQ_API int gopuq_status_exit_code(gopuq_status status);
GOPUQ_API const char* gopuq_last_error(void);
/* Returns 1 and stores the byte offset if the last error carried one. */
GOPUQ_API int gopuq_last_error_offset(uint64_t* offset);

/* --- methods ----------------------------------------------------------- */

typedef enum gopuq_normalization {
  GOPUQ_NORM_NONE = 0,
  GOPUQ_NORM_SCALE = 1,
  GOPUQ_NORM_PRIOR = 2
} gopuq_normalization;

typedef enum gopuq_scoring {
  GOPUQ_SCORE_GMM = 0,
  GOPUQ_SCORE_NN,
  GOPUQ_SCORE_DNN,
  GOPUQ_SCORE_ENTROPY,
  GOPUQ_SCORE_MARGIN,
  GOPUQ_SCORE_MAXLOGIT,
  GOPUQ_SCORE_LOGITMARGIN
} gopuq_scoring;

typedef struct gopuq_method {
  gopuq_normalization normalization;
  gopuq_scoring scoring;
  double temperature; /* used by GOPUQ_NORM_SCALE */
} gopuq_method;

/* Parses "norm:score". `temperature` is used only when has_temperature != 0;
 * scale methods require it. */
GOPUQ_API gopuq_status gopuq_method_parse(const char* text, double temperature,
                                          int has_temperature, gopuq_method* out);

/* --- in-memory scoring ------------------------------------------------- */

/* Scores frames [0, n_frames) of a row-major logit block as one segment of
 * canonical phone `phone`. `prior` (n_phones entries) may be NULL unless the
 * method uses it. */
GOPUQ_API gopuq_status gopuq_score_frames(const float* logits, size_t n_frames,
                                          size_t n_phones, size_t phone,
                                          const gopuq_method* method,
                                          const double* prior, double* out_score);

/* Tie-corrected Kendall tau. */
GOPUQ_API gopuq_status gopuq_kendall_tau_b(const double* x, const double* y, size_t n,
                                           double* out_tau);

/* --- FLM logit matrices ------------------------------------------------ */

typedef struct gopuq_matrix gopuq_matrix;

/* expected_width 0 accepts any width. */
GOPUQ_API gopuq_status gopuq_matrix_read(const char* path, size_t expected_width,
                                         gopuq_matrix** out);
GOPUQ_API gopuq_status gopuq_matrix_write(const char* path, const float* values,
                                          size_t n_frames, size_t n_phones);
GOPUQ_API size_t gopuq_matrix_n_frames(const gopuq_matrix* m);
GOPUQ_API size_t gopuq_matrix_n_phones(const gopuq_matrix* m);
GOPUQ_API const float* gopuq_matrix_data(const gopuq_matrix* m);
GOPUQ_API void gopuq_matrix_free(gopuq_matrix* m);

/* --- batch commands ---------------------------------------------------- */

typedef struct gopuq_run_options {
  double temperature;
  int has_temperature;
  size_t min_support; /* default 10 */
  size_t top_k;       /* default 5 */
  size_t jobs;        /* default 1 */
  int entropy_literal;
} gopuq_run_options;

GOPUQ_API void gopuq_run_options_init(gopuq_run_options* options);

GOPUQ_API gopuq_status gopuq_priors(const char* manifest, const char* out_path);

typedef struct gopuq_score_summary {
  size_t n_segments;
  size_t n_utterances;
  size_t n_skipped;
} gopuq_score_summary;

/* Writes segments.tsv, utterances.tsv and skipped.tsv into out_dir.
 * `summary` may be NULL. */
GOPUQ_API gopuq_status gopuq_score(const char* manifest, const char* method,
                                   const gopuq_run_options* options,
                                   const char* out_dir, gopuq_score_summary* summary);

typedef struct gopuq_report gopuq_report;

typedef struct gopuq_method_result {
  const char* method; /* "norm:score" */
  int defined;        /* 0 when the correlation was undefined */
  double tau;
  size_t n_items;
  const char* error; /* "" when defined */
} gopuq_method_result;

typedef struct gopuq_phoneme_result {
  const char* label;
  double tau;
  size_t n_segments;
} gopuq_phoneme_result;

/* Evaluates `methods` (n_methods strings), or the default 15-cell grid when
 * n_methods is 0. with_phonemes adds per-phoneme analysis of prior:maxlogit.
 * Writes the JSON report to out_path and a TSV table beside it. `report`
 * may be NULL. */
GOPUQ_API gopuq_status gopuq_evaluate(const char* manifest, const char* const* methods,
                                      size_t n_methods, int with_phonemes,
                                      const gopuq_run_options* options,
                                      const char* out_path, gopuq_report** report);

GOPUQ_API gopuq_status gopuq_phoneme_corr(const char* manifest, const char* method,
                                          const gopuq_run_options* options,
                                          const char* out_path, gopuq_report** report);

GOPUQ_API size_t gopuq_report_method_count(const gopuq_report* r);
GOPUQ_API gopuq_status gopuq_report_method(const gopuq_report* r, size_t index,
                                           gopuq_method_result* out);
/* Returns 1 and stores the index of the most negative defined tau. */
GOPUQ_API int gopuq_report_best(const gopuq_report* r, size_t* index);
GOPUQ_API size_t gopuq_report_phoneme_count(const gopuq_report* r);
GOPUQ_API gopuq_status gopuq_report_phoneme(const gopuq_report* r, size_t index,
                                            gopuq_phoneme_result* out);
GOPUQ_API size_t gopuq_report_top_k_count(const gopuq_report* r);
GOPUQ_API gopuq_status gopuq_report_top_k(const gopuq_report* r, size_t index,
                                          gopuq_phoneme_result* out);
GOPUQ_API size_t gopuq_report_skipped_phone_count(const gopuq_report* r);
GOPUQ_API void gopuq_report_free(gopuq_report* r);

/* Writes mean NLL per grid point into nll_out (n_grid entries).
 * validation_ids may be NULL to use every aligned utterance. */
GOPUQ_API gopuq_status gopuq_calibrate(const char* manifest, const double* grid,
                                       size_t n_grid, const char* validation_ids,
                                       double* nll_out, double* best_temperature);

typedef struct gopuq_synth_config {
  size_t n_utterances;
  size_t n_phones;
  size_t frames_per_segment;
  size_t segments_per_utterance;
  size_t severity_levels;
  double degradation_slope;
  double noise_scale;
  uint64_t seed;
  double base_high;
  double base_low;
  size_t silence_frames;
  long degrading_phone; /* -1: every phone degrades */
} gopuq_synth_config;

GOPUQ_API void gopuq_synth_config_init(gopuq_synth_config* config);
GOPUQ_API gopuq_status gopuq_synth(const gopuq_synth_config* config, const char* out_dir,
                                   int force);

#ifdef __cplusplus
}
#endif

#endif /* GOPUQ_GOPUQ_H_ */
