/* Copyright 2026 The DCCHI Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the dcchi library. All objects are opaque handles owned by
 * the caller and released with the matching *_destroy call. Every function
 * returning dcchi_status leaves a message retrievable with dcchi_last_error
 * (per thread) when it fails.
 */
#ifndef DCCHI_H_
#define DCCHI_H_

#include <stddef.h>
#include <stdint.h>

#if defined(DCCHI_BUILDING_LIBRARY)
#define DCCHI_API __attribute__((visibility("default")))
#else
#define DCCHI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dcchi_status {
  DCCHI_OK = 0,
  DCCHI_ERR_INVALID_ARGUMENT = 1,
  DCCHI_ERR_CONFIG = 2,
  DCCHI_ERR_NUMERIC = 3,
  DCCHI_ERR_FORMAT = 4,
  DCCHI_ERR_DIMENSION = 5,
  DCCHI_ERR_STATE = 6,
  DCCHI_ERR_IO = 7,
  DCCHI_ERR_INTERNAL = 8
} dcchi_status;

typedef enum dcchi_dtype { DCCHI_F32 = 1, DCCHI_F64 = 2 } dcchi_dtype;

typedef struct dcchi_config dcchi_config;
typedef struct dcchi_tensor dcchi_tensor;

/* Receives one line of progress text per call. */
typedef void (*dcchi_log_fn)(const char* line, void* user);

DCCHI_API const char* dcchi_version(void);
DCCHI_API const char* dcchi_status_name(dcchi_status status);
/* Message of the last failure on this thread; "" when none. */
DCCHI_API const char* dcchi_last_error(void);

/* ---- configuration ---------------------------------------------------- */

DCCHI_API dcchi_status dcchi_config_create(dcchi_config** out);
DCCHI_API dcchi_status dcchi_config_load(const char* path, dcchi_config** out);
DCCHI_API dcchi_status dcchi_config_parse(const char* text, dcchi_config** out);
DCCHI_API void dcchi_config_destroy(dcchi_config* cfg);
/* Sets "section.key"; the whole config is re-validated and left unchanged
 * on failure. */
DCCHI_API dcchi_status dcchi_config_set(dcchi_config* cfg, const char* key, const char* value);
DCCHI_API dcchi_status dcchi_config_hash(const dcchi_config* cfg, uint64_t* out);
DCCHI_API dcchi_status dcchi_config_model_hash(const dcchi_config* cfg, uint64_t* out);
/* Canonical text of every setting. Writes at most `capacity` bytes
 * including the terminator; `needed` receives the full size. */
DCCHI_API dcchi_status dcchi_config_text(const dcchi_config* cfg, char* buffer, size_t capacity, size_t* needed);

/* ---- commands ----------------------------------------------------------
 * Each writes its files plus manifest.txt into out_dir. `log` may be NULL. */

DCCHI_API dcchi_status dcchi_synth(const dcchi_config* cfg, const char* out_dir, dcchi_log_fn log, void* user);
DCCHI_API dcchi_status dcchi_simulate(const dcchi_config* cfg, const char* out_dir, dcchi_log_fn log, void* user);
/* psnr_db / ssim may be NULL; they are NaN when no ground truth is set. */
DCCHI_API dcchi_status dcchi_reconstruct(const dcchi_config* cfg, const char* out_dir, dcchi_log_fn log, void* user,
                                         double* psnr_db, double* ssim);
/* final_loss may be NULL; NaN for a zero-step run. */
DCCHI_API dcchi_status dcchi_train(const dcchi_config* cfg, const char* out_dir, dcchi_log_fn log, void* user,
                                   double* final_loss);
/* `passed` is set to 1 when every check passes, else 0. */
DCCHI_API dcchi_status dcchi_gradcheck(const dcchi_config* cfg, const char* out_dir, dcchi_log_fn log, void* user,
                                       int* passed);
DCCHI_API dcchi_status dcchi_ablate(const dcchi_config* cfg, const char* out_dir, dcchi_log_fn log, void* user);
/* mean_correlation may be NULL. */
DCCHI_API dcchi_status dcchi_analyze_corr(const dcchi_config* cfg, const char* out_dir, dcchi_log_fn log, void* user,
                                          double* mean_correlation);

/* ---- tensors ---------------------------------------------------------- */

DCCHI_API dcchi_status dcchi_tensor_create(dcchi_dtype dtype, int ndim, const int64_t* shape, const double* data,
                                           dcchi_tensor** out);
DCCHI_API dcchi_status dcchi_tensor_load(const char* path, dcchi_tensor** out);
DCCHI_API dcchi_status dcchi_tensor_save(const dcchi_tensor* t, const char* path);
DCCHI_API void dcchi_tensor_destroy(dcchi_tensor* t);
DCCHI_API int dcchi_tensor_ndim(const dcchi_tensor* t);
DCCHI_API dcchi_dtype dcchi_tensor_dtype(const dcchi_tensor* t);
DCCHI_API int64_t dcchi_tensor_numel(const dcchi_tensor* t);
/* Copies min(ndim, capacity) extents. */
DCCHI_API dcchi_status dcchi_tensor_shape(const dcchi_tensor* t, int64_t* shape, int capacity);
/* Copies exactly numel values; `count` must equal dcchi_tensor_numel. */
DCCHI_API dcchi_status dcchi_tensor_read(const dcchi_tensor* t, double* data, int64_t count);

#ifdef __cplusplus
}
#endif

#endif /* DCCHI_H_ */
