/* C interface for the cxgb causal gradient boosting engine. */

#pragma once

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible API call.
typedef enum CxgbStatus {
  CXGB_STATUS_OK = 0,
  // A required pointer argument was null.
  CXGB_STATUS_NULL_ARGUMENT = 1,
  // An argument failed validation (shapes, ranges, encodings).
  CXGB_STATUS_INVALID_ARGUMENT = 2,
  // Configuration rejected before any work started.
  CXGB_STATUS_CONFIG_ERROR = 3,
  // Data violated a contract (domains, shapes, empty arms).
  CXGB_STATUS_DATA_ERROR = 4,
  // File could not be read, written or parsed.
  CXGB_STATUS_IO_ERROR = 5,
  // A panic was caught at the boundary.
  CXGB_STATUS_INTERNAL_ERROR = 6,
} CxgbStatus;

// Opaque dataset handle.
typedef struct CxgbDataset CxgbDataset;

// Opaque fitted-estimator handle.
typedef struct CxgbModel CxgbModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *cxgb_version(void);

// Message of the most recent failure on this thread. Valid until the next
// failing call on the same thread; never null.
const char *cxgb_last_error(void);

// Build a dataset from dense arrays.
//
// `features`: row-major `n_rows x n_features`, NaN marks a missing cell.
// `treatment`: length `n_rows` of 0/1, or null when there is no treatment.
// `outcome`: length `n_rows`, required.
// `mu0`, `mu1`: optional ground-truth potential-outcome means (both or
// neither).
//
// # Safety
// Pointers must reference buffers of the stated lengths.
enum CxgbStatus cxgb_dataset_new(const double *features,
                                 size_t n_rows,
                                 size_t n_features,
                                 const int32_t *treatment,
                                 const double *outcome,
                                 const double *mu0,
                                 const double *mu1,
                                 struct CxgbDataset **out);

// Load a dataset CSV (`x0..x{d-1},t,y[,mu0,mu1]`; empty or NA = missing).
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be a valid pointer.
enum CxgbStatus cxgb_dataset_read_csv(const char *path, struct CxgbDataset **out);

// Write a dataset in the CSV schema.
//
// # Safety
// `dataset` must be a live handle; `path` a NUL-terminated string.
enum CxgbStatus cxgb_dataset_write_csv(const struct CxgbDataset *dataset, const char *path);

// Number of rows; 0 for a null handle.
//
// # Safety
// `dataset` must be null or a live handle.
size_t cxgb_dataset_n_rows(const struct CxgbDataset *dataset);

// Number of feature columns; 0 for a null handle.
//
// # Safety
// `dataset` must be null or a live handle.
size_t cxgb_dataset_n_features(const struct CxgbDataset *dataset);

// Release a dataset handle (null is a no-op).
//
// # Safety
// `dataset` must be null or an owned handle not used afterwards.
void cxgb_dataset_free(struct CxgbDataset *dataset);

// Fit an estimator on a dataset.
//
// `config_json` example:
// `{"estimator": "cxgboost", "hessian_mode": "paper-literal",
//   "train": {"n_estimators": 100, "max_depth": 5}}`
// Estimators: "cxgboost", "slearner", "tlearner". Omitted train fields take
// their defaults.
//
// # Safety
// `dataset` must be a live handle; `config_json` a NUL-terminated string;
// `out` a valid pointer.
enum CxgbStatus cxgb_fit(const struct CxgbDataset *dataset,
                         const char *config_json,
                         struct CxgbModel **out);

// Estimator kind of a model as a static string ("cxgboost", "slearner",
// "tlearner"), or null for a null handle.
//
// # Safety
// `model` must be null or a live handle.
const char *cxgb_model_kind(const struct CxgbModel *model);

// Predict both potential outcomes for a dense feature matrix.
//
// `q0_out` and `q1_out` must each hold `n_rows` doubles.
//
// # Safety
// `model` must be a live handle and all buffers must have the stated sizes.
enum CxgbStatus cxgb_predict_potential(const struct CxgbModel *model,
                                       const double *features,
                                       size_t n_rows,
                                       size_t n_features,
                                       double *q0_out,
                                       double *q1_out);

// Mean predicted individual effect over the rows.
//
// # Safety
// `model` must be a live handle; `features` as in
// [`cxgb_predict_potential`]; `ate_out` must be a valid pointer.
enum CxgbStatus cxgb_estimate_ate(const struct CxgbModel *model,
                                  const double *features,
                                  size_t n_rows,
                                  size_t n_features,
                                  double *ate_out);

// Save a model file (JSON with an estimator-kind header).
//
// # Safety
// `model` must be a live handle; `path` a NUL-terminated string.
enum CxgbStatus cxgb_model_save(const struct CxgbModel *model, const char *path);

// Load a model file written by [`cxgb_model_save`] (or the CLI).
//
// # Safety
// `path` must be a NUL-terminated string; `out` a valid pointer.
enum CxgbStatus cxgb_model_load(const char *path, struct CxgbModel **out);

// Release a model handle (null is a no-op).
//
// # Safety
// `model` must be null or an owned handle not used afterwards.
void cxgb_model_free(struct CxgbModel *model);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
