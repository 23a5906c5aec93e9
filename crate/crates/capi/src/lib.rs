//! C ABI for the cxgb engine: opaque handles, status codes, and a
//! thread-local last-error message. The matching header is generated into
//! `include/cxgb.h` at build time.
//!
//! Conventions:
//! - Every fallible call returns a [`CxgbStatus`]; `CXGB_STATUS_OK` is 0.
//! - On failure, `cxgb_last_error()` returns a message valid until the next
//!   failing call on the same thread.
//! - Feature matrices are dense row-major `double` buffers; missing cells
//!   are NaN.
//! - Handles returned through out-pointers are owned by the caller and must
//!   be released with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use serde::Deserialize;

use cxgb::causal::{
    fit_cxgboost, fit_slearner, fit_tlearner, EstimatorKind, EstimatorModel, HessianMode,
};
use cxgb::data::{Dataset, Matrix};
use cxgb::error::Error;
use cxgb::gbt::TrainConfig;
use cxgb::synth::{read_csv, write_csv};

/// Status codes returned by every fallible API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CxgbStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An argument failed validation (shapes, ranges, encodings).
    InvalidArgument = 2,
    /// Configuration rejected before any work started.
    ConfigError = 3,
    /// Data violated a contract (domains, shapes, empty arms).
    DataError = 4,
    /// File could not be read, written or parsed.
    IoError = 5,
    /// A panic was caught at the boundary.
    InternalError = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap();
    });
}

fn status_for(err: &Error) -> CxgbStatus {
    match err {
        Error::Config(_) => CxgbStatus::ConfigError,
        Error::Data(_) | Error::EmptyArm { .. } | Error::NonFiniteDerivative { .. } => {
            CxgbStatus::DataError
        }
        Error::Parse { .. } | Error::Io { .. } | Error::Json(_) => CxgbStatus::IoError,
    }
}

fn fail(err: &Error) -> CxgbStatus {
    set_last_error(&err.to_string());
    status_for(err)
}

/// Runs a closure, converting panics into `InternalError`.
fn guarded(f: impl FnOnce() -> CxgbStatus) -> CxgbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("internal panic at the FFI boundary");
            CxgbStatus::InternalError
        }
    }
}

unsafe fn str_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, CxgbStatus> {
    if ptr.is_null() {
        set_last_error(&format!("{name} is null"));
        return Err(CxgbStatus::NullArgument);
    }
    match unsafe { CStr::from_ptr(ptr) }.to_str() {
        Ok(s) => Ok(s),
        Err(_) => {
            set_last_error(&format!("{name} is not valid UTF-8"));
            Err(CxgbStatus::InvalidArgument)
        }
    }
}

unsafe fn matrix_arg(
    features: *const f64,
    n_rows: usize,
    n_features: usize,
) -> Result<Matrix, CxgbStatus> {
    if features.is_null() {
        set_last_error("features is null");
        return Err(CxgbStatus::NullArgument);
    }
    if n_features == 0 {
        set_last_error("n_features must be positive");
        return Err(CxgbStatus::InvalidArgument);
    }
    let values = unsafe { std::slice::from_raw_parts(features, n_rows * n_features) }.to_vec();
    Matrix::new(n_rows, n_features, values).map_err(|e| fail(&e))
}

/// Opaque dataset handle.
pub struct CxgbDataset {
    inner: Dataset,
}

/// Opaque fitted-estimator handle.
pub struct CxgbModel {
    inner: EstimatorModel,
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cxgb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the most recent failure on this thread. Valid until the next
/// failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn cxgb_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Build a dataset from dense arrays.
///
/// `features`: row-major `n_rows x n_features`, NaN marks a missing cell.
/// `treatment`: length `n_rows` of 0/1, or null when there is no treatment.
/// `outcome`: length `n_rows`, required.
/// `mu0`, `mu1`: optional ground-truth potential-outcome means (both or
/// neither).
///
/// # Safety
/// Pointers must reference buffers of the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn cxgb_dataset_new(
    features: *const f64,
    n_rows: usize,
    n_features: usize,
    treatment: *const i32,
    outcome: *const f64,
    mu0: *const f64,
    mu1: *const f64,
    out: *mut *mut CxgbDataset,
) -> CxgbStatus {
    guarded(|| {
        if out.is_null() {
            set_last_error("out is null");
            return CxgbStatus::NullArgument;
        }
        if outcome.is_null() {
            set_last_error("outcome is null");
            return CxgbStatus::NullArgument;
        }
        let matrix = match unsafe { matrix_arg(features, n_rows, n_features) } {
            Ok(m) => m,
            Err(status) => return status,
        };
        let treatment = if treatment.is_null() {
            None
        } else {
            let raw = unsafe { std::slice::from_raw_parts(treatment, n_rows) };
            if let Some(bad) = raw.iter().find(|&&t| t != 0 && t != 1) {
                set_last_error(&format!("treatment value {bad} is not 0 or 1"));
                return CxgbStatus::DataError;
            }
            Some(raw.iter().map(|&t| t as u8).collect())
        };
        let outcome = unsafe { std::slice::from_raw_parts(outcome, n_rows) }.to_vec();
        let opt = |p: *const f64| {
            if p.is_null() {
                None
            } else {
                Some(unsafe { std::slice::from_raw_parts(p, n_rows) }.to_vec())
            }
        };
        match Dataset::new(matrix, treatment, outcome, opt(mu0), opt(mu1)) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(CxgbDataset { inner })) };
                CxgbStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Load a dataset CSV (`x0..x{d-1},t,y[,mu0,mu1]`; empty or NA = missing).
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cxgb_dataset_read_csv(
    path: *const c_char,
    out: *mut *mut CxgbDataset,
) -> CxgbStatus {
    guarded(|| {
        if out.is_null() {
            set_last_error("out is null");
            return CxgbStatus::NullArgument;
        }
        let path = match unsafe { str_arg(path, "path") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        match read_csv(Path::new(path)) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(CxgbDataset { inner })) };
                CxgbStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Write a dataset in the CSV schema.
///
/// # Safety
/// `dataset` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cxgb_dataset_write_csv(
    dataset: *const CxgbDataset,
    path: *const c_char,
) -> CxgbStatus {
    guarded(|| {
        let Some(dataset) = (unsafe { dataset.as_ref() }) else {
            set_last_error("dataset is null");
            return CxgbStatus::NullArgument;
        };
        let path = match unsafe { str_arg(path, "path") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        match write_csv(&dataset.inner, Path::new(path)) {
            Ok(()) => CxgbStatus::Ok,
            Err(e) => fail(&e),
        }
    })
}

/// Number of rows; 0 for a null handle.
///
/// # Safety
/// `dataset` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cxgb_dataset_n_rows(dataset: *const CxgbDataset) -> usize {
    unsafe { dataset.as_ref() }.map_or(0, |d| d.inner.n_rows())
}

/// Number of feature columns; 0 for a null handle.
///
/// # Safety
/// `dataset` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cxgb_dataset_n_features(dataset: *const CxgbDataset) -> usize {
    unsafe { dataset.as_ref() }.map_or(0, |d| d.inner.n_features())
}

/// Release a dataset handle (null is a no-op).
///
/// # Safety
/// `dataset` must be null or an owned handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cxgb_dataset_free(dataset: *mut CxgbDataset) {
    if !dataset.is_null() {
        drop(unsafe { Box::from_raw(dataset) });
    }
}

#[derive(Deserialize)]
struct FitSpec {
    estimator: EstimatorKind,
    #[serde(default)]
    hessian_mode: HessianMode,
    #[serde(default)]
    train: TrainConfig,
}

/// Fit an estimator on a dataset.
///
/// `config_json` example:
/// `{"estimator": "cxgboost", "hessian_mode": "paper-literal",
///   "train": {"n_estimators": 100, "max_depth": 5}}`
/// Estimators: "cxgboost", "slearner", "tlearner". Omitted train fields take
/// their defaults.
///
/// # Safety
/// `dataset` must be a live handle; `config_json` a NUL-terminated string;
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cxgb_fit(
    dataset: *const CxgbDataset,
    config_json: *const c_char,
    out: *mut *mut CxgbModel,
) -> CxgbStatus {
    guarded(|| {
        if out.is_null() {
            set_last_error("out is null");
            return CxgbStatus::NullArgument;
        }
        let Some(dataset) = (unsafe { dataset.as_ref() }) else {
            set_last_error("dataset is null");
            return CxgbStatus::NullArgument;
        };
        let config = match unsafe { str_arg(config_json, "config_json") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        let spec: FitSpec = match serde_json::from_str(config) {
            Ok(spec) => spec,
            Err(e) => {
                set_last_error(&format!("invalid config JSON: {e}"));
                return CxgbStatus::ConfigError;
            }
        };
        if let Err(e) = spec.train.validate() {
            return fail(&e);
        }
        let fitted = match spec.estimator {
            EstimatorKind::Cxgboost => {
                fit_cxgboost(&dataset.inner, &spec.train, spec.hessian_mode)
                    .map(|f| EstimatorModel::Cxgboost(f.model))
            }
            EstimatorKind::Slearner => {
                fit_slearner(&dataset.inner, &spec.train).map(|f| EstimatorModel::Slearner(f.model))
            }
            EstimatorKind::Tlearner => {
                fit_tlearner(&dataset.inner, &spec.train).map(|f| EstimatorModel::Tlearner(f.model))
            }
        };
        match fitted {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(CxgbModel { inner })) };
                CxgbStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Estimator kind of a model as a static string ("cxgboost", "slearner",
/// "tlearner"), or null for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cxgb_model_kind(model: *const CxgbModel) -> *const c_char {
    match unsafe { model.as_ref() }.map(|m| m.inner.kind()) {
        Some(EstimatorKind::Cxgboost) => c"cxgboost".as_ptr(),
        Some(EstimatorKind::Slearner) => c"slearner".as_ptr(),
        Some(EstimatorKind::Tlearner) => c"tlearner".as_ptr(),
        None => ptr::null(),
    }
}

/// Predict both potential outcomes for a dense feature matrix.
///
/// `q0_out` and `q1_out` must each hold `n_rows` doubles.
///
/// # Safety
/// `model` must be a live handle and all buffers must have the stated sizes.
#[no_mangle]
pub unsafe extern "C" fn cxgb_predict_potential(
    model: *const CxgbModel,
    features: *const f64,
    n_rows: usize,
    n_features: usize,
    q0_out: *mut f64,
    q1_out: *mut f64,
) -> CxgbStatus {
    guarded(|| {
        let Some(model) = (unsafe { model.as_ref() }) else {
            set_last_error("model is null");
            return CxgbStatus::NullArgument;
        };
        if q0_out.is_null() || q1_out.is_null() {
            set_last_error("q0_out/q1_out is null");
            return CxgbStatus::NullArgument;
        }
        let matrix = match unsafe { matrix_arg(features, n_rows, n_features) } {
            Ok(m) => m,
            Err(status) => return status,
        };
        match model.inner.predict_potential(&matrix) {
            Ok((q0, q1)) => {
                unsafe {
                    ptr::copy_nonoverlapping(q0.as_ptr(), q0_out, n_rows);
                    ptr::copy_nonoverlapping(q1.as_ptr(), q1_out, n_rows);
                }
                CxgbStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Mean predicted individual effect over the rows.
///
/// # Safety
/// `model` must be a live handle; `features` as in
/// [`cxgb_predict_potential`]; `ate_out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cxgb_estimate_ate(
    model: *const CxgbModel,
    features: *const f64,
    n_rows: usize,
    n_features: usize,
    ate_out: *mut f64,
) -> CxgbStatus {
    guarded(|| {
        let Some(model) = (unsafe { model.as_ref() }) else {
            set_last_error("model is null");
            return CxgbStatus::NullArgument;
        };
        if ate_out.is_null() {
            set_last_error("ate_out is null");
            return CxgbStatus::NullArgument;
        }
        let matrix = match unsafe { matrix_arg(features, n_rows, n_features) } {
            Ok(m) => m,
            Err(status) => return status,
        };
        match model.inner.estimate_ate(&matrix) {
            Ok(ate) => {
                unsafe { *ate_out = ate };
                CxgbStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Save a model file (JSON with an estimator-kind header).
///
/// # Safety
/// `model` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cxgb_model_save(
    model: *const CxgbModel,
    path: *const c_char,
) -> CxgbStatus {
    guarded(|| {
        let Some(model) = (unsafe { model.as_ref() }) else {
            set_last_error("model is null");
            return CxgbStatus::NullArgument;
        };
        let path = match unsafe { str_arg(path, "path") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        match model.inner.save(Path::new(path)) {
            Ok(()) => CxgbStatus::Ok,
            Err(e) => fail(&e),
        }
    })
}

/// Load a model file written by [`cxgb_model_save`] (or the CLI).
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cxgb_model_load(
    path: *const c_char,
    out: *mut *mut CxgbModel,
) -> CxgbStatus {
    guarded(|| {
        if out.is_null() {
            set_last_error("out is null");
            return CxgbStatus::NullArgument;
        }
        let path = match unsafe { str_arg(path, "path") } {
            Ok(s) => s,
            Err(status) => return status,
        };
        match EstimatorModel::load(Path::new(path)) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(CxgbModel { inner })) };
                CxgbStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Release a model handle (null is a no-op).
///
/// # Safety
/// `model` must be null or an owned handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cxgb_model_free(model: *mut CxgbModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}
