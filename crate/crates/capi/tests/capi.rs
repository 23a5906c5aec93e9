//! Exercises the C ABI from Rust and from an actual C program compiled
//! against the generated header.

use std::ffi::{CStr, CString};
use std::ptr;

use cxgb_capi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cxgb_last_error()) }
        .to_string_lossy()
        .into_owned()
}

/// y = t exactly, x uninformative: ATE must come out near 1.
fn toy_arrays() -> (Vec<f64>, Vec<i32>, Vec<f64>) {
    let n = 40;
    let features: Vec<f64> = (0..n).map(|i| ((i * 17) % 11) as f64).collect();
    let treatment: Vec<i32> = (0..n).map(|i| i % 2).collect();
    let outcome: Vec<f64> = treatment.iter().map(|&t| t as f64).collect();
    (features, treatment, outcome)
}

#[test]
fn version_is_a_cstring() {
    let v = unsafe { CStr::from_ptr(cxgb_version()) };
    assert!(!v.to_str().unwrap().is_empty());
}

#[test]
fn fit_predict_save_load_round_trip() {
    let (features, treatment, outcome) = toy_arrays();
    let n = outcome.len();

    let mut ds: *mut CxgbDataset = ptr::null_mut();
    let status = unsafe {
        cxgb_dataset_new(
            features.as_ptr(),
            n,
            1,
            treatment.as_ptr(),
            outcome.as_ptr(),
            ptr::null(),
            ptr::null(),
            &mut ds,
        )
    };
    assert_eq!(status, CxgbStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { cxgb_dataset_n_rows(ds) }, n);
    assert_eq!(unsafe { cxgb_dataset_n_features(ds) }, 1);

    let config = c(r#"{"estimator": "cxgboost", "hessian_mode": "exact", "train": {"n_estimators": 50}}"#);
    let mut model: *mut CxgbModel = ptr::null_mut();
    let status = unsafe { cxgb_fit(ds, config.as_ptr(), &mut model) };
    assert_eq!(status, CxgbStatus::Ok, "{}", last_error());
    let kind = unsafe { CStr::from_ptr(cxgb_model_kind(model)) };
    assert_eq!(kind.to_str().unwrap(), "cxgboost");

    let mut q0 = vec![0.0; n];
    let mut q1 = vec![0.0; n];
    let status = unsafe {
        cxgb_predict_potential(model, features.as_ptr(), n, 1, q0.as_mut_ptr(), q1.as_mut_ptr())
    };
    assert_eq!(status, CxgbStatus::Ok, "{}", last_error());

    let mut ate = 0.0;
    let status = unsafe { cxgb_estimate_ate(model, features.as_ptr(), n, 1, &mut ate) };
    assert_eq!(status, CxgbStatus::Ok, "{}", last_error());
    assert!((ate - 1.0).abs() < 0.05, "ATE {ate}");

    // save / load and compare predictions bit for bit
    let dir = tempfile::tempdir().unwrap();
    let path = c(dir.path().join("model.json").to_str().unwrap());
    assert_eq!(unsafe { cxgb_model_save(model, path.as_ptr()) }, CxgbStatus::Ok);
    let mut loaded: *mut CxgbModel = ptr::null_mut();
    assert_eq!(
        unsafe { cxgb_model_load(path.as_ptr(), &mut loaded) },
        CxgbStatus::Ok
    );
    let mut q0b = vec![0.0; n];
    let mut q1b = vec![0.0; n];
    let status = unsafe {
        cxgb_predict_potential(loaded, features.as_ptr(), n, 1, q0b.as_mut_ptr(), q1b.as_mut_ptr())
    };
    assert_eq!(status, CxgbStatus::Ok);
    assert_eq!(q0, q0b);
    assert_eq!(q1, q1b);

    unsafe {
        cxgb_model_free(model);
        cxgb_model_free(loaded);
        cxgb_dataset_free(ds);
    }
}

#[test]
fn csv_round_trip_through_the_abi() {
    let (features, treatment, outcome) = toy_arrays();
    let n = outcome.len();
    let mut ds: *mut CxgbDataset = ptr::null_mut();
    let status = unsafe {
        cxgb_dataset_new(
            features.as_ptr(),
            n,
            1,
            treatment.as_ptr(),
            outcome.as_ptr(),
            ptr::null(),
            ptr::null(),
            &mut ds,
        )
    };
    assert_eq!(status, CxgbStatus::Ok);
    let dir = tempfile::tempdir().unwrap();
    let path = c(dir.path().join("ds.csv").to_str().unwrap());
    assert_eq!(
        unsafe { cxgb_dataset_write_csv(ds, path.as_ptr()) },
        CxgbStatus::Ok
    );
    let mut loaded: *mut CxgbDataset = ptr::null_mut();
    assert_eq!(
        unsafe { cxgb_dataset_read_csv(path.as_ptr(), &mut loaded) },
        CxgbStatus::Ok
    );
    assert_eq!(unsafe { cxgb_dataset_n_rows(loaded) }, n);
    unsafe {
        cxgb_dataset_free(ds);
        cxgb_dataset_free(loaded);
    }
}

#[test]
fn errors_set_status_and_message() {
    // null out-pointer
    let status = unsafe { cxgb_dataset_read_csv(c("x.csv").as_ptr(), ptr::null_mut()) };
    assert_eq!(status, CxgbStatus::NullArgument);

    // missing file
    let mut ds: *mut CxgbDataset = ptr::null_mut();
    let status = unsafe { cxgb_dataset_read_csv(c("/nonexistent.csv").as_ptr(), &mut ds) };
    assert_eq!(status, CxgbStatus::IoError);
    assert!(last_error().contains("nonexistent"));

    // domain violation: treatment = 2
    let features = [1.0, 2.0];
    let treatment = [0i32, 2];
    let outcome = [0.0, 1.0];
    let status = unsafe {
        cxgb_dataset_new(
            features.as_ptr(),
            2,
            1,
            treatment.as_ptr(),
            outcome.as_ptr(),
            ptr::null(),
            ptr::null(),
            &mut ds,
        )
    };
    assert_eq!(status, CxgbStatus::DataError);
    assert!(last_error().contains("0 or 1"), "{}", last_error());

    // bad config JSON
    let (f, t, y) = toy_arrays();
    let mut ds: *mut CxgbDataset = ptr::null_mut();
    unsafe {
        cxgb_dataset_new(
            f.as_ptr(),
            y.len(),
            1,
            t.as_ptr(),
            y.as_ptr(),
            ptr::null(),
            ptr::null(),
            &mut ds,
        )
    };
    let mut model: *mut CxgbModel = ptr::null_mut();
    let status = unsafe { cxgb_fit(ds, c("{\"estimator\": \"nope\"}").as_ptr(), &mut model) };
    assert_eq!(status, CxgbStatus::ConfigError);

    // invalid hyperparameters
    let status = unsafe {
        cxgb_fit(
            ds,
            c(r#"{"estimator": "cxgboost", "train": {"n_estimators": 0}}"#).as_ptr(),
            &mut model,
        )
    };
    assert_eq!(status, CxgbStatus::ConfigError);
    unsafe { cxgb_dataset_free(ds) };
}

/// Compile and run a C client against the generated header and cdylib.
#[test]
fn c_client_builds_and_runs() {
    let manifest = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let include_dir = manifest.join("include");
    assert!(include_dir.join("cxgb.h").exists(), "header not generated");

    // target/<profile>/ holds the cdylib two levels above the test binary
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap().to_path_buf();
    let dylib = profile_dir.join("libcxgb_capi.so");
    assert!(dylib.exists(), "cdylib not built at {}", dylib.display());

    let dir = tempfile::tempdir().unwrap();
    let c_src = dir.path().join("client.c");
    std::fs::write(
        &c_src,
        r#"
#include <cxgb.h>
#include <math.h>
#include <stdio.h>

int main(void) {
    enum { N = 30 };
    double features[N];
    int32_t treatment[N];
    double outcome[N];
    for (int i = 0; i < N; i++) {
        features[i] = (double)((i * 13) % 7);
        treatment[i] = i % 2;
        outcome[i] = (double)(i % 2);
    }
    features[3] = NAN; /* missing cell */

    CxgbDataset *ds = NULL;
    if (cxgb_dataset_new(features, N, 1, treatment, outcome, NULL, NULL, &ds) != CXGB_STATUS_OK) {
        fprintf(stderr, "dataset: %s\n", cxgb_last_error());
        return 1;
    }
    CxgbModel *model = NULL;
    const char *cfg = "{\"estimator\": \"cxgboost\", \"hessian_mode\": \"exact\","
                      " \"train\": {\"n_estimators\": 40}}";
    if (cxgb_fit(ds, cfg, &model) != CXGB_STATUS_OK) {
        fprintf(stderr, "fit: %s\n", cxgb_last_error());
        return 1;
    }
    double ate = 0.0;
    if (cxgb_estimate_ate(model, features, N, 1, &ate) != CXGB_STATUS_OK) {
        fprintf(stderr, "ate: %s\n", cxgb_last_error());
        return 1;
    }
    printf("version=%s kind=%s ate=%.3f\n", cxgb_version(), cxgb_model_kind(model), ate);
    cxgb_model_free(model);
    cxgb_dataset_free(ds);
    return fabs(ate - 1.0) < 0.05 ? 0 : 2;
}
"#,
    )
    .unwrap();

    let binary = dir.path().join("client");
    let compile = std::process::Command::new("cc")
        .arg(&c_src)
        .arg("-o")
        .arg(&binary)
        .arg(format!("-I{}", include_dir.display()))
        .arg(format!("-L{}", profile_dir.display()))
        .arg("-lcxgb_capi")
        .arg("-lm")
        .output()
        .expect("cc not available");
    assert!(
        compile.status.success(),
        "cc failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = std::process::Command::new(&binary)
        .env("LD_LIBRARY_PATH", &profile_dir)
        .output()
        .unwrap();
    assert!(
        run.status.success(),
        "client exited {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stderr)
    );
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("kind=cxgboost"), "stdout: {stdout}");
}
