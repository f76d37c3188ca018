use std::ffi::{CStr, CString};
use std::ptr;

use stringnet_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(sn_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn single_line_paths_round_trip_through_entries() {
    let mut w = ptr::null_mut();
    assert_eq!(unsafe { sn_path_single_line(c("set-frac").as_ptr(), 0, 0.3, &mut w) }, SnStatus::Ok);
    let n = unsafe { sn_single_line_modulus(w) };
    assert_eq!(n, 4);
    let len = n.pow(4);
    let (mut re, mut im) = (vec![0.0; len], vec![0.0; len]);
    assert_eq!(unsafe { sn_single_line_entries(w, re.as_mut_ptr(), im.as_mut_ptr(), len) }, SnStatus::Ok);
    assert_eq!(unsafe { sn_single_line_entries(w, re.as_mut_ptr(), im.as_mut_ptr(), len - 1) }, SnStatus::Dimension);

    let mut copy = ptr::null_mut();
    assert_eq!(unsafe { sn_single_line_from_entries(n, re.as_ptr(), im.as_ptr(), len, &mut copy) }, SnStatus::Ok);
    let mut residual = 1.0;
    assert_eq!(unsafe { sn_single_line_isometry_residual(copy, &mut residual) }, SnStatus::Ok);
    assert!(residual < 1e-12);
    unsafe {
        sn_single_line_free(copy);
        sn_single_line_free(w);
    }
}

#[test]
fn double_line_paths_reduce_to_rules() {
    let mut flag = false;
    assert_eq!(unsafe { sn_path_is_double_line(c("tc-ds").as_ptr(), &mut flag) }, SnStatus::Ok);
    assert!(flag);
    let mut single = ptr::null_mut();
    assert_eq!(unsafe { sn_path_single_line(c("tc-ds").as_ptr(), 0, 0.5, &mut single) }, SnStatus::InvalidArgument);

    let mut a = ptr::null_mut();
    assert_eq!(unsafe { sn_path_double_line(c("tc-ds").as_ptr(), 0.5, &mut a) }, SnStatus::Ok);
    let len = unsafe { sn_double_line_len(a) };
    assert_eq!(len, 2usize.pow(4));
    let mut residual = 1.0;
    assert_eq!(unsafe { sn_double_line_isometry_residual(a, &mut residual) }, SnStatus::Ok);
    assert!(residual < 1e-12);

    let mut w = ptr::null_mut();
    assert_eq!(unsafe { sn_double_line_reduce(a, &mut w) }, SnStatus::Ok);
    let mut rule = ptr::null_mut();
    assert_eq!(unsafe { sn_rule_from_single_line(w, &mut rule) }, SnStatus::Ok);
    let (mut eta, mut xi) = (0.0, 0.0);
    assert_eq!(unsafe { sn_correlation_length(rule, 4, SnSolveMode::Dense, &mut eta, &mut xi) }, SnStatus::Ok);
    assert!(eta > 0.0 && eta < 1.0 && xi > 0.0);
    assert!((xi + 1.0 / eta.ln()).abs() < 1e-12);
    unsafe {
        sn_rule_free(rule);
        sn_single_line_free(w);
        sn_double_line_free(a);
    }
}

#[test]
fn fixed_point_spectrum_is_reported_as_json() {
    let mut rule = ptr::null_mut();
    assert_eq!(unsafe { sn_rule_named(c("TC4").as_ptr(), &mut rule) }, SnStatus::Ok);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { sn_transfer_spectrum_json(rule, 4, SnSolveMode::Auto, &mut json) }, SnStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["xi"], 0.0);
    assert_eq!(value["ring_width"], 4);
    unsafe {
        sn_string_free(json);
        sn_rule_free(rule);
    }
}

#[test]
fn correlator_and_fit_follow_the_library() {
    let mut rule = ptr::null_mut();
    assert_eq!(unsafe { sn_rule_named(c("WQ").as_ptr(), &mut rule) }, SnStatus::Ok);
    let spec = SnCorrelatorSpec { k: 3, width: 128, r_max: 32, t0: 0, samples: 20_000, seed: 4, corner: false };
    let n = spec.r_max;
    let (mut re, mut im, mut se) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let run = |re: &mut [f64], im: &mut [f64], se: &mut [f64]| unsafe {
        sn_time_correlator(rule, spec, re.as_mut_ptr(), im.as_mut_ptr(), se.as_mut_ptr(), n)
    };
    assert_eq!(run(&mut re, &mut im, &mut se), SnStatus::Ok);
    let (mut re2, mut im2, mut se2) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    assert_eq!(run(&mut re2, &mut im2, &mut se2), SnStatus::Ok);
    assert_eq!((&re, &im), (&re2, &im2));
    assert!(se.iter().all(|&s| s > 0.0));

    let (mut alpha, mut err) = (0.0, 0.0);
    let status = unsafe { sn_fit_power_law(re.as_ptr(), im.as_ptr(), se.as_ptr(), n, 2, 16, &mut alpha, &mut err) };
    assert_eq!(status, SnStatus::Ok, "{}", last_error());
    assert!(alpha < 0.0 && err > 0.0);

    let zeros = vec![0.0; n];
    let status = unsafe { sn_fit_power_law(zeros.as_ptr(), zeros.as_ptr(), se.as_ptr(), n, 0, 0, &mut alpha, &mut err) };
    assert_eq!(status, SnStatus::InsufficientData);
    assert!(last_error().contains("significant"));
    unsafe { sn_rule_free(rule) };
}

#[test]
fn json_configs_run_experiments() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("validate.csv");
    let config = format!(r#"{{"experiment":"validate","path":"z22-z4-seg2","grid_points":11,"output":{:?}}}"#, out.to_str().unwrap());
    let mut rows = 0;
    assert_eq!(unsafe { sn_run_experiment_json(c(&config).as_ptr(), &mut rows) }, SnStatus::Ok, "{}", last_error());
    assert!(rows > 0);
    assert!(out.exists());
    assert_eq!(unsafe { sn_run_experiment_json(c(r#"{"experiment":"fit","bogus":1}"#).as_ptr(), ptr::null_mut()) }, SnStatus::Schema);
    assert!(last_error().contains("bogus"));
}

#[test]
fn handles_tolerate_null() {
    unsafe {
        sn_single_line_free(ptr::null_mut());
        sn_double_line_free(ptr::null_mut());
        sn_rule_free(ptr::null_mut());
        sn_string_free(ptr::null_mut());
        assert_eq!(sn_single_line_modulus(ptr::null()), 0);
    }
    let mut r = 0.0;
    assert_eq!(unsafe { sn_single_line_isometry_residual(ptr::null(), &mut r) }, SnStatus::NullPointer);
    let v = unsafe { CStr::from_ptr(sn_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
