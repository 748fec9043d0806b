use std::ffi::{c_char, CStr, CString};
use std::ptr;

use qgauss_ffi::*;

const RUNNING: &str = r#"{"target": "o_plus", "n": 2, "L": [[[0, 1], [-1, 0]]], "H": [[0, 0], [0, 0]]}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = qg_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take_string(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_string_lossy().into_owned();
    qg_string_free(p);
    s
}

unsafe fn running() -> (*mut QgSpec, *mut QgFunctional) {
    let mut spec = ptr::null_mut();
    assert_eq!(qg_spec_from_json(c(RUNNING).as_ptr(), &mut spec), QgStatus::Ok);
    let mut f = ptr::null_mut();
    assert_eq!(qg_functional_cook(spec, 1e-9, &mut f), QgStatus::Ok);
    (spec, f)
}

#[test]
fn evaluates_running_spec() {
    unsafe {
        let (spec, f) = running();
        let (mut re, mut im) = (f64::NAN, f64::NAN);
        assert_eq!(qg_eval_phi(f, c("u(1,1) u(2,2)").as_ptr(), &mut re, &mut im), QgStatus::Ok);
        assert_eq!((re, im), (-1.0, 0.0));

        let mut dim = 0;
        assert_eq!(qg_functional_dim(f, &mut dim), QgStatus::Ok);
        assert_eq!(dim, 1);

        assert_eq!(qg_character_moment(f, c("uu").as_ptr(), &mut re, &mut im), QgStatus::Ok);
        assert_eq!((re, im), (-4.0, 0.0));
        assert_eq!(qg_character_moment(f, c("uuu").as_ptr(), &mut re, &mut im), QgStatus::Ok);
        assert_eq!((re, im), (-12.0, 0.0));

        let mut central = true;
        assert_eq!(qg_central_check(f, 2, 1e-9, &mut central), QgStatus::Ok);
        assert!(!central);

        qg_functional_free(f);
        qg_spec_free(spec);
    }
}

#[test]
fn eta_buffer_protocol() {
    unsafe {
        let (spec, f) = running();
        let expr = c("u(1,2)");
        let mut len = 0;
        assert_eq!(qg_eval_eta(f, expr.as_ptr(), ptr::null_mut(), 0, &mut len), QgStatus::BufferTooSmall);
        assert_eq!(len, 2);
        let mut buf = vec![0.0; len];
        assert_eq!(qg_eval_eta(f, expr.as_ptr(), buf.as_mut_ptr(), buf.len(), &mut len), QgStatus::Ok);
        assert_eq!(buf, vec![1.0, 0.0]);

        // Pair identity on one example: ∂φ(u(1,2)*, u(1,2)) = |η(u(1,2))|².
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(qg_coboundary(f, c("u*(1,2)").as_ptr(), expr.as_ptr(), &mut re, &mut im), QgStatus::Ok);
        assert!((re - 1.0).abs() < 1e-12 && im.abs() < 1e-12);
        qg_functional_free(f);
        qg_spec_free(spec);
    }
}

#[test]
fn validation_report_and_rejection() {
    unsafe {
        let bad = r#"{"target": "o_plus", "n": 2, "L": [[[1, 0], [0, 1]]], "H": [[0, 0], [0, 0]]}"#;
        let mut spec = ptr::null_mut();
        assert_eq!(qg_spec_from_json(c(bad).as_ptr(), &mut spec), QgStatus::Ok);
        let (mut json, mut passed) = (ptr::null_mut(), true);
        assert_eq!(qg_spec_validate_json(spec, 1e-9, &mut json, &mut passed), QgStatus::Ok);
        assert!(!passed);
        let report: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(report["valid"], false);

        let mut f = ptr::null_mut();
        assert_eq!(qg_functional_cook(spec, 1e-9, &mut f), QgStatus::Validation);
        assert!(f.is_null());
        assert!(!last_error().is_empty());
        qg_spec_free(spec);
    }
}

#[test]
fn wh_round_trip() {
    unsafe {
        let (spec, f) = running();
        let mut json = ptr::null_mut();
        assert_eq!(qg_spec_to_wh_json(spec, &mut json), QgStatus::Ok);
        let text = c(&take_string(json));
        let mut back = ptr::null_mut();
        assert_eq!(qg_spec_from_wh_json(text.as_ptr(), 1e-9, &mut back), QgStatus::Ok);
        let mut g = ptr::null_mut();
        assert_eq!(qg_functional_cook(back, 1e-9, &mut g), QgStatus::Ok);
        for expr in ["u(1,1) u(2,2)", "u(1,2) u(2,1)", "u*(1,2) u(1,2) u(2,2)"] {
            let e = c(expr);
            let (mut a, mut b, mut x, mut y) = (0.0, 0.0, 0.0, 0.0);
            qg_eval_phi(f, e.as_ptr(), &mut a, &mut b);
            qg_eval_phi(g, e.as_ptr(), &mut x, &mut y);
            assert!((a - x).abs() < 1e-10 && (b - y).abs() < 1e-10, "{expr}");
        }
        qg_functional_free(g);
        qg_functional_free(f);
        qg_spec_free(back);
        qg_spec_free(spec);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut spec = ptr::null_mut();
        assert_eq!(qg_spec_from_json(ptr::null(), &mut spec), QgStatus::NullPointer);
        assert_eq!(qg_spec_from_json(c("{not json").as_ptr(), &mut spec), QgStatus::Parse);
        assert!(spec.is_null());
        let invalid = [0xffu8, 0];
        assert_eq!(qg_spec_from_json(invalid.as_ptr().cast(), &mut spec), QgStatus::InvalidUtf8);

        let (s, f) = running();
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(qg_eval_phi(f, c("u(3,1)").as_ptr(), &mut re, &mut im), QgStatus::Parse);
        assert!(last_error().contains("position"));
        assert_eq!(qg_eval_phi(f, c("g(1)").as_ptr(), &mut re, &mut im), QgStatus::Parse);
        assert_eq!(qg_character_moment(f, c("x").as_ptr(), &mut re, &mut im), QgStatus::Parse);
        assert_eq!(qg_eval_phi(ptr::null(), c("1").as_ptr(), &mut re, &mut im), QgStatus::NullPointer);
        assert_eq!(qg_eval_phi(f, c("1").as_ptr(), &mut re, &mut im), QgStatus::Ok);
        assert!(qg_last_error_message().is_null());
        qg_functional_free(f);
        qg_spec_free(s);

        qg_spec_free(ptr::null_mut());
        qg_functional_free(ptr::null_mut());
        qg_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(qg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_current_and_compiles() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/qgauss.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in ["qg_spec_from_json", "qg_eval_phi", "qg_central_check", "QG_STATUS_PANIC"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    // Syntax check only when a C compiler is on PATH.
    let Ok(status) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .status()
    else {
        return;
    };
    assert!(status.success());
}
