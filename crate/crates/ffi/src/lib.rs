//! C interface to `qgauss`.
//!
//! Specs and cooked functionals are opaque heap handles released with their
//! `_free` functions. Every entry point returns a [`QgStatus`]; on failure the
//! message is available from [`qg_last_error_message`] on the same thread.
//! Strings returned through `char **` out-parameters are owned by the caller
//! and must be released with [`qg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qgauss::centrality::{central_check, character_moment_direct, CharacterPattern};
use qgauss::convolution::WordFunctional;
use qgauss::gaussian::{coboundary, cook, eval_eta, eval_phi, from_wh, to_wh, validate, CookedFunctional, GaussianSpec};
use qgauss::json::{checks_to, spec_from_str, to_canonical_string, wh_from_value, wh_to_value};
use qgauss::wordlang::parse;
use qgauss::words::{Element, DEFAULT_GUARD};
use qgauss::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QgStatus {
    Ok = 0,
    NullPointer = -1,
    InvalidUtf8 = -2,
    /// Malformed JSON, spec shape, expression or pattern.
    Parse = -3,
    /// Input rejected by a validity check.
    Validation = -4,
    /// Evaluation failed (foreign letter, guard limit, ...).
    Eval = -5,
    Panic = -6,
    /// Caller buffer shorter than the result.
    BufferTooSmall = -7,
}

/// Opaque Gaussian spec.
pub struct QgSpec(GaussianSpec);

/// Opaque cooked functional.
pub struct QgFunctional(CookedFunctional);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(QgStatus, String);

impl Fail {
    fn new(status: QgStatus, msg: impl ToString) -> Self {
        Fail(status, msg.to_string())
    }
}

type Res<T> = Result<T, Fail>;

/// Errors from input decoding.
fn parse_err(e: Error) -> Fail {
    Fail::new(QgStatus::Parse, e)
}

/// Errors from constructing or checking a spec.
fn validation_err(e: Error) -> Fail {
    match e {
        Error::Parse(_) | Error::Shape { .. } | Error::Invalid(_) => Fail::new(QgStatus::Parse, e),
        other => Fail::new(QgStatus::Validation, other),
    }
}

/// Errors from evaluation.
fn eval_err(e: Error) -> Fail {
    match e {
        Error::Parse(_) | Error::Invalid(_) => Fail::new(QgStatus::Parse, e),
        other => Fail::new(QgStatus::Eval, other),
    }
}

fn guard(body: impl FnOnce() -> Res<()>) -> QgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QgStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            QgStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(Fail::new(QgStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Fail::new(QgStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Res<&'a T> {
    p.as_ref().ok_or_else(|| Fail::new(QgStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Res<&'a mut T> {
    p.as_mut().ok_or_else(|| Fail::new(QgStatus::NullPointer, format!("{what} is null")))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior NULs removed").into_raw()
}

fn element(f: &CookedFunctional, expr: &str) -> Res<Element> {
    parse(expr, f.alphabet()).map_err(|e| parse_err(e.into()))
}

/// Parses a spec from JSON (the same format as the `--spec` CLI flag).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_spec` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_spec_from_json(json: *const c_char, out_spec: *mut *mut QgSpec) -> QgStatus {
    guard(|| {
        let slot = out(out_spec, "out_spec")?;
        *slot = ptr::null_mut();
        let spec = spec_from_str(text(json, "json")?).map_err(parse_err)?;
        *slot = Box::into_raw(Box::new(QgSpec(spec)));
        Ok(())
    })
}

/// Releases a spec. Null is ignored.
///
/// # Safety
/// `spec` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qg_spec_free(spec: *mut QgSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Runs the validity checks and writes the JSON report to `out_json`.
/// `out_passed` receives whether every check passed; the status is `Ok`
/// either way.
///
/// # Safety
/// Pointers must be valid; `out_json` must be released with `qg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn qg_spec_validate_json(
    spec: *const QgSpec,
    tol: f64,
    out_json: *mut *mut c_char,
    out_passed: *mut bool,
) -> QgStatus {
    guard(|| {
        let spec = handle(spec, "spec")?;
        let (json_slot, passed_slot) = (out(out_json, "out_json")?, out(out_passed, "out_passed")?);
        let report = validate(&spec.0, tol);
        let v = serde_json::json!({"valid": report.passed(), "checks": checks_to(&report.checks)});
        *passed_slot = report.passed();
        *json_slot = c_string(to_canonical_string(&v));
        Ok(())
    })
}

/// Validates and cooks a spec into an evaluable functional.
///
/// # Safety
/// `spec` must be a live handle; `out_functional` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qg_functional_cook(
    spec: *const QgSpec,
    tol: f64,
    out_functional: *mut *mut QgFunctional,
) -> QgStatus {
    guard(|| {
        let slot = out(out_functional, "out_functional")?;
        *slot = ptr::null_mut();
        let f = cook(&handle(spec, "spec")?.0, tol).map_err(validation_err)?;
        *slot = Box::into_raw(Box::new(QgFunctional(f)));
        Ok(())
    })
}

/// Releases a functional. Null is ignored.
///
/// # Safety
/// `f` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qg_functional_free(f: *mut QgFunctional) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Dimension of the cocycle range (number of Kraus generators).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qg_functional_dim(f: *const QgFunctional, out_dim: *mut usize) -> QgStatus {
    guard(|| {
        *out(out_dim, "out_dim")? = handle(f, "functional")?.0.dim();
        Ok(())
    })
}

/// `φ(expr)`.
///
/// # Safety
/// Pointers must be valid; `expr` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qg_eval_phi(
    f: *const QgFunctional,
    expr: *const c_char,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QgStatus {
    guard(|| {
        let f = &handle(f, "functional")?.0;
        let (re, im) = (out(out_re, "out_re")?, out(out_im, "out_im")?);
        let v = eval_phi(f, &element(f, text(expr, "expr")?)?).map_err(eval_err)?;
        (*re, *im) = (v.re, v.im);
        Ok(())
    })
}

/// `η(expr)` as interleaved `re, im` pairs. `out_len` always receives the
/// required number of doubles (`2 * dim`); if `buf_len` is smaller the call
/// returns `BufferTooSmall` and writes nothing to `buf`.
///
/// # Safety
/// `buf` must hold `buf_len` doubles (may be null when `buf_len` is 0).
#[no_mangle]
pub unsafe extern "C" fn qg_eval_eta(
    f: *const QgFunctional,
    expr: *const c_char,
    buf: *mut f64,
    buf_len: usize,
    out_len: *mut usize,
) -> QgStatus {
    guard(|| {
        let f = &handle(f, "functional")?.0;
        let len_slot = out(out_len, "out_len")?;
        let v = eval_eta(f, &element(f, text(expr, "expr")?)?).map_err(eval_err)?;
        *len_slot = 2 * v.len();
        if buf_len < 2 * v.len() {
            return Err(Fail::new(
                QgStatus::BufferTooSmall,
                format!("need {} doubles, got {buf_len}", 2 * v.len()),
            ));
        }
        if !v.is_empty() {
            let dst = std::slice::from_raw_parts_mut(out(buf, "buf")?, 2 * v.len());
            for (k, c) in v.iter().enumerate() {
                dst[2 * k] = c.re;
                dst[2 * k + 1] = c.im;
            }
        }
        Ok(())
    })
}

/// `φ(ab) − ε(a)φ(b) − φ(a)ε(b)`.
///
/// # Safety
/// Pointers must be valid; expressions NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qg_coboundary(
    f: *const QgFunctional,
    a: *const c_char,
    b: *const c_char,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QgStatus {
    guard(|| {
        let f = &handle(f, "functional")?.0;
        let (re, im) = (out(out_re, "out_re")?, out(out_im, "out_im")?);
        let (x, y) = (element(f, text(a, "a")?)?, element(f, text(b, "b")?)?);
        let v = coboundary(f, &x, &y).map_err(eval_err)?;
        (*re, *im) = (v.re, v.im);
        Ok(())
    })
}

/// The `(W, H)` form of a spec as JSON.
///
/// # Safety
/// Pointers must be valid; `out_json` must be released with `qg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn qg_spec_to_wh_json(spec: *const QgSpec, out_json: *mut *mut c_char) -> QgStatus {
    guard(|| {
        let spec = &handle(spec, "spec")?.0;
        let slot = out(out_json, "out_json")?;
        let (w, h) = to_wh(spec);
        *slot = c_string(to_canonical_string(&wh_to_value(spec.target, &w, &h)));
        Ok(())
    })
}

/// Rebuilds a spec from `(W, H)` JSON, extracting Kraus generators.
///
/// # Safety
/// `json` NUL-terminated; `out_spec` writable.
#[no_mangle]
pub unsafe extern "C" fn qg_spec_from_wh_json(json: *const c_char, tol: f64, out_spec: *mut *mut QgSpec) -> QgStatus {
    guard(|| {
        let slot = out(out_spec, "out_spec")?;
        *slot = ptr::null_mut();
        let v: serde_json::Value =
            serde_json::from_str(text(json, "json")?).map_err(|e| Fail::new(QgStatus::Parse, e))?;
        let (target, w, h) = wh_from_value(&v).map_err(parse_err)?;
        let spec = from_wh(&w, &h, target, tol).map_err(validation_err)?;
        *slot = Box::into_raw(Box::new(QgSpec(spec)));
        Ok(())
    })
}

/// Character moment `φ(χ_pattern)` by direct summation. `pattern` uses the
/// CLI notation, e.g. `"uu*u"`.
///
/// # Safety
/// Pointers must be valid; `pattern` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn qg_character_moment(
    f: *const QgFunctional,
    pattern: *const c_char,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QgStatus {
    guard(|| {
        let f = &handle(f, "functional")?.0;
        let (re, im) = (out(out_re, "out_re")?, out(out_im, "out_im")?);
        let p: CharacterPattern = text(pattern, "pattern")?.parse().map_err(parse_err)?;
        let v = character_moment_direct(f, &p, DEFAULT_GUARD).map_err(eval_err)?;
        (*re, *im) = (v.re, v.im);
        Ok(())
    })
}

/// Convolution-centrality test up to word length `cutoff`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qg_central_check(
    f: *const QgFunctional,
    cutoff: usize,
    tol: f64,
    out_central: *mut bool,
) -> QgStatus {
    guard(|| {
        let f = &handle(f, "functional")?.0;
        let slot = out(out_central, "out_central")?;
        let report =
            central_check(&WordFunctional::Gaussian(f), f.alphabet(), cutoff, tol, DEFAULT_GUARD).map_err(eval_err)?;
        *slot = report.central;
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn qg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn qg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
