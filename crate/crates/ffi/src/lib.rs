//! C ABI over the oscillometer library.
//!
//! Every entry point returns an [`OscStatus`]; results go through out
//! pointers. On failure the message is kept per thread and read back with
//! [`osc_last_error_message`]. Handles are opaque and owned by the caller,
//! who releases them with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use oscillometer::approx::{assumption_check, ApproxFamily, FamilySpec, Verdict};
use oscillometer::cli::FunctionSpec;
use oscillometer::distance::{distance_estimate, sandwich_check_with_slack, SANDWICH_SLACK};
use oscillometer::family::seminorm_sup;
use oscillometer::funcrep::{FunctionData, PeriodicSamples, TaylorFunction};
use oscillometer::spaces::{build_family_for, SpaceDescriptor};
use oscillometer::Error;

use num_complex::Complex64;

/// Status codes; 2 and 3 agree with the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OscStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidConfig = 2,
    Numerical = 3,
    CheckFailed = 4,
    Utf8 = 5,
    Panic = 6,
}

/// A validated space descriptor.
pub struct OscSpace {
    inner: SpaceDescriptor,
}

/// A function in any of the library's representations.
pub struct OscFunction {
    inner: FunctionData,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(OscStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.exit_code() == 3 {
            OscStatus::Numerical
        } else {
            OscStatus::InvalidConfig
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(OscStatus::NullPointer, format!("{what} is null"))
}

/// Run `body`, turning errors and panics into a status and a stored message.
fn guard(body: impl FnOnce() -> Result<OscStatus, Failure>) -> OscStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, msg))) => {
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
            OscStatus::Panic
        }
    }
}

/// # Safety
/// `p` is null or a NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(OscStatus::Utf8, format!("{what}: {e}")))
}

/// # Safety
/// `p` is null or points to a live value of `T`.
unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn json_error(what: &str, e: serde_json::Error) -> Failure {
    Failure(OscStatus::InvalidConfig, format!("{what}: {e}"))
}

fn to_c_string(text: String) -> Result<*mut c_char, Failure> {
    CString::new(text)
        .map(CString::into_raw)
        .map_err(|_| Failure(OscStatus::Panic, "report contains NUL".into()))
}

/// # Safety
/// `re` and `im` are null (only when `len` is 0) or hold `len` doubles; a
/// null `im` means zero imaginary parts.
unsafe fn complex_slice(re: *const f64, im: *const f64, len: usize) -> Result<Vec<Complex64>, Failure> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if re.is_null() {
        return Err(null("re"));
    }
    let re = std::slice::from_raw_parts(re, len);
    let im = if im.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(im, len))
    };
    Ok((0..len)
        .map(|k| Complex64::new(re[k], im.map_or(0.0, |v| v[k])))
        .collect())
}

/// NUL-terminated message of the last failed call on this thread, or null.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn osc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn osc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse a space descriptor such as `{"space": "bloch"}`.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn osc_space_from_json(json: *const c_char, out: *mut *mut OscSpace) -> OscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let inner: SpaceDescriptor = serde_json::from_str(text).map_err(|e| json_error("space", e))?;
        inner.validate()?;
        *out = Box::into_raw(Box::new(OscSpace { inner }));
        Ok(OscStatus::Ok)
    })
}

/// # Safety
/// `space` is null or came from [`osc_space_from_json`] and is not used again.
#[no_mangle]
pub unsafe extern "C" fn osc_space_free(space: *mut OscSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Build a function from the JSON function spec used by the command line
/// (`builtin`, `taylor` or `samples`); `file` paths resolve against the
/// working directory. Builtin sizes follow `space`.
///
/// # Safety
/// `space` is a live handle, `json` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn osc_function_from_json(
    space: *const OscSpace,
    json: *const c_char,
    out: *mut *mut OscFunction,
) -> OscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let space = deref(space, "space")?;
        let text = read_str(json, "json")?;
        let spec: FunctionSpec = serde_json::from_str(text).map_err(|e| json_error("function", e))?;
        let inner = spec.load(&space.inner, Path::new("."))?;
        *out = Box::into_raw(Box::new(OscFunction { inner }));
        Ok(OscStatus::Ok)
    })
}

/// Equispaced circle samples `f(2πj/len)`; `im` may be null.
///
/// # Safety
/// `re` (and `im` unless null) hold `len` doubles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn osc_function_from_circle_samples(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut OscFunction,
) -> OscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let values = complex_slice(re, im, len)?;
        let inner = FunctionData::Periodic(PeriodicSamples::new(values)?);
        *out = Box::into_raw(Box::new(OscFunction { inner }));
        Ok(OscStatus::Ok)
    })
}

/// The polynomial `Σ c_k z^k`, `k < len`; `im` may be null.
///
/// # Safety
/// `re` (and `im` unless null) hold `len` doubles; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn osc_function_from_taylor(
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut OscFunction,
) -> OscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let coeffs = complex_slice(re, im, len)?;
        let inner = FunctionData::Taylor(TaylorFunction::polynomial(coeffs));
        *out = Box::into_raw(Box::new(OscFunction { inner }));
        Ok(OscStatus::Ok)
    })
}

/// # Safety
/// `f` is null or came from an `osc_function_*` constructor and is not used
/// again.
#[no_mangle]
pub unsafe extern "C" fn osc_function_free(f: *mut OscFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Grid seminorm `sup ‖Lf‖` on the space's default family.
///
/// # Safety
/// Handles are live; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn osc_seminorm(space: *const OscSpace, f: *const OscFunction, out: *mut f64) -> OscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let (space, f) = (deref(space, "space")?, deref(f, "function")?);
        let grid = build_family_for(&space.inner, &f.inner)?;
        *out = seminorm_sup(&grid, &f.inner)?.value;
        Ok(OscStatus::Ok)
    })
}

/// Tail estimate of the distance to the little space, with its uncertainty.
///
/// # Safety
/// Handles are live; `estimate` is writable; `uncertainty` is null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn osc_distance(
    space: *const OscSpace,
    f: *const OscFunction,
    estimate: *mut f64,
    uncertainty: *mut f64,
) -> OscStatus {
    guard(|| {
        if estimate.is_null() {
            return Err(null("estimate"));
        }
        let (space, f) = (deref(space, "space")?, deref(f, "function")?);
        let d = distance_estimate(&space.inner, &f.inner)?;
        *estimate = d.estimate;
        if !uncertainty.is_null() {
            *uncertainty = d.uncertainty;
        }
        Ok(OscStatus::Ok)
    })
}

/// Full distance report as JSON. `family_json` is null or an approximant
/// family such as `{"kind": "dilation", "ladder": {"type": "dyadic_r",
/// "levels": 8}}`; a non-positive `slack` selects the default. Returns
/// `CHECK_FAILED`, still filling `out_json`, when the lower-bound check fails.
/// Release `out_json` with [`osc_string_free`].
///
/// # Safety
/// Handles are live; `family_json` is null or NUL-terminated; `out_json` is
/// writable.
#[no_mangle]
pub unsafe extern "C" fn osc_distance_report_json(
    space: *const OscSpace,
    f: *const OscFunction,
    family_json: *const c_char,
    slack: f64,
    out_json: *mut *mut c_char,
) -> OscStatus {
    guard(|| {
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let (space, f) = (deref(space, "space")?, deref(f, "function")?);
        let approximants = if family_json.is_null() {
            Vec::new()
        } else {
            let spec = parse_family(read_str(family_json, "family_json")?)?;
            let fam = ApproxFamily::generate(&spec, &f.inner)?;
            fam.ids().into_iter().zip(fam.members).collect()
        };
        let slack = if slack > 0.0 { slack } else { SANDWICH_SLACK };
        let report = sandwich_check_with_slack(&space.inner, &f.inner, &approximants, slack)?;
        let text = serde_json::to_string(&report).map_err(|e| json_error("report", e))?;
        *out_json = to_c_string(text)?;
        Ok(if report.sandwich_ok {
            OscStatus::Ok
        } else {
            OscStatus::CheckFailed
        })
    })
}

/// Approximation-assumption report as JSON for the family in `family_json`.
/// Returns `CHECK_FAILED`, still filling `out_json`, when the verdict is a
/// failure. Release `out_json` with [`osc_string_free`].
///
/// # Safety
/// Handles are live; `family_json` is NUL-terminated; `out_json` is writable.
#[no_mangle]
pub unsafe extern "C" fn osc_assumption_check_json(
    space: *const OscSpace,
    f: *const OscFunction,
    family_json: *const c_char,
    slack: f64,
    out_json: *mut *mut c_char,
) -> OscStatus {
    guard(|| {
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let (space, f) = (deref(space, "space")?, deref(f, "function")?);
        let spec = parse_family(read_str(family_json, "family_json")?)?;
        let fam = ApproxFamily::generate(&spec, &f.inner)?;
        let slack = if slack > 0.0 { slack } else { SANDWICH_SLACK };
        let report = assumption_check(&space.inner, &f.inner, &fam, slack)?;
        let text = serde_json::to_string(&report).map_err(|e| json_error("report", e))?;
        *out_json = to_c_string(text)?;
        Ok(if report.verdict == Verdict::Pass {
            OscStatus::Ok
        } else {
            OscStatus::CheckFailed
        })
    })
}

fn parse_family(text: &str) -> Result<FamilySpec, Failure> {
    serde_json::from_str(text).map_err(|e| json_error("family", e))
}

/// # Safety
/// `s` is null or a string returned by this library, not freed before.
#[no_mangle]
pub unsafe extern "C" fn osc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
