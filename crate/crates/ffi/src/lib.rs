//! C ABI for the `rkt` library.
//!
//! Conventions:
//!
//! * Instances and formats are opaque handles created and destroyed by
//!   this API; never free them with `free(3)`.
//! * Every fallible call returns an [`RktStatus`]; on failure the
//!   thread-local message from [`rkt_last_error_message`] describes it.
//! * Strings returned through `out` parameters are owned by the caller
//!   and must be released with [`rkt_string_free`]. Report strings are
//!   the same JSON documents the CLI prints.
//! * Probabilities written to caller buffers are `double`
//!   approximations in the caller's input order; for exact values use
//!   the JSON reports, which carry `numerator/denominator` strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rkt::exact::{Engine, DEFAULT_GUARD, HARD_LIMIT};
use rkt::format::Format;
use rkt::rational::to_f64;
use rkt::values::PlayerValues;
use rkt::Error;

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RktStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An input string was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The instance document could not be parsed.
    ParseError = 3,
    /// Invalid format, player index, or other domain error.
    InvalidInput = 4,
    /// A size guard would be exceeded; pass `force` or use estimation.
    GuardExceeded = 5,
    /// An internal invariant failed.
    InternalError = 6,
}

/// Opaque handle: a parsed, canonically sorted instance.
pub struct RktInstance {
    values: PlayerValues,
}

/// Opaque handle: a validated tournament format.
pub struct RktFormat {
    format: Format,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> RktStatus {
    match err {
        Error::BadValue { .. } | Error::BadInstance(_) | Error::TooFewPlayers { .. } => {
            RktStatus::ParseError
        }
        Error::GuardExceeded { .. } => RktStatus::GuardExceeded,
        _ => RktStatus::InvalidInput,
    }
}

fn fail(err: &Error) -> RktStatus {
    set_error(&err.to_string());
    status_of(err)
}

/// Run a fallible body behind a panic guard.
fn guarded(body: impl FnOnce() -> RktStatus) -> RktStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            RktStatus::InternalError
        }
    }
}

unsafe fn read_utf8<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, RktStatus> {
    if ptr.is_null() {
        set_error(&format!("{what} is null"));
        return Err(RktStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(&format!("{what} is not valid UTF-8"));
        RktStatus::InvalidUtf8
    })
}

fn give_string(out: *mut *mut c_char, text: String) -> RktStatus {
    let c = match CString::new(text) {
        Ok(c) => c,
        Err(_) => {
            set_error("output contained an interior NUL byte");
            return RktStatus::InternalError;
        }
    };
    unsafe { *out = c.into_raw() };
    RktStatus::Ok
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn rkt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn rkt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Release a string returned through an `out` parameter.
///
/// # Safety
/// `s` must have been produced by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn rkt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a JSON instance document `{"values": ["6", "1/100", ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn rkt_instance_from_json(
    json: *const c_char,
    out: *mut *mut RktInstance,
) -> RktStatus {
    if out.is_null() {
        set_error("out is null");
        return RktStatus::NullPointer;
    }
    let text = match read_utf8(json, "json") {
        Ok(t) => t,
        Err(status) => return status,
    };
    guarded(|| match PlayerValues::parse_instance(text) {
        Ok(values) => {
            *out = Box::into_raw(Box::new(RktInstance { values }));
            RktStatus::Ok
        }
        Err(err) => fail(&err),
    })
}

/// Number of players, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rkt_instance_player_count(instance: *const RktInstance) -> u32 {
    if instance.is_null() {
        return 0;
    }
    (*instance).values.n() as u32
}

/// # Safety
/// `instance` must come from [`rkt_instance_from_json`], freed once.
#[no_mangle]
pub unsafe extern "C" fn rkt_instance_free(instance: *mut RktInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Build a format for `n` players from `"balanced"`, `"sequential"`, or
/// comma-separated match counts like `"2,2,1"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rkt_format_parse(
    n: u32,
    spec: *const c_char,
    out: *mut *mut RktFormat,
) -> RktStatus {
    if out.is_null() {
        set_error("out is null");
        return RktStatus::NullPointer;
    }
    let text = match read_utf8(spec, "spec") {
        Ok(t) => t,
        Err(status) => return status,
    };
    guarded(|| match Format::parse_spec(n as usize, text) {
        Ok(format) => {
            *out = Box::into_raw(Box::new(RktFormat { format }));
            RktStatus::Ok
        }
        Err(err) => fail(&err),
    })
}

/// Number of rounds, or 0 for a null handle.
///
/// # Safety
/// `format` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rkt_format_round_count(format: *const RktFormat) -> u32 {
    if format.is_null() {
        return 0;
    }
    (*format).format.num_rounds() as u32
}

/// Render the match counts as `"2,2,1"`; free with [`rkt_string_free`].
///
/// # Safety
/// `format` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn rkt_format_to_string(
    format: *const RktFormat,
    out: *mut *mut c_char,
) -> RktStatus {
    if format.is_null() || out.is_null() {
        set_error("format or out is null");
        return RktStatus::NullPointer;
    }
    give_string(out, (*format).format.to_string())
}

/// # Safety
/// `format` must come from [`rkt_format_parse`], freed once.
#[no_mangle]
pub unsafe extern "C" fn rkt_format_free(format: *mut RktFormat) {
    if !format.is_null() {
        drop(Box::from_raw(format));
    }
}

unsafe fn handles<'a>(
    instance: *const RktInstance,
    format: *const RktFormat,
) -> Result<(&'a PlayerValues, &'a Format), RktStatus> {
    if instance.is_null() || format.is_null() {
        set_error("instance or format is null");
        return Err(RktStatus::NullPointer);
    }
    Ok((&(*instance).values, &(*format).format))
}

fn engine_guard(force: bool) -> usize {
    if force {
        HARD_LIMIT
    } else {
        DEFAULT_GUARD
    }
}

/// Exact win probabilities as doubles, written to `out_probs` in the
/// caller's input order. `len` must equal the player count.
///
/// # Safety
/// `out_probs` must point to `len` writable doubles; the handles must be
/// live.
#[no_mangle]
pub unsafe extern "C" fn rkt_win_probabilities(
    instance: *const RktInstance,
    format: *const RktFormat,
    force: bool,
    out_probs: *mut f64,
    len: usize,
) -> RktStatus {
    let (values, format) = match handles(instance, format) {
        Ok(pair) => pair,
        Err(status) => return status,
    };
    if out_probs.is_null() {
        set_error("out_probs is null");
        return RktStatus::NullPointer;
    }
    if len != values.n() {
        set_error(&format!(
            "out_probs has length {len} but the instance has {} players",
            values.n()
        ));
        return RktStatus::InvalidInput;
    }
    guarded(|| {
        let engine = match Engine::with_guard(values, format, engine_guard(force)) {
            Ok(e) => e,
            Err(err) => return fail(&err),
        };
        let canonical = engine.win_probabilities();
        let original = values.to_original_order(&canonical);
        for (i, p) in original.iter().enumerate() {
            *out_probs.add(i) = to_f64(p);
        }
        RktStatus::Ok
    })
}

/// Exact analysis as a JSON report (same schema as the CLI); set
/// `include_reach` for per-round reach probabilities.
///
/// # Safety
/// Handles must be live; `out_json` must be valid. Free the string with
/// [`rkt_string_free`].
#[no_mangle]
pub unsafe extern "C" fn rkt_analyze_json(
    instance: *const RktInstance,
    format: *const RktFormat,
    include_reach: bool,
    force: bool,
    out_json: *mut *mut c_char,
) -> RktStatus {
    let (values, format) = match handles(instance, format) {
        Ok(pair) => pair,
        Err(status) => return status,
    };
    if out_json.is_null() {
        set_error("out_json is null");
        return RktStatus::NullPointer;
    }
    guarded(|| {
        let command = format!("analyze --format {format} --mode exact (C API)");
        match rkt::report::analyze_exact(
            command,
            values,
            format,
            include_reach,
            engine_guard(force),
        ) {
            Ok(report) => give_string(out_json, report.to_json()),
            Err(err) => fail(&err),
        }
    })
}

/// Analytic bounds as a JSON report.
///
/// # Safety
/// As [`rkt_analyze_json`].
#[no_mangle]
pub unsafe extern "C" fn rkt_bounds_json(
    instance: *const RktInstance,
    format: *const RktFormat,
    out_json: *mut *mut c_char,
) -> RktStatus {
    let (values, format) = match handles(instance, format) {
        Ok(pair) => pair,
        Err(status) => return status,
    };
    if out_json.is_null() {
        set_error("out_json is null");
        return RktStatus::NullPointer;
    }
    guarded(|| {
        let command = format!("bounds --format {format} (C API)");
        match rkt::report::bounds(command, values, format) {
            Ok(report) => give_string(out_json, report.to_json()),
            Err(err) => fail(&err),
        }
    })
}

/// Seeded Monte Carlo estimate as a JSON report. Identical arguments
/// produce byte-identical reports.
///
/// # Safety
/// As [`rkt_analyze_json`].
#[no_mangle]
pub unsafe extern "C" fn rkt_estimate_json(
    instance: *const RktInstance,
    format: *const RktFormat,
    trials: u64,
    seed: u64,
    out_json: *mut *mut c_char,
) -> RktStatus {
    let (values, format) = match handles(instance, format) {
        Ok(pair) => pair,
        Err(status) => return status,
    };
    if out_json.is_null() {
        set_error("out_json is null");
        return RktStatus::NullPointer;
    }
    guarded(|| {
        let estimate = match rkt::montecarlo::estimate(values, format, trials, seed) {
            Ok(e) => e,
            Err(err) => return fail(&err),
        };
        let command =
            format!("analyze --format {format} --mode mc --trials {trials} --seed {seed} (C API)");
        let report = rkt::report::analyze_mc(command, values, format, &estimate);
        give_string(out_json, report.to_json())
    })
}
