//! C interface to `tverberg-core`.
//!
//! Point sequences live behind the opaque [`TvSequence`] handle. Every
//! fallible call returns a [`TvStatus`]; on failure a message is available
//! from [`tv_last_error`] on the same thread. Strings returned through `out`
//! parameters are owned by the caller and released with [`tv_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tverberg_core::convex::{enumerate_tverberg_partitions, moment_curve, verify_tverberg};
use tverberg_core::predicate::{eval_statement, parse_statement};
use tverberg_core::stretched::stretched_diagonal;
use tverberg_core::types::{colorful_count, enumerate_colorful};
use tverberg_core::{Error, PointSequence, Sign, TverbergType};

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Dimension = 4,
    Genericity = 5,
    Precondition = 6,
    Singular = 7,
    Invariant = 8,
    Io = 9,
    Panic = 10,
}

impl From<&Error> for TvStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Dimension(_) => TvStatus::Dimension,
            Error::Singular => TvStatus::Singular,
            Error::Genericity(_) => TvStatus::Genericity,
            Error::Precondition(_) => TvStatus::Precondition,
            Error::Parse { .. } => TvStatus::Parse,
            Error::Invariant(_) => TvStatus::Invariant,
            Error::Io(_) => TvStatus::Io,
        }
    }
}

/// Opaque handle to an ordered point sequence.
pub struct TvSequence(PointSequence);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(text).expect("nul bytes removed")));
}

struct Failure(TvStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(TvStatus::from(&e), e.to_string())
    }
}

/// Run `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TvStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TvStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(TvStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(TvStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn seq<'a>(p: *const TvSequence) -> Result<&'a PointSequence, Failure> {
    p.as_ref().map(|s| &s.0).ok_or_else(|| null("sequence"))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(TvStatus::Invariant, "string with interior nul".into()))?;
    put(out, c.into_raw(), "output string")
}

unsafe fn put_sequence(out: *mut *mut TvSequence, s: PointSequence) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    out.write(Box::into_raw(Box::new(TvSequence(s))));
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on this thread.
#[no_mangle]
pub extern "C" fn tv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn tv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a sequence from CSV text (one point per line, `p/q` coordinates).
///
/// # Safety
/// `csv` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_sequence_from_csv(csv: *const c_char, out: *mut *mut TvSequence) -> TvStatus {
    guard(|| {
        let s = PointSequence::from_csv(text(csv, "csv")?)?;
        put_sequence(out, s)
    })
}

/// Points `(t, ..., t^d)` for `t = 1..n`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_sequence_moment_curve(d: usize, n: usize, out: *mut *mut TvSequence) -> TvStatus {
    guard(|| {
        if d == 0 || n == 0 {
            return Err(Failure(TvStatus::Precondition, "need d >= 1 and n >= 1".into()));
        }
        put_sequence(out, moment_curve(1..=n as i64, d))
    })
}

/// The first `n` points of the stretched diagonal in `R^d`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_sequence_stretched_diagonal(d: usize, n: usize, out: *mut *mut TvSequence) -> TvStatus {
    guard(|| put_sequence(out, stretched_diagonal(d, n)?.sequence()?))
}

/// Release a sequence. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tv_sequence_free(s: *mut TvSequence) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of points, or 0 for null.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tv_sequence_len(s: *const TvSequence) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// Dimension, or 0 for null.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tv_sequence_dim(s: *const TvSequence) -> usize {
    s.as_ref().map_or(0, |s| s.0.dim())
}

/// Exact coordinates as CSV text.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_sequence_to_csv(s: *const TvSequence, out: *mut *mut c_char) -> TvStatus {
    guard(|| put_string(out, seq(s)?.to_csv()))
}

/// Whether no `d + 1` points have zero orientation.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_sequence_is_generic(s: *const TvSequence, out: *mut bool) -> TvStatus {
    guard(|| put(out, seq(s)?.is_generic(), "output"))
}

/// Common orientation of all `(d+1)`-subsequences: 1 or -1, or 0 if the
/// sequence is not orientation-homogeneous.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_sequence_homogeneous_sign(s: *const TvSequence, out: *mut i32) -> TvStatus {
    guard(|| {
        let v = match seq(s)?.homogeneous_sign() {
            Some(Sign::Positive) => 1,
            Some(Sign::Negative) => -1,
            _ => 0,
        };
        put(out, v, "output")
    })
}

/// Test one Tverberg type, given by its encoding such as `1231213`. On
/// success `holds` is set, and if `certificate_json` is not null it receives
/// the certificate as JSON, or null when the type does not hold.
///
/// # Safety
/// `s` must be a live handle, `encoding` a valid C string, `holds` a valid
/// pointer and `certificate_json` null or valid.
#[no_mangle]
pub unsafe extern "C" fn tv_verify_type(
    s: *const TvSequence,
    encoding: *const c_char,
    holds: *mut bool,
    certificate_json: *mut *mut c_char,
) -> TvStatus {
    guard(|| {
        let seq = seq(s)?;
        let enc = text(encoding, "encoding")?;
        if holds.is_null() {
            return Err(null("holds"));
        }
        let r = enc.chars().collect::<std::collections::BTreeSet<_>>().len();
        let ty = TverbergType::decode(enc, seq.dim(), r)?;
        let cert = verify_tverberg(seq, &ty)?;
        put(holds, cert.is_some(), "holds")?;
        if !certificate_json.is_null() {
            match cert {
                Some(c) => put_string(certificate_json, serde_json::to_string(&c).expect("serializes"))?,
                None => certificate_json.write(ptr::null_mut()),
            }
        }
        Ok(())
    })
}

/// All Tverberg partitions into `r` parts as a JSON array of certificates;
/// `count` (if not null) receives their number.
///
/// # Safety
/// `s` must be a live handle, `count` null or valid, `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn tv_tverberg_partitions(
    s: *const TvSequence,
    r: usize,
    count: *mut usize,
    out_json: *mut *mut c_char,
) -> TvStatus {
    guard(|| {
        let found = enumerate_tverberg_partitions(seq(s)?, r)?;
        if !count.is_null() {
            count.write(found.len());
        }
        put_string(out_json, serde_json::to_string(&found).expect("serializes"))
    })
}

/// Evaluate a separation statement such as `25(1:X[14;36])`.
///
/// # Safety
/// `s` must be a live handle, `statement` a valid C string and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tv_eval_statement(s: *const TvSequence, statement: *const c_char, out: *mut bool) -> TvStatus {
    guard(|| {
        let seq = seq(s)?;
        let st = parse_statement(text(statement, "statement")?, seq.dim())?;
        put(out, eval_statement(seq, &st)?, "output")
    })
}

/// `(r-1)!^d`, the number of colorful types.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_colorful_count(d: usize, r: usize, out: *mut u64) -> TvStatus {
    guard(|| {
        if d == 0 || r < 2 {
            return Err(Failure(TvStatus::Precondition, format!("need d >= 1 and r >= 2, got d={d}, r={r}")));
        }
        put(out, colorful_count(d, r), "output")
    })
}

/// Colorful type encodings as a JSON array of strings, sorted.
///
/// # Safety
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tv_colorful_types(d: usize, r: usize, out_json: *mut *mut c_char) -> TvStatus {
    guard(|| {
        let types = enumerate_colorful(d, r)?;
        put_string(out_json, serde_json::to_string(&types).expect("serializes"))
    })
}
