//! C interface to `cram`.
//!
//! Objects are opaque handles created by `*_new`/`*_from_*` functions and
//! released with the matching `*_free`. Every fallible function returns a
//! [`CramStatus`]; on failure, [`cram_last_error`] describes the problem.
//! Strings returned to the caller are released with [`cram_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::time::Duration;

use cram::bounds::{load_ramsey_table, Engine, Query};
use cram::colorings::{builtin_witness, verify_witness, ColoringJson, EdgeColoring};
use cram::search::{exact_value_with, exists_good_coloring, ExactOutcome, Exists, SearchConfig};
use cram::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CramStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    /// The budget ran out before an answer was reached.
    Undecided = 4,
    Io = 5,
    TooLarge = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

/// Bound engine: Ramsey table plus certificates.
pub struct CramEngine(Engine);

/// A coloring of the pairs of `[n]` with colors `1..=k`.
pub struct CramColoring(EdgeColoring);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn status_of(e: &Error) -> CramStatus {
    match e {
        Error::Parse { .. } | Error::InvalidColoring(_) | Error::InvalidGraph(_) | Error::InvalidFactorization(_) => {
            CramStatus::Parse
        }
        Error::Io { .. } => CramStatus::Io,
        Error::TooLarge { .. } => CramStatus::TooLarge,
        _ => CramStatus::InvalidArgument,
    }
}

/// Runs `f`, mapping errors and panics to a status with the message recorded.
fn guard(f: impl FnOnce() -> Result<CramStatus, (CramStatus, String)>) -> CramStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside cram");
            CramStatus::Panic
        }
    }
}

fn lib(e: Error) -> (CramStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CramStatus, String) {
    (CramStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (CramStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (CramStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn query_arg(m: *const u32, k: usize) -> Result<Query, (CramStatus, String)> {
    if m.is_null() {
        return Err(null("thresholds"));
    }
    Query::new(std::slice::from_raw_parts(m, k).to_vec()).map_err(lib)
}

fn budget(ms: u64) -> Option<Duration> {
    (ms > 0).then(|| Duration::from_millis(ms))
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<CramStatus, (CramStatus, String)> {
    let c = CString::new(s).map_err(|_| (CramStatus::Panic, "string with interior NUL".to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(CramStatus::Ok)
}

/// Message for the most recent failure on this thread. Valid until the next call.
#[no_mangle]
pub extern "C" fn cram_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn cram_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or came from this library and was not freed before.
#[no_mangle]
pub unsafe extern "C" fn cram_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Engine with the built-in Ramsey values and certificates.
///
/// # Safety
/// `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cram_engine_new(out: *mut *mut CramEngine) -> CramStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = Box::into_raw(Box::new(CramEngine(Engine::builtin())));
        Ok(CramStatus::Ok)
    })
}

/// Replaces the engine's Ramsey table with the defaults merged with a JSON file.
///
/// # Safety
/// `engine` is a live handle; `path` is a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cram_engine_load_ramsey_table(engine: *mut CramEngine, path: *const c_char) -> CramStatus {
    guard(|| {
        let e = engine.as_mut().ok_or_else(|| null("engine"))?;
        let p = str_arg(path, "path")?;
        e.0.table = load_ramsey_table(Path::new(p)).map_err(lib)?;
        Ok(CramStatus::Ok)
    })
}

/// # Safety
/// `engine` is null or a live handle, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn cram_engine_free(engine: *mut CramEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Interval `[lo, hi]` for `R̄(m_1, ..., m_k)`; `hi = 0` means no upper bound.
///
/// # Safety
/// `m` points to `k` values; `lo` and `hi` are valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cram_bound(
    engine: *const CramEngine,
    m: *const u32,
    k: usize,
    lo: *mut u32,
    hi: *mut u32,
) -> CramStatus {
    guard(|| {
        let e = engine.as_ref().ok_or_else(|| null("engine"))?;
        if lo.is_null() || hi.is_null() {
            return Err(null("lo/hi"));
        }
        let b = e.0.bound(&query_arg(m, k)?);
        *lo = b.lo;
        *hi = b.hi.unwrap_or(0);
        Ok(CramStatus::Ok)
    })
}

/// The bound with its provenance as JSON; free with `cram_string_free`.
///
/// # Safety
/// As [`cram_bound`]; `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cram_bound_json(
    engine: *const CramEngine,
    m: *const u32,
    k: usize,
    out: *mut *mut c_char,
) -> CramStatus {
    guard(|| {
        let e = engine.as_ref().ok_or_else(|| null("engine"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let b = e.0.bound(&query_arg(m, k)?);
        out_string(serde_json::to_string(&b).expect("serializable"), out)
    })
}

/// Exact value by search. On `CRAM_STATUS_UNDECIDED`, `lo`/`hi` hold the narrowed
/// interval (`hi = 0`: unbounded) and `value` is 0. `budget_ms = 0` means no limit.
///
/// # Safety
/// `engine` is a live handle; `m` points to `k` values; outputs are valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cram_exact_value(
    engine: *mut CramEngine,
    m: *const u32,
    k: usize,
    budget_ms: u64,
    value: *mut u32,
    lo: *mut u32,
    hi: *mut u32,
) -> CramStatus {
    guard(|| {
        let e = engine.as_mut().ok_or_else(|| null("engine"))?;
        if value.is_null() || lo.is_null() || hi.is_null() {
            return Err(null("value/lo/hi"));
        }
        let q = query_arg(m, k)?;
        let r = exact_value_with(&q, budget(budget_ms), &SearchConfig::default(), &mut e.0, None).map_err(lib)?;
        match r.outcome {
            ExactOutcome::Exact { value: v } => {
                (*value, *lo, *hi) = (v, v, v);
                Ok(CramStatus::Ok)
            }
            ExactOutcome::Bound { lo: l, hi: h } => {
                (*value, *lo, *hi) = (0, l, h.unwrap_or(0));
                Ok(CramStatus::Undecided)
            }
        }
    })
}

/// Whether `K_n` has a coloring with `alpha_i < m_i` for every color. On yes,
/// `*witness` receives a new coloring handle (when `witness` is not null).
///
/// # Safety
/// `m` points to `k` values; `exists` is valid; `witness` is null or valid.
#[no_mangle]
pub unsafe extern "C" fn cram_exists_good_coloring(
    n: usize,
    m: *const u32,
    k: usize,
    budget_ms: u64,
    exists: *mut bool,
    witness: *mut *mut CramColoring,
) -> CramStatus {
    guard(|| {
        if exists.is_null() {
            return Err(null("exists"));
        }
        let q = query_arg(m, k)?;
        let out = exists_good_coloring(n, &q, budget(budget_ms), &SearchConfig::default()).map_err(lib)?;
        if !witness.is_null() {
            *witness = ptr::null_mut();
        }
        match out.exists {
            Exists::Undecided => Ok(CramStatus::Undecided),
            e => {
                *exists = e == Exists::Yes;
                if let (Some(w), false) = (out.witness, witness.is_null()) {
                    *witness = Box::into_raw(Box::new(CramColoring(w)));
                }
                Ok(CramStatus::Ok)
            }
        }
    })
}

/// Parses `{"n":..,"k":..,"edges":[{"u":..,"v":..,"c":..},..]}`.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn cram_coloring_from_json(json: *const c_char, out: *mut *mut CramColoring) -> CramStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let doc: ColoringJson = serde_json::from_str(text).map_err(|e| (CramStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(CramColoring(EdgeColoring::from_json(&doc).map_err(lib)?)));
        Ok(CramStatus::Ok)
    })
}

/// A copy of a built-in witness coloring (`"W1"` ... `"W4"`).
///
/// # Safety
/// `id` is a NUL-terminated string; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn cram_coloring_builtin(id: *const c_char, out: *mut *mut CramColoring) -> CramStatus {
    guard(|| {
        let id = str_arg(id, "id")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let w = builtin_witness(id).ok_or((CramStatus::InvalidArgument, format!("no built-in witness {id}")))?;
        if !verify_witness(&w).ok {
            return Err((CramStatus::Panic, format!("built-in witness {id} fails verification")));
        }
        *out = Box::into_raw(Box::new(CramColoring(w.coloring)));
        Ok(CramStatus::Ok)
    })
}

/// # Safety
/// `c` is null or a live handle, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn cram_coloring_free(c: *mut CramColoring) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Order and color count.
///
/// # Safety
/// `c` is a live handle; `n` and `k` are valid.
#[no_mangle]
pub unsafe extern "C" fn cram_coloring_shape(c: *const CramColoring, n: *mut usize, k: *mut usize) -> CramStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("coloring"))?;
        if n.is_null() || k.is_null() {
            return Err(null("n/k"));
        }
        (*n, *k) = (c.0.n(), c.0.k());
        Ok(CramStatus::Ok)
    })
}

/// Color (1-based) of the pair `{u, v}` (1-based vertices).
///
/// # Safety
/// `c` is a live handle; `color` is valid.
#[no_mangle]
pub unsafe extern "C" fn cram_coloring_color(
    c: *const CramColoring,
    u: usize,
    v: usize,
    color: *mut usize,
) -> CramStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("coloring"))?;
        if color.is_null() {
            return Err(null("color"));
        }
        *color = c.0.color(u, v).map_err(lib)?;
        Ok(CramStatus::Ok)
    })
}

/// Independence number of each color class, written to `alpha[0..k]`.
///
/// # Safety
/// `c` is a live handle; `alpha` has room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn cram_coloring_alpha(c: *const CramColoring, alpha: *mut usize, len: usize) -> CramStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("coloring"))?;
        if alpha.is_null() {
            return Err(null("alpha"));
        }
        if len < c.0.k() {
            return Err((CramStatus::InvalidArgument, format!("need room for {} values, got {len}", c.0.k())));
        }
        let a = c.0.alpha_vector();
        std::slice::from_raw_parts_mut(alpha, a.len()).copy_from_slice(&a);
        Ok(CramStatus::Ok)
    })
}

/// The coloring as JSON; free with `cram_string_free`.
///
/// # Safety
/// `c` is a live handle; `out` is valid.
#[no_mangle]
pub unsafe extern "C" fn cram_coloring_to_json(c: *const CramColoring, out: *mut *mut c_char) -> CramStatus {
    guard(|| {
        let c = c.as_ref().ok_or_else(|| null("coloring"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        out_string(serde_json::to_string(&c.0.to_json()).expect("serializable"), out)
    })
}
