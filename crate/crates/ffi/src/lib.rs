//! C interface to the n₀ engine.
//!
//! Objects cross the boundary as opaque pointers created by `*_open` or
//! `hn_compute_n0` and released by the matching `*_free`. Every fallible call
//! returns an [`HnStatus`]; on failure the message is available from
//! [`hn_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hecke_n0::cache::Cache;
use hecke_n0::engine::{compute_n0, sturm_bound, N0Result};
use hecke_n0::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HnStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Domain = 3,
    UnsupportedWeight = 4,
    Internal = 5,
    Cache = 6,
    Io = 7,
    Panic = 8,
}

/// Opaque on-disk cache.
pub struct HnCache {
    inner: Cache,
}

/// Opaque result of one n₀ computation.
pub struct HnResult {
    inner: N0Result,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> HnStatus {
    match e {
        Error::Domain(_) => HnStatus::Domain,
        Error::UnsupportedWeight(_) => HnStatus::UnsupportedWeight,
        Error::Invariant(_) | Error::Internal(_) => HnStatus::Internal,
        Error::Cache(_) | Error::Json(_) => HnStatus::Cache,
        Error::Io(_) => HnStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (HnStatus, String)>) -> HnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HnStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside hecke-n0");
            HnStatus::Panic
        }
    }
}

fn lift(e: Error) -> (HnStatus, String) {
    (status_of(&e), e.to_string())
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hn_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// k·ψ(N)/12, rounded down.
#[no_mangle]
pub extern "C" fn hn_sturm_bound(level: u64, weight: u32) -> u64 {
    sturm_bound(level, weight)
}

/// Opens (creating if needed) a cache directory.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hn_cache_open(path: *const c_char, out: *mut *mut HnCache) -> HnStatus {
    guard(|| {
        if path.is_null() || out.is_null() {
            return Err((HnStatus::NullArgument, "null argument to hn_cache_open".into()));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|e| (HnStatus::InvalidUtf8, e.to_string()))?;
        let inner = Cache::open(path).map_err(lift)?;
        *out = Box::into_raw(Box::new(HnCache { inner }));
        Ok(())
    })
}

/// # Safety
/// `cache` must come from [`hn_cache_open`] and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn hn_cache_free(cache: *mut HnCache) {
    if !cache.is_null() {
        drop(Box::from_raw(cache));
    }
}

/// Computes n₀(level, weight). `cache` may be NULL.
///
/// # Safety
/// `cache` must be NULL or a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hn_compute_n0(
    level: u64,
    weight: u32,
    cache: *const HnCache,
    out: *mut *mut HnResult,
) -> HnStatus {
    guard(|| {
        if out.is_null() {
            return Err((HnStatus::NullArgument, "null output pointer".into()));
        }
        let cache = cache.as_ref().map(|c| &c.inner);
        let inner = compute_n0(level, weight, cache).map_err(lift)?;
        *out = Box::into_raw(Box::new(HnResult { inner }));
        Ok(())
    })
}

/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hn_result_n0(result: *const HnResult) -> u64 {
    result.as_ref().map_or(0, |r| r.inner.n0)
}

/// Dimension of the new cuspidal plus space.
///
/// # Safety
/// `result` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hn_result_dim(result: *const HnResult) -> u64 {
    result.as_ref().map_or(0, |r| r.inner.dim_s as u64)
}

/// Full result as JSON, to be released with [`hn_string_free`].
///
/// # Safety
/// `result` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hn_result_json(result: *const HnResult, out: *mut *mut c_char) -> HnStatus {
    guard(|| {
        let (Some(r), false) = (result.as_ref(), out.is_null()) else {
            return Err((HnStatus::NullArgument, "null argument to hn_result_json".into()));
        };
        // through Value so that keys come out sorted
        let v = serde_json::to_value(&r.inner).map_err(|e| lift(e.into()))?;
        let s = v.to_string();
        *out = CString::new(s).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `result` must come from [`hn_compute_n0`] and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn hn_result_free(result: *mut HnResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn hn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
