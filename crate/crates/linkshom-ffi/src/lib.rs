//! C ABI for the link homology engine.
//!
//! Conventions: every function returns an [`LhStatus`]; results come back
//! through out-pointers. Tables are opaque handles released with
//! [`lh_betti_free`]; strings are UTF-8, NUL-terminated, owned by the
//! library and released with [`lh_string_free`]. Passing a handle created
//! by a different allocator, or freeing twice, is undefined behaviour, as
//! usual for C interfaces.

// entry points stay safe `extern "C"` with null checks and internal
// unsafe blocks; the caller-side contract lives in the header docs
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use std::ffi::{c_char, c_double, c_int, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use linkshom::cache::RankCache;
use linkshom::hochschild::{self, EngineConfig, EngineError};
use linkshom::linalg::RankPolicy;
use linkshom::series;

/// Status codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InternalInvariant = 3,
    Panic = 4,
}

/// Opaque Betti table handle.
pub struct LhBettiTable {
    inner: hochschild::BettiTable,
}

fn status_of(err: &EngineError) -> LhStatus {
    match err {
        EngineError::InvalidParams(_) => LhStatus::InvalidArgument,
        EngineError::BoundarySquare { .. }
        | EngineError::NegativeHomology { .. }
        | EngineError::DegenerateEscape { .. }
        | EngineError::NormalizedVanishing { .. } => LhStatus::InternalInvariant,
        _ => LhStatus::InvalidArgument,
    }
}

fn engine_config(exact: c_int, seed: u64) -> EngineConfig {
    EngineConfig {
        rank_policy: if exact != 0 { RankPolicy::Exact } else { RankPolicy::default() },
        seed,
        cache: RankCache::from_env(None).unwrap_or_else(|_| RankCache::in_memory()),
    }
}

fn export_string(text: String, out: *mut *mut c_char) -> LhStatus {
    match CString::new(text) {
        Ok(cstring) => {
            unsafe { *out = cstring.into_raw() };
            LhStatus::Ok
        }
        Err(_) => LhStatus::InternalInvariant,
    }
}

/// Engine version as a static string; do not free.
#[no_mangle]
pub extern "C" fn lh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Computes a Betti table. `p_max < 0` means "no explicit level bound"
/// (valid for circles only); `exact != 0` escalates ranks to the exact
/// elimination. The handle must be released with `lh_betti_free`.
#[no_mangle]
pub extern "C" fn lh_betti_compute(
    m: u32,
    n: u32,
    d: u32,
    u_max: u32,
    p_max: i64,
    exact: c_int,
    seed: u64,
    out: *mut *mut LhBettiTable,
) -> LhStatus {
    if out.is_null() {
        return LhStatus::NullPointer;
    }
    let result = catch_unwind(AssertUnwindSafe(|| {
        let p_max = if p_max < 0 { None } else { Some(p_max as u32) };
        let cfg = engine_config(exact, seed);
        hochschild::betti_table(m, n, d, u_max, p_max, &cfg)
    }));
    match result {
        Ok(Ok(table)) => {
            let boxed = Box::new(LhBettiTable { inner: table });
            unsafe { *out = Box::into_raw(boxed) };
            LhStatus::Ok
        }
        Ok(Err(e)) => {
            unsafe { *out = ptr::null_mut() };
            status_of(&e)
        }
        Err(_) => {
            unsafe { *out = ptr::null_mut() };
            LhStatus::Panic
        }
    }
}

/// Number of entries (total degrees 0..=u_max) in the table.
#[no_mangle]
pub extern "C" fn lh_betti_entry_count(table: *const LhBettiTable, out: *mut usize) -> LhStatus {
    if table.is_null() || out.is_null() {
        return LhStatus::NullPointer;
    }
    let table = unsafe { &*table };
    unsafe { *out = table.inner.entries.len() };
    LhStatus::Ok
}

/// Reads entry `index`: total degree, Betti number, completeness flag.
#[no_mangle]
pub extern "C" fn lh_betti_entry(
    table: *const LhBettiTable,
    index: usize,
    out_u: *mut u32,
    out_betti: *mut u64,
    out_complete: *mut c_int,
) -> LhStatus {
    if table.is_null() || out_u.is_null() || out_betti.is_null() || out_complete.is_null() {
        return LhStatus::NullPointer;
    }
    let table = unsafe { &*table };
    let Some(entry) = table.inner.entries.get(index) else {
        return LhStatus::InvalidArgument;
    };
    unsafe {
        *out_u = entry.u;
        *out_betti = entry.betti;
        *out_complete = entry.complete as c_int;
    }
    LhStatus::Ok
}

/// Renders the table as JSON; free the string with `lh_string_free`.
#[no_mangle]
pub extern "C" fn lh_betti_to_json(table: *const LhBettiTable, out: *mut *mut c_char) -> LhStatus {
    if table.is_null() || out.is_null() {
        return LhStatus::NullPointer;
    }
    let table = unsafe { &*table };
    let text = serde_json::to_string(&table.inner.to_json()).unwrap_or_default();
    export_string(text, out)
}

#[no_mangle]
pub extern "C" fn lh_betti_free(table: *mut LhBettiTable) {
    if !table.is_null() {
        drop(unsafe { Box::from_raw(table) });
    }
}

/// Closed-form alternating-sum series of the link tower as JSON.
#[no_mangle]
pub extern "C" fn lh_euler_links_json(
    m: u32,
    d: u32,
    order: u32,
    out: *mut *mut c_char,
) -> LhStatus {
    if out.is_null() {
        return LhStatus::NullPointer;
    }
    match catch_unwind(|| series::euler_series_links(m, d, order as usize)) {
        Ok(Ok(series)) => export_string(serde_json::to_string(&series.to_json()).unwrap_or_default(), out),
        Ok(Err(_)) => LhStatus::InvalidArgument,
        Err(_) => LhStatus::Panic,
    }
}

/// Series of the pair (links modulo m knots) as JSON.
#[no_mangle]
pub extern "C" fn lh_euler_pair_json(
    m: u32,
    d: u32,
    order: u32,
    out: *mut *mut c_char,
) -> LhStatus {
    if out.is_null() {
        return LhStatus::NullPointer;
    }
    match catch_unwind(|| series::euler_series_pair(m, d, order as usize)) {
        Ok(Ok(series)) => export_string(serde_json::to_string(&series.to_json()).unwrap_or_default(), out),
        Ok(Err(_)) => LhStatus::InvalidArgument,
        Err(_) => LhStatus::Panic,
    }
}

/// Alternating-sum consistency report (computed dimensions vs the closed
/// form) as JSON.
#[no_mangle]
pub extern "C" fn lh_euler_check_json(
    m: u32,
    d: u32,
    t_max: u32,
    seed: u64,
    out: *mut *mut c_char,
) -> LhStatus {
    if out.is_null() {
        return LhStatus::NullPointer;
    }
    let result = catch_unwind(AssertUnwindSafe(|| {
        let cfg = engine_config(0, seed);
        hochschild::euler_check(m, d, t_max, &cfg)
    }));
    match result {
        Ok(Ok(report)) => {
            export_string(serde_json::to_string(&report.to_json()).unwrap_or_default(), out)
        }
        Ok(Err(e)) => status_of(&e),
        Err(_) => LhStatus::Panic,
    }
}

/// Radius-of-convergence upper bounds: `(1/m)^{1/(d-1)}` from the link
/// tower and `(1/sqrt(2))^{1/(d-1)}` from the knot tower.
#[no_mangle]
pub extern "C" fn lh_radius(
    m: u32,
    d: u32,
    out_link_bound: *mut c_double,
    out_knot_bound: *mut c_double,
) -> LhStatus {
    if out_link_bound.is_null() || out_knot_bound.is_null() {
        return LhStatus::NullPointer;
    }
    match series::radius_report(m, d) {
        Ok(report) => {
            unsafe {
                *out_link_bound = report.link_bound;
                *out_knot_bound = report.knot_bound;
            }
            LhStatus::Ok
        }
        Err(_) => LhStatus::InvalidArgument,
    }
}

/// Frees a string returned by this library.
#[no_mangle]
pub extern "C" fn lh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
