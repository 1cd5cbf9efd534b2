//! C interface to the checkers.
//!
//! Structures are opaque handles created from a catalog name and released
//! with `mobi_structure_free`. Reports and listings come back as JSON strings
//! owned by the caller and released with `mobi_string_free`. Every function
//! returns a `MobiStatus`; on anything other than `Ok` or `LawFailed` the
//! message is available from `mobi_last_error` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mobi::algebra::check_algebra;
use mobi::catalog::{self, CatalogError, InstanceParams, Kind, Structure};
use mobi::check::{all_pass, CheckReport, Strategy};
use mobi::dsl::{self, Definition};
use mobi::ring::{check_module, check_ring};
use mobi::search::search_finite;
use mobi::space::check_space;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MobiStatus {
    Ok = 0,
    /// The call succeeded and at least one law failed.
    LawFailed = 1,
    NullArgument = 2,
    InvalidUtf8 = 3,
    UnknownName = 4,
    InvalidParameter = 5,
    ParseError = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MobiKind {
    Algebra = 0,
    Space = 1,
    Ring = 2,
    Module = 3,
}

/// A built catalog instance.
pub struct MobiStructure {
    inner: Structure,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(MobiStatus, String);

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<MobiStatus, Failure>) -> MobiStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            MobiStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(MobiStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(MobiStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_json(out: *mut *mut c_char, value: &impl serde::Serialize) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(value)
        .map_err(|e| Failure(MobiStatus::Internal, e.to_string()))?;
    let c = CString::new(s).map_err(|e| Failure(MobiStatus::Internal, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

fn catalog_failure(err: CatalogError) -> Failure {
    let status = match err {
        CatalogError::UnknownName(_) => MobiStatus::UnknownName,
        _ => MobiStatus::InvalidParameter,
    };
    Failure(status, err.to_string())
}

fn strategy(samples: usize, seed: u64) -> Strategy {
    if samples == 0 {
        Strategy::Exhaustive
    } else {
        Strategy::sampled(samples, seed)
    }
}

fn verdict(reports: &[CheckReport]) -> MobiStatus {
    if all_pass(reports) {
        MobiStatus::Ok
    } else {
        MobiStatus::LawFailed
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mobi_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mobi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be a valid pointer to write a string pointer into.
#[no_mangle]
pub unsafe extern "C" fn mobi_catalog_list(out: *mut *mut c_char) -> MobiStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(MobiStatus::NullArgument, "out is null".into()));
        }
        write_json(out, &catalog::list_catalog())?;
        Ok(MobiStatus::Ok)
    })
}

/// Build a catalog instance. `params` is null or whitespace-separated
/// `key=value` pairs; vector values separate components with commas.
///
/// # Safety
/// `name` and non-null `params` must be NUL-terminated strings; `out` must
/// be a valid pointer to write a handle into.
#[no_mangle]
pub unsafe extern "C" fn mobi_structure_new(
    name: *const c_char,
    params: *const c_char,
    out: *mut *mut MobiStructure,
) -> MobiStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(MobiStatus::NullArgument, "out is null".into()));
        }
        let name = text(name, "name")?;
        let pairs: Vec<&str> = if params.is_null() {
            Vec::new()
        } else {
            text(params, "params")?.split_whitespace().collect()
        };
        let params = InstanceParams::parse(&pairs).map_err(catalog_failure)?;
        let inner = catalog::build(name, &params).map_err(catalog_failure)?;
        *out = Box::into_raw(Box::new(MobiStructure { inner }));
        Ok(MobiStatus::Ok)
    })
}

/// # Safety
/// `handle` must be null or a handle from `mobi_structure_new`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mobi_structure_free(handle: *mut MobiStructure) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mobi_structure_kind(
    handle: *const MobiStructure,
    out: *mut MobiKind,
) -> MobiStatus {
    guard(|| {
        if handle.is_null() || out.is_null() {
            return Err(Failure(
                MobiStatus::NullArgument,
                "handle or out is null".into(),
            ));
        }
        *out = match (*handle).inner.kind() {
            Kind::Algebra => MobiKind::Algebra,
            Kind::Space => MobiKind::Space,
            Kind::Ring => MobiKind::Ring,
            Kind::Module => MobiKind::Module,
        };
        Ok(MobiStatus::Ok)
    })
}

/// Check the axioms of the structure. `samples == 0` asks for exhaustive
/// checking, which falls back to sampling on infinite carriers. The JSON
/// report is written to `out` whether or not the laws pass.
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mobi_structure_check(
    handle: *const MobiStructure,
    samples: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> MobiStatus {
    guard(|| {
        if handle.is_null() || out.is_null() {
            return Err(Failure(
                MobiStatus::NullArgument,
                "handle or out is null".into(),
            ));
        }
        let strategy = strategy(samples, seed);
        let reports = match &(*handle).inner {
            Structure::Algebra(a) => check_algebra(a, strategy),
            Structure::Space(s) => check_space(&s.space, strategy),
            Structure::Ring(r) => check_ring(r, strategy),
            Structure::Module(m) => check_module(m, strategy),
        };
        write_json(out, &reports)?;
        Ok(verdict(&reports))
    })
}

/// Elaborate definitions in the text language and check each of them.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mobi_dsl_check(
    source: *const c_char,
    samples: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> MobiStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(MobiStatus::NullArgument, "out is null".into()));
        }
        let definitions = dsl::load(text(source, "source")?)
            .map_err(|d| Failure(MobiStatus::ParseError, d.to_string()))?;
        let strategy = strategy(samples, seed);
        let mut reports = Vec::new();
        for def in &definitions {
            reports.extend(match def {
                Definition::Algebra(a) => check_algebra(a, strategy),
                Definition::Space(s) => check_space(s, strategy),
            });
        }
        write_json(out, &reports)?;
        Ok(verdict(&reports))
    })
}

/// Finite models of the given size up to isomorphism, as JSON.
/// `limit == 0` means no limit.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mobi_search(
    size: usize,
    distinct_constants: bool,
    limit: usize,
    out: *mut *mut c_char,
) -> MobiStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(MobiStatus::NullArgument, "out is null".into()));
        }
        let limit = (limit > 0).then_some(limit);
        let models = search_finite(size, distinct_constants, limit)
            .map_err(|e| Failure(MobiStatus::InvalidParameter, e.to_string()))?;
        write_json(out, &models)?;
        Ok(MobiStatus::Ok)
    })
}
