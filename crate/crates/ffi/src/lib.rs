//! C interface to the kt engine.
//!
//! Models are opaque handles created by [`kt_model_parse`] and released
//! with [`kt_model_free`]. Every fallible function returns a [`KtStatus`];
//! on error a message is available from [`kt_last_error`] on the calling
//! thread. Strings handed out by the library are owned by the caller and
//! must be released with [`kt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use kt_core::ansatz::Bounds;
use kt_core::bf::{self, VerifyOptions};
use kt_core::cli;
use kt_core::dsl::{self, Model};
use kt_core::report::Report;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KtStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Input text was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The model source has a diagnostic; see `kt_last_error`.
    Parse = 3,
    /// Arguments out of range or an inconsistent model.
    Invalid = 4,
    /// An internal error; the library state is unaffected.
    Internal = 5,
}

/// A parsed and validated model.
pub struct KtModel {
    model: Model,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("no interior nul")));
}

fn fail(status: KtStatus, msg: impl Into<String>) -> KtStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> KtStatus) -> KtStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(KtStatus::Internal, "internal error"),
    }
}

fn into_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// # Safety
/// `out` must be null or valid for a pointer write.
unsafe fn emit(out: *mut *mut c_char, s: String) -> KtStatus {
    if out.is_null() {
        return fail(KtStatus::NullArgument, "output pointer is null");
    }
    *out = into_c(s);
    KtStatus::Ok
}

/// # Safety
/// `model` must be null or a live handle from `kt_model_parse`.
unsafe fn model_ref<'a>(model: *const KtModel) -> Result<&'a Model, KtStatus> {
    match model.as_ref() {
        Some(m) => Ok(&m.model),
        None => Err(fail(KtStatus::NullArgument, "model handle is null")),
    }
}

fn failures(report: &Report) -> usize {
    report.summary().fail
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kt_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn kt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses and validates model source text.
///
/// # Safety
/// `source` must be a NUL-terminated string and `out_model` valid for a
/// pointer write.
#[no_mangle]
pub unsafe extern "C" fn kt_model_parse(source: *const c_char, out_model: *mut *mut KtModel) -> KtStatus {
    guard(|| {
        if source.is_null() || out_model.is_null() {
            return fail(KtStatus::NullArgument, "source or output pointer is null");
        }
        *out_model = ptr::null_mut();
        let Ok(src) = CStr::from_ptr(source).to_str() else {
            return fail(KtStatus::InvalidUtf8, "source is not valid UTF-8");
        };
        match dsl::load_model(src) {
            Ok(model) => {
                *out_model = Box::into_raw(Box::new(KtModel { model }));
                KtStatus::Ok
            }
            Err(e) => fail(KtStatus::Parse, e.to_string()),
        }
    })
}

/// Releases a model handle; null is ignored.
///
/// # Safety
/// `model` must be null or a handle from `kt_model_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kt_model_free(model: *mut KtModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Releases a string returned by the library; null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Canonical source text of the model.
///
/// # Safety
/// `model` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn kt_model_canonical_text(model: *const KtModel, out: *mut *mut c_char) -> KtStatus {
    guard(|| match model_ref(model) {
        Ok(m) => emit(out, m.canonical_text()),
        Err(s) => s,
    })
}

/// Euler-Lagrange expressions, one `E[<component>] = <poly>` line each.
///
/// # Safety
/// `model` must be a live handle and `out` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn kt_model_euler_lagrange(model: *const KtModel, out: *mut *mut c_char) -> KtStatus {
    guard(|| {
        let m = match model_ref(model) {
            Ok(m) => m,
            Err(s) => return s,
        };
        match cli::el_report(m, "el") {
            Ok(r) => emit(out, r.to_text()),
            Err(e) => fail(KtStatus::Invalid, e.to_string()),
        }
    })
}

/// Nilpotency report as JSON. `out_failures`, if not null, receives the
/// number of failed checks.
///
/// # Safety
/// `model` must be a live handle, `out_json` valid for a pointer write and
/// `out_failures` null or valid for a write.
#[no_mangle]
pub unsafe extern "C" fn kt_model_check_json(
    model: *const KtModel,
    out_json: *mut *mut c_char,
    out_failures: *mut usize,
) -> KtStatus {
    guard(|| {
        let m = match model_ref(model) {
            Ok(m) => m,
            Err(s) => return s,
        };
        let r = cli::check_report(m, "check");
        if let Some(f) = out_failures.as_mut() {
            *f = failures(&r);
        }
        emit(out_json, r.to_json())
    })
}

/// Bounded Noether-identity search as a JSON report.
///
/// # Safety
/// `model` must be a live handle and `out_json` valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn kt_model_search_json(
    model: *const KtModel,
    jet_order: usize,
    degree: u32,
    out_json: *mut *mut c_char,
) -> KtStatus {
    guard(|| {
        let m = match model_ref(model) {
            Ok(m) => m,
            Err(s) => return s,
        };
        let command = format!("search --jet-order {jet_order} --degree {degree}");
        match cli::search_report(m, &Bounds::new(jet_order, degree), command) {
            Ok(r) => emit(out_json, r.to_json()),
            Err(e) => fail(KtStatus::Invalid, e.to_string()),
        }
    })
}

/// Builds and verifies the BF model of dimension `dim`, returning the JSON
/// report. `out_failures`, if not null, receives the number of failed checks.
///
/// # Safety
/// `out_json` must be valid for a pointer write and `out_failures` null or
/// valid for a write.
#[no_mangle]
pub unsafe extern "C" fn kt_bf_verify_json(
    dim: usize,
    jet_order: usize,
    degree: u32,
    out_json: *mut *mut c_char,
    out_failures: *mut usize,
) -> KtStatus {
    guard(|| {
        if out_json.is_null() {
            return fail(KtStatus::NullArgument, "output pointer is null");
        }
        if !(2..=bf::MAX_DIM).contains(&dim) {
            return fail(KtStatus::Invalid, format!("dimension must be between 2 and {}", bf::MAX_DIM));
        }
        match bf::verify_bf(dim, &VerifyOptions::for_dim(dim, jet_order, degree)) {
            Ok(r) => {
                if let Some(f) = out_failures.as_mut() {
                    *f = failures(&r);
                }
                emit(out_json, r.to_json())
            }
            Err(e) => fail(KtStatus::Invalid, e.to_string()),
        }
    })
}
