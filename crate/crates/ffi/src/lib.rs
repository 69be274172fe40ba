//! C ABI for the pbdiag library.
//!
//! Conventions: every fallible function returns a [`PbdStatus`] code and
//! writes results through out-pointers; handles are opaque and freed with
//! their matching `*_free` function; string getters return pointers that
//! stay valid while the owning handle lives. On any non-`Ok` status,
//! [`pbd_last_error`] holds a message for the current thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use pbdiag::io::load_model;
use pbdiag::minimize::{
    additive_deletion, csea_then_quickxplain, deletion_filter, quickxplain, verify_iis, IISResult,
    Method, Oracle,
};
use pbdiag::search::{extract_conflict_set, SearchOptions, SearchOutcome};
use pbdiag::{MinimizeError, Model};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbdStatus {
    /// Success.
    Ok = 0,
    /// Model text failed to parse; see `pbd_last_error`.
    ParseError = 1,
    /// A null pointer or out-of-range argument was passed.
    InvalidArgument = 2,
    /// The model is feasible, so there is nothing to diagnose.
    Feasible = 3,
    /// The time limit expired before the operation finished.
    Timeout = 4,
    /// Unexpected internal failure; see `pbd_last_error`.
    InternalError = 5,
}

/// IIS minimization method selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PbdMethod {
    /// Conflict-set extraction followed by QuickXplain over the core.
    CseaQx = 0,
    /// QuickXplain over the full constraint set.
    Qx = 1,
    /// Deletion filter.
    Deletion = 2,
    /// Additive growth followed by a deletion pass.
    Additive = 3,
}

/// Opaque parsed model handle.
pub struct PbdModel {
    inner: Model,
}

/// Opaque list of constraint names.
pub struct PbdNames {
    names: Vec<CString>,
}

/// Opaque IIS result: names plus method metadata.
pub struct PbdIis {
    names: PbdNames,
    result: IISResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(sanitized).expect("NUL bytes removed"));
    });
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
}

/// Message describing the most recent failure on this thread, or null.
/// The pointer is valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pbd_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null(), |msg| msg.as_ptr())
    })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn pbd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

fn guard(f: impl FnOnce() -> PbdStatus) -> PbdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic in pbdiag".to_string());
            set_last_error(&msg);
            PbdStatus::InternalError
        }
    }
}

fn search_options(time_limit_ms: u64, learning: bool) -> SearchOptions {
    SearchOptions {
        learning,
        time_limit: (time_limit_ms > 0).then(|| Duration::from_millis(time_limit_ms)),
        ..SearchOptions::default()
    }
}

fn names_handle(names: &[String]) -> PbdNames {
    PbdNames {
        names: names
            .iter()
            .map(|n| CString::new(n.replace('\0', " ")).expect("NUL bytes removed"))
            .collect(),
    }
}

/// Parses model text (JSON or OPB) into a new handle. On success writes the
/// handle through `out_model`; free it with `pbd_model_free`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out_model` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn pbd_model_parse(
    text: *const c_char,
    out_model: *mut *mut PbdModel,
) -> PbdStatus {
    guard(|| {
        if text.is_null() || out_model.is_null() {
            set_last_error("pbd_model_parse: null argument");
            return PbdStatus::InvalidArgument;
        }
        let text = match unsafe { CStr::from_ptr(text) }.to_str() {
            Ok(t) => t,
            Err(_) => {
                set_last_error("pbd_model_parse: text is not valid UTF-8");
                return PbdStatus::InvalidArgument;
            }
        };
        match load_model(text) {
            Ok(model) => {
                clear_last_error();
                unsafe { *out_model = Box::into_raw(Box::new(PbdModel { inner: model })) };
                PbdStatus::Ok
            }
            Err(e) => {
                set_last_error(&e.to_string());
                PbdStatus::ParseError
            }
        }
    })
}

/// Releases a model handle. Null is ignored.
///
/// # Safety
/// `model` must have come from `pbd_model_parse` and not been freed.
#[no_mangle]
pub unsafe extern "C" fn pbd_model_free(model: *mut PbdModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Number of variables in the model; 0 for a null handle.
///
/// # Safety
/// `model` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pbd_model_num_vars(model: *const PbdModel) -> u32 {
    if model.is_null() {
        return 0;
    }
    unsafe { &*model }.inner.num_vars() as u32
}

/// Number of constraints in the model; 0 for a null handle.
///
/// # Safety
/// `model` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pbd_model_num_constraints(model: *const PbdModel) -> u32 {
    if model.is_null() {
        return 0;
    }
    unsafe { &*model }.inner.raw_constraints().len() as u32
}

/// Decides feasibility. Writes true/false through `out_sat` on `Ok`;
/// `time_limit_ms` of 0 means no limit.
///
/// # Safety
/// `model` must be a live handle and `out_sat` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pbd_check(
    model: *const PbdModel,
    time_limit_ms: u64,
    learning: bool,
    out_sat: *mut bool,
) -> PbdStatus {
    guard(|| {
        if model.is_null() || out_sat.is_null() {
            set_last_error("pbd_check: null argument");
            return PbdStatus::InvalidArgument;
        }
        let model = &unsafe { &*model }.inner;
        let result = extract_conflict_set(model, &search_options(time_limit_ms, learning));
        match result.outcome {
            SearchOutcome::Sat(_) => {
                clear_last_error();
                unsafe { *out_sat = true };
                PbdStatus::Ok
            }
            SearchOutcome::Unsat(_) => {
                clear_last_error();
                unsafe { *out_sat = false };
                PbdStatus::Ok
            }
            SearchOutcome::Timeout(_) => {
                set_last_error("pbd_check: time limit exceeded");
                PbdStatus::Timeout
            }
        }
    })
}

/// Extracts the conflict core of an infeasible model as a name list.
/// Returns `Feasible` (and writes nothing) when the model is satisfiable.
///
/// # Safety
/// `model` must be a live handle and `out_core` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pbd_extract_core(
    model: *const PbdModel,
    time_limit_ms: u64,
    learning: bool,
    out_core: *mut *mut PbdNames,
) -> PbdStatus {
    guard(|| {
        if model.is_null() || out_core.is_null() {
            set_last_error("pbd_extract_core: null argument");
            return PbdStatus::InvalidArgument;
        }
        let model = &unsafe { &*model }.inner;
        let result = extract_conflict_set(model, &search_options(time_limit_ms, learning));
        match result.outcome {
            SearchOutcome::Sat(_) => {
                set_last_error("model is feasible; no conflict core exists");
                PbdStatus::Feasible
            }
            SearchOutcome::Unsat(core) => {
                clear_last_error();
                unsafe { *out_core = Box::into_raw(Box::new(names_handle(&core.names))) };
                PbdStatus::Ok
            }
            SearchOutcome::Timeout(_) => {
                set_last_error("pbd_extract_core: time limit exceeded");
                PbdStatus::Timeout
            }
        }
    })
}

/// Minimizes the model's infeasibility to an IIS with the chosen method and
/// verifies it. Returns `Feasible` for satisfiable models.
///
/// # Safety
/// `model` must be a live handle and `out_iis` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pbd_find_iis(
    model: *const PbdModel,
    method: PbdMethod,
    time_limit_ms: u64,
    memoize: bool,
    out_iis: *mut *mut PbdIis,
) -> PbdStatus {
    guard(|| {
        if model.is_null() || out_iis.is_null() {
            set_last_error("pbd_find_iis: null argument");
            return PbdStatus::InvalidArgument;
        }
        let model = &unsafe { &*model }.inner;
        let opts = search_options(time_limit_ms, true);
        let outcome = match method {
            PbdMethod::CseaQx => {
                csea_then_quickxplain(model, &opts, memoize).map(|out| out.iis)
            }
            PbdMethod::Qx | PbdMethod::Deletion | PbdMethod::Additive => {
                let names: Vec<String> = model
                    .raw_constraints()
                    .iter()
                    .map(|c| c.name.clone())
                    .collect();
                let mut oracle = Oracle::new(model, opts.time_limit, memoize);
                match method {
                    PbdMethod::Qx => quickxplain(&mut oracle, &[], &names),
                    PbdMethod::Deletion => deletion_filter(&mut oracle, &names),
                    PbdMethod::Additive => additive_deletion(&mut oracle, &names),
                    PbdMethod::CseaQx => unreachable!(),
                }
            }
        };
        match outcome {
            Ok(mut result) => {
                if method == PbdMethod::CseaQx {
                    result.method = Method::CseaQx;
                }
                result.verified = verify_iis(model, &result.iis);
                clear_last_error();
                let handle = PbdIis {
                    names: names_handle(&result.iis),
                    result,
                };
                unsafe { *out_iis = Box::into_raw(Box::new(handle)) };
                PbdStatus::Ok
            }
            Err(MinimizeError::Precondition(msg)) => {
                set_last_error(&msg);
                PbdStatus::Feasible
            }
            Err(MinimizeError::Timeout { .. }) => {
                set_last_error("pbd_find_iis: time limit exceeded");
                PbdStatus::Timeout
            }
        }
    })
}

/// Number of names in the list; 0 for null.
///
/// # Safety
/// `names` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pbd_names_len(names: *const PbdNames) -> usize {
    if names.is_null() {
        return 0;
    }
    unsafe { &*names }.names.len()
}

/// Borrowed pointer to the name at `index`, or null when out of range. The
/// pointer is valid while the list handle lives.
///
/// # Safety
/// `names` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pbd_names_get(names: *const PbdNames, index: usize) -> *const c_char {
    if names.is_null() {
        return ptr::null();
    }
    unsafe { &*names }
        .names
        .get(index)
        .map_or(ptr::null(), |name| name.as_ptr())
}

/// Releases a name list. Null is ignored.
///
/// # Safety
/// `names` must have come from `pbd_extract_core` and not been freed.
#[no_mangle]
pub unsafe extern "C" fn pbd_names_free(names: *mut PbdNames) {
    if !names.is_null() {
        drop(unsafe { Box::from_raw(names) });
    }
}

/// Borrowed view of the IIS member names; owned by the IIS handle.
///
/// # Safety
/// `iis` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pbd_iis_names(iis: *const PbdIis) -> *const PbdNames {
    if iis.is_null() {
        return ptr::null();
    }
    &unsafe { &*iis }.names
}

/// Oracle calls spent by the minimization phase.
///
/// # Safety
/// `iis` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pbd_iis_oracle_calls(iis: *const PbdIis) -> u64 {
    if iis.is_null() {
        return 0;
    }
    unsafe { &*iis }.result.oracle_calls
}

/// Wall time of the whole diagnosis in milliseconds.
///
/// # Safety
/// `iis` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pbd_iis_time_ms(iis: *const PbdIis) -> f64 {
    if iis.is_null() {
        return 0.0;
    }
    unsafe { &*iis }.result.time_ms
}

/// Whether the result passed the minimality verification.
///
/// # Safety
/// `iis` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pbd_iis_verified(iis: *const PbdIis) -> bool {
    if iis.is_null() {
        return false;
    }
    unsafe { &*iis }.result.verified
}

/// Serializes the IIS result to a JSON string owned by the caller; free it
/// with `pbd_string_free`. Returns null for a null handle.
///
/// # Safety
/// `iis` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn pbd_iis_to_json(iis: *const PbdIis) -> *mut c_char {
    if iis.is_null() {
        return ptr::null_mut();
    }
    let json = serde_json::to_string(&unsafe { &*iis }.result)
        .expect("IIS results always serialize");
    CString::new(json.replace('\0', " "))
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Releases an IIS handle. Null is ignored.
///
/// # Safety
/// `iis` must have come from `pbd_find_iis` and not been freed.
#[no_mangle]
pub unsafe extern "C" fn pbd_iis_free(iis: *mut PbdIis) {
    if !iis.is_null() {
        drop(unsafe { Box::from_raw(iis) });
    }
}

/// Releases a string returned by `pbd_iis_to_json`. Null is ignored.
///
/// # Safety
/// `s` must have come from this library and not been freed.
#[no_mangle]
pub unsafe extern "C" fn pbd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
