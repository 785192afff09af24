//! C ABI over `motifgrow`.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `_free` function. Every fallible call returns an
//! [`MgStatus`]; on failure the message is available from
//! [`mg_last_error_message`] until the next failing call on the same thread.
//! Output pointers are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use motifgrow::config::{ConfigDoc, GrowthConfig, Mode};
use motifgrow::export;
use motifgrow::graph::{Distance, NetworkModel, VertexId};
use motifgrow::growth::{run, StepTrace};
use motifgrow::predictor::{counts_deterministic, counts_randomized, ModelParams, PredictError};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ConfigError = 3,
    GrowthError = 4,
    OutOfRange = 5,
    IoError = 6,
    Overflow = 7,
    Panic = 8,
}

/// Resolved growth configuration.
pub struct MgConfig {
    inner: GrowthConfig,
}

/// A generated model together with its per-step trace.
pub struct MgModel {
    model: NetworkModel,
    trace: StepTrace,
}

/// One trace row; step 0 holds the initial counts.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MgTraceRow {
    pub step: u32,
    pub n_v: u64,
    pub n_e: u64,
    pub n_be: u64,
    pub removed: u64,
    pub added: u64,
    pub x_size: u64,
    pub y_size: u64,
}

/// Closed-form counts. `n_e` is real-valued for randomized predictions.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MgCounts {
    pub n_v: u64,
    pub n_e: f64,
    pub n_be: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).expect("nul bytes removed"));
}

fn fail(status: MgStatus, message: impl Into<String>) -> MgStatus {
    set_error(message);
    status
}

fn guard(f: impl FnOnce() -> MgStatus) -> MgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(MgStatus::Panic, "internal panic"),
    }
}

/// # Safety
/// `s` must be null or a valid nul-terminated string.
unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, MgStatus> {
    if s.is_null() {
        return Err(fail(MgStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(MgStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

fn predict_status(e: PredictError) -> MgStatus {
    let status = match e {
        PredictError::Overflow { .. } => MgStatus::Overflow,
        _ => MgStatus::OutOfRange,
    };
    fail(status, e.to_string())
}

/// Message of the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn mg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses and validates a TOML configuration document.
///
/// # Safety
/// `toml` must be a valid nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mg_config_from_toml(toml: *const c_char, out: *mut *mut MgConfig) -> MgStatus {
    guard(|| {
        if out.is_null() {
            return fail(MgStatus::NullPointer, "out is null");
        }
        let text = match str_arg(toml, "toml") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match ConfigDoc::parse(text).and_then(|d| d.resolve()) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(MgConfig { inner }));
                MgStatus::Ok
            }
            Err(e) => fail(MgStatus::ConfigError, e.to_string()),
        }
    })
}

/// # Safety
/// `config` must be null or a handle from [`mg_config_from_toml`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mg_config_free(config: *mut MgConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mg_config_set_steps(config: *mut MgConfig, steps: u32) -> MgStatus {
    match config.as_mut() {
        Some(c) => {
            c.inner.steps = steps;
            MgStatus::Ok
        }
        None => fail(MgStatus::NullPointer, "config is null"),
    }
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mg_config_set_rng_seed(config: *mut MgConfig, rng_seed: u64) -> MgStatus {
    match config.as_mut() {
        Some(c) => {
            c.inner.rng_seed = rng_seed;
            MgStatus::Ok
        }
        None => fail(MgStatus::NullPointer, "config is null"),
    }
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mg_config_steps(config: *const MgConfig) -> u32 {
    config.as_ref().map_or(0, |c| c.inner.steps)
}

/// Closed-form counts at the configuration's final step. Randomized
/// configurations yield the expected edge count.
///
/// # Safety
/// `config` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mg_config_predict_counts(config: *const MgConfig, out: *mut MgCounts) -> MgStatus {
    guard(|| {
        let (Some(c), false) = (config.as_ref(), out.is_null()) else {
            return fail(MgStatus::NullPointer, "config or out is null");
        };
        let params = match ModelParams::from_config(&c.inner) {
            Ok(p) => p,
            Err(e) => return predict_status(e),
        };
        let t = c.inner.steps;
        let counts = match c.inner.mode {
            Mode::Randomized => counts_randomized(&params, t).map(|x| MgCounts {
                n_v: x.n_v,
                n_e: x.n_e,
                n_be: x.n_be,
            }),
            Mode::Deterministic | Mode::Rewire => counts_deterministic(&params, t).map(|x| MgCounts {
                n_v: x.n_v,
                n_e: x.n_e as f64,
                n_be: x.n_be,
            }),
        };
        match counts {
            Ok(x) => {
                *out = x;
                MgStatus::Ok
            }
            Err(e) => predict_status(e),
        }
    })
}

/// Deterministic closed-form counts for explicit structure parameters.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mg_predict_counts(
    n_v0: u64,
    n_e0: u64,
    m_v: u64,
    m_e: u64,
    r: u64,
    t: u32,
    out: *mut MgCounts,
) -> MgStatus {
    guard(|| {
        if out.is_null() {
            return fail(MgStatus::NullPointer, "out is null");
        }
        let counts = ModelParams::new(n_v0, n_e0, m_v, m_e, r).and_then(|p| counts_deterministic(&p, t));
        match counts {
            Ok(x) => {
                *out = MgCounts {
                    n_v: x.n_v,
                    n_e: x.n_e as f64,
                    n_be: x.n_be,
                };
                MgStatus::Ok
            }
            Err(e) => predict_status(e),
        }
    })
}

/// Runs the configured growth.
///
/// # Safety
/// `config` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mg_model_grow(config: *const MgConfig, out: *mut *mut MgModel) -> MgStatus {
    guard(|| {
        let (Some(c), false) = (config.as_ref(), out.is_null()) else {
            return fail(MgStatus::NullPointer, "config or out is null");
        };
        match run(&c.inner) {
            Ok((model, trace)) => {
                *out = Box::into_raw(Box::new(MgModel { model, trace }));
                MgStatus::Ok
            }
            Err(e) => fail(MgStatus::GrowthError, e.to_string()),
        }
    })
}

/// # Safety
/// `model` must be null or a handle from [`mg_model_grow`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mg_model_free(model: *mut MgModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be null or a live handle. Returns 0 for null.
#[no_mangle]
pub unsafe extern "C" fn mg_model_vertex_count(model: *const MgModel) -> u64 {
    model.as_ref().map_or(0, |m| m.model.vertex_count() as u64)
}

/// # Safety
/// `model` must be null or a live handle. Returns 0 for null.
#[no_mangle]
pub unsafe extern "C" fn mg_model_edge_count(model: *const MgModel) -> u64 {
    model.as_ref().map_or(0, |m| m.model.edge_count() as u64)
}

/// # Safety
/// `model` must be null or a live handle. Returns 0 for null.
#[no_mangle]
pub unsafe extern "C" fn mg_model_bound_count(model: *const MgModel) -> u64 {
    model.as_ref().map_or(0, |m| m.model.bound_count() as u64)
}

/// # Safety
/// `model` must be null or a live handle. Returns 0 for null.
#[no_mangle]
pub unsafe extern "C" fn mg_model_step(model: *const MgModel) -> u32 {
    model.as_ref().map_or(0, |m| m.model.step())
}

/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mg_model_degree(model: *const MgModel, vertex: u32, out: *mut u32) -> MgStatus {
    let (Some(m), false) = (model.as_ref(), out.is_null()) else {
        return fail(MgStatus::NullPointer, "model or out is null");
    };
    match m.model.degree(VertexId(vertex)) {
        Ok(d) => {
            *out = d;
            MgStatus::Ok
        }
        Err(e) => fail(MgStatus::OutOfRange, e.to_string()),
    }
}

/// Exact diameter. `*connected` is set to false (and `*out` to 0) for a
/// disconnected model.
///
/// # Safety
/// `model` must be a live handle; `out` and `connected` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn mg_model_diameter(model: *const MgModel, out: *mut u32, connected: *mut bool) -> MgStatus {
    guard(|| {
        let (Some(m), false, false) = (model.as_ref(), out.is_null(), connected.is_null()) else {
            return fail(MgStatus::NullPointer, "model, out or connected is null");
        };
        match m.model.diameter() {
            Distance::Finite(d) => {
                *out = d;
                *connected = true;
            }
            Distance::Infinite => {
                *out = 0;
                *connected = false;
            }
        }
        MgStatus::Ok
    })
}

/// Number of trace rows (final step + 1).
///
/// # Safety
/// `model` must be null or a live handle. Returns 0 for null.
#[no_mangle]
pub unsafe extern "C" fn mg_model_trace_len(model: *const MgModel) -> usize {
    model.as_ref().map_or(0, |m| m.trace.rows().len())
}

/// # Safety
/// `model` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mg_model_trace_row(model: *const MgModel, index: usize, out: *mut MgTraceRow) -> MgStatus {
    let (Some(m), false) = (model.as_ref(), out.is_null()) else {
        return fail(MgStatus::NullPointer, "model or out is null");
    };
    match m.trace.row(index) {
        Some(r) => {
            *out = MgTraceRow {
                step: r.step,
                n_v: r.n_v,
                n_e: r.n_e,
                n_be: r.n_be,
                removed: r.removed,
                added: r.added,
                x_size: r.x_size,
                y_size: r.y_size,
            };
            MgStatus::Ok
        }
        None => fail(
            MgStatus::OutOfRange,
            format!("trace row {index} out of range (len {})", m.trace.rows().len()),
        ),
    }
}

/// Copies the sorted edge list as `(u, v)` pairs into `buf`, which holds
/// `capacity` pairs (`2 * capacity` integers). `*written` receives the
/// number of pairs copied; `OutOfRange` if `capacity` is too small. Pass a
/// null `buf` to query the required capacity in `*written`.
///
/// # Safety
/// `model` must be a live handle, `written` a valid pointer, and `buf` null
/// or valid for `2 * capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn mg_model_copy_edges(
    model: *const MgModel,
    buf: *mut u32,
    capacity: usize,
    written: *mut usize,
) -> MgStatus {
    guard(|| {
        let (Some(m), false) = (model.as_ref(), written.is_null()) else {
            return fail(MgStatus::NullPointer, "model or written is null");
        };
        let n = m.model.edge_count();
        if buf.is_null() {
            *written = n;
            return MgStatus::Ok;
        }
        if capacity < n {
            *written = 0;
            return fail(MgStatus::OutOfRange, format!("buffer holds {capacity} pairs, need {n}"));
        }
        for (i, e) in m.model.sorted_edges().iter().enumerate() {
            *buf.add(2 * i) = e.lo().0;
            *buf.add(2 * i + 1) = e.hi().0;
        }
        *written = n;
        MgStatus::Ok
    })
}

/// Writes the sorted `u v` edge list to `path`.
///
/// # Safety
/// `model` must be a live handle and `path` a valid nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mg_model_write_edge_list(model: *const MgModel, path: *const c_char) -> MgStatus {
    guard(|| {
        let Some(m) = model.as_ref() else {
            return fail(MgStatus::NullPointer, "model is null");
        };
        let path = match str_arg(path, "path") {
            Ok(p) => p,
            Err(s) => return s,
        };
        match std::fs::write(Path::new(path), export::model_edge_list(&m.model)) {
            Ok(()) => MgStatus::Ok,
            Err(e) => fail(MgStatus::IoError, format!("{path}: {e}")),
        }
    })
}

/// Writes the trace as CSV to `path`.
///
/// # Safety
/// `model` must be a live handle and `path` a valid nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mg_model_write_trace(model: *const MgModel, path: *const c_char) -> MgStatus {
    guard(|| {
        let Some(m) = model.as_ref() else {
            return fail(MgStatus::NullPointer, "model is null");
        };
        let path = match str_arg(path, "path") {
            Ok(p) => p,
            Err(s) => return s,
        };
        match std::fs::write(Path::new(path), export::trace_csv(&m.trace)) {
            Ok(()) => MgStatus::Ok,
            Err(e) => fail(MgStatus::IoError, format!("{path}: {e}")),
        }
    })
}
