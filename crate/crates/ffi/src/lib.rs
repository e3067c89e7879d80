// SPDX-License-Identifier: MIT OR Apache-2.0

//! C interface to the `wemgsc` detector.
//!
//! Objects are opaque handles created by `*_new`/`wemgsc_detect`/
//! `wemgsc_simulate` and released with the matching `*_free`. Functions that
//! can fail return a [`WemgscStatus`]; the message of the last failure on the
//! calling thread is available from [`wemgsc_last_error_message`]. Panics are
//! caught at the boundary and reported as `WEMGSC_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wemgsc::io::DetectReport;
use wemgsc::{
    ConfigOverrides, DetectionResult, Error, EstimationMode, GapMethod, SeriesData, SimModel,
    SimSpec,
};

/// Result codes. Values 2 and 3 match the command line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WemgscStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Constraint = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WemgscGapMethod {
    Ld = 0,
    Dc = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WemgscEstimation {
    Global = 0,
    Segmentwise = 1,
}

/// Detector settings; unset values take length-dependent defaults.
pub struct WemgscConfig {
    inner: ConfigOverrides,
}

/// Outcome of one detection run.
pub struct WemgscResult {
    inner: DetectionResult,
}

/// One simulated series.
pub struct WemgscSimulation {
    x: Vec<f64>,
    truth: Vec<usize>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(WemgscStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Constraint(_) => WemgscStatus::Constraint,
            _ => WemgscStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(WemgscStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> WemgscStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WemgscStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_error(format!("panic: {msg}"));
            WemgscStatus::Panic
        }
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn wemgsc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn wemgsc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// New configuration with all values at their defaults.
#[no_mangle]
pub extern "C" fn wemgsc_config_new() -> *mut WemgscConfig {
    Box::into_raw(Box::new(WemgscConfig {
        inner: ConfigOverrides::default(),
    }))
}

/// # Safety
/// `cfg` must be null or a pointer from `wemgsc_config_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_config_free(cfg: *mut WemgscConfig) {
    if !cfg.is_null() {
        drop(unsafe { Box::from_raw(cfg) });
    }
}

fn invalid_enum(what: &str, value: i32) -> WemgscStatus {
    set_error(format!("unknown {what} {value}"));
    WemgscStatus::InvalidInput
}

unsafe fn with_config(
    cfg: *mut WemgscConfig,
    f: impl FnOnce(&mut ConfigOverrides),
) -> WemgscStatus {
    guard(|| {
        let cfg = unsafe { cfg.as_mut() }.ok_or_else(|| null("config"))?;
        f(&mut cfg.inner);
        Ok(())
    })
}

/// Intervals per recursion of the path search.
///
/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_config_set_intervals(
    cfg: *mut WemgscConfig,
    value: usize,
) -> WemgscStatus {
    unsafe { with_config(cfg, |c| c.intervals = Some(value)) }
}

/// Maximum number of path entries used to build models.
///
/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_config_set_max_candidates(
    cfg: *mut WemgscConfig,
    value: usize,
) -> WemgscStatus {
    unsafe { with_config(cfg, |c| c.max_candidates = Some(value)) }
}

/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_config_set_max_models(
    cfg: *mut WemgscConfig,
    value: usize,
) -> WemgscStatus {
    unsafe { with_config(cfg, |c| c.max_models = Some(value)) }
}

/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_config_set_max_ar_order(
    cfg: *mut WemgscConfig,
    value: usize,
) -> WemgscStatus {
    unsafe { with_config(cfg, |c| c.max_ar_order = Some(value)) }
}

/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_config_set_min_spacing(
    cfg: *mut WemgscConfig,
    value: usize,
) -> WemgscStatus {
    unsafe { with_config(cfg, |c| c.min_spacing = Some(value)) }
}

/// Penalty `log(n)^exponent`.
///
/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_config_set_penalty_exponent(
    cfg: *mut WemgscConfig,
    value: f64,
) -> WemgscStatus {
    unsafe { with_config(cfg, |c| c.penalty_exponent = Some(value)) }
}

/// Gap rule, one of the `WemgscGapMethod` values.
///
/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_config_set_gap_method(
    cfg: *mut WemgscConfig,
    value: i32,
) -> WemgscStatus {
    let m = match value {
        v if v == WemgscGapMethod::Ld as i32 => GapMethod::Ld,
        v if v == WemgscGapMethod::Dc as i32 => GapMethod::Dc,
        v => return invalid_enum("gap method", v),
    };
    unsafe { with_config(cfg, |c| c.gap_method = Some(m)) }
}

/// Estimator, one of the `WemgscEstimation` values.
///
/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_config_set_estimation(
    cfg: *mut WemgscConfig,
    value: i32,
) -> WemgscStatus {
    let m = match value {
        v if v == WemgscEstimation::Global as i32 => EstimationMode::Global,
        v if v == WemgscEstimation::Segmentwise as i32 => EstimationMode::Segmentwise,
        v => return invalid_enum("estimation mode", v),
    };
    unsafe { with_config(cfg, |c| c.estimation = Some(m)) }
}

/// # Safety
/// `cfg` must be a live configuration handle.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_config_set_refine(
    cfg: *mut WemgscConfig,
    value: bool,
) -> WemgscStatus {
    unsafe { with_config(cfg, |c| c.refine = Some(value)) }
}

/// Runs detection on `x[0..n]`. `cfg` may be null for defaults. On success
/// `*out` receives a result handle to be released with `wemgsc_result_free`.
///
/// # Safety
/// `x` must point to `n` readable doubles; `cfg` must be null or live; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_detect(
    x: *const f64,
    n: usize,
    cfg: *const WemgscConfig,
    out: *mut *mut WemgscResult,
) -> WemgscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        unsafe { *out = ptr::null_mut() };
        if x.is_null() {
            return Err(null("x"));
        }
        let values = unsafe { std::slice::from_raw_parts(x, n) }.to_vec();
        let series = SeriesData::new(values)?;
        let overrides = unsafe { cfg.as_ref() }
            .map(|c| c.inner.clone())
            .unwrap_or_default();
        let result = wemgsc::detect(&series, &overrides.resolve(n))?;
        unsafe { *out = Box::into_raw(Box::new(WemgscResult { inner: result })) };
        Ok(())
    })
}

/// # Safety
/// `res` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_result_free(res: *mut WemgscResult) {
    if !res.is_null() {
        drop(unsafe { Box::from_raw(res) });
    }
}

unsafe fn copy_out<T: Copy>(src: &[T], buf: *mut T, len: usize) -> Result<(), Failure> {
    if src.is_empty() {
        return Ok(());
    }
    if buf.is_null() {
        return Err(null("buffer"));
    }
    if len < src.len() {
        return Err(Failure(
            WemgscStatus::BufferTooSmall,
            format!("buffer holds {len} values; {} needed", src.len()),
        ));
    }
    unsafe { ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len()) };
    Ok(())
}

unsafe fn result_ref<'a>(res: *const WemgscResult) -> Result<&'a DetectionResult, Failure> {
    unsafe { res.as_ref() }
        .map(|r| &r.inner)
        .ok_or_else(|| null("result"))
}

/// Number of reported change points (refined when refinement is on); 0 for
/// a null handle.
///
/// # Safety
/// `res` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_result_num_changepoints(res: *const WemgscResult) -> usize {
    unsafe { res.as_ref() }.map_or(0, |r| r.inner.change_points().len())
}

/// Copies the reported change points (1-based index of the last observation
/// before each change) into `buf`.
///
/// # Safety
/// `res` must be live and `buf` writable for `len` elements.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_result_changepoints(
    res: *const WemgscResult,
    buf: *mut usize,
    len: usize,
) -> WemgscStatus {
    guard(|| unsafe { copy_out(result_ref(res)?.change_points(), buf, len) })
}

/// Change points selected before refinement; same count as the refined ones.
///
/// # Safety
/// `res` must be live and `buf` writable for `len` elements.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_result_selected(
    res: *const WemgscResult,
    buf: *mut usize,
    len: usize,
) -> WemgscStatus {
    guard(|| unsafe { copy_out(&result_ref(res)?.model.locations, buf, len) })
}

/// Selected AR order; 0 for a null handle.
///
/// # Safety
/// `res` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_result_ar_order(res: *const WemgscResult) -> usize {
    unsafe { res.as_ref() }.map_or(0, |r| r.inner.model.p_hat)
}

/// Copies the `ar_order` AR coefficients.
///
/// # Safety
/// `res` must be live and `buf` writable for `len` elements.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_result_ar_coefficients(
    res: *const WemgscResult,
    buf: *mut f64,
    len: usize,
) -> WemgscStatus {
    guard(|| unsafe { copy_out(&result_ref(res)?.model.alpha, buf, len) })
}

/// Copies the `num_changepoints + 1` segment intercepts.
///
/// # Safety
/// `res` must be live and `buf` writable for `len` elements.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_result_levels(
    res: *const WemgscResult,
    buf: *mut f64,
    len: usize,
) -> WemgscStatus {
    guard(|| unsafe { copy_out(&result_ref(res)?.model.levels, buf, len) })
}

/// Full result as JSON, in the command line layout. Release with
/// `wemgsc_string_free`.
///
/// # Safety
/// `res` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_result_to_json(
    res: *const WemgscResult,
    out: *mut *mut c_char,
) -> WemgscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let report = DetectReport::from(unsafe { result_ref(res)? });
        let text = serde_json::to_string(&report).map_err(Error::from)?;
        let c =
            CString::new(text).map_err(|e| Failure(WemgscStatus::InvalidInput, e.to_string()))?;
        unsafe { *out = c.into_raw() };
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Simulates model `model` ("M1" to "M13"). `n = 0` uses the model's own
/// length; `rep` selects the replication stream.
///
/// # Safety
/// `model` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_simulate(
    model: *const c_char,
    seed: u64,
    rep: u64,
    null_variant: bool,
    n: usize,
    out: *mut *mut WemgscSimulation,
) -> WemgscStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        unsafe { *out = ptr::null_mut() };
        if model.is_null() {
            return Err(null("model"));
        }
        let id = unsafe { CStr::from_ptr(model) }
            .to_str()
            .map_err(|e| Failure(WemgscStatus::InvalidInput, e.to_string()))?;
        let model: SimModel = id.parse()?;
        let mut spec = SimSpec::new(model, seed).stream(rep).null(null_variant);
        if n > 0 {
            spec = spec.with_length(n);
        }
        let sim = wemgsc::simulate(&spec)?;
        let handle = WemgscSimulation {
            x: sim.x.values().to_vec(),
            truth: sim.truth,
        };
        unsafe { *out = Box::into_raw(Box::new(handle)) };
        Ok(())
    })
}

/// # Safety
/// `sim` must be null or a live simulation handle.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_simulation_free(sim: *mut WemgscSimulation) {
    if !sim.is_null() {
        drop(unsafe { Box::from_raw(sim) });
    }
}

/// # Safety
/// `sim` must be null or a live simulation handle.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_simulation_len(sim: *const WemgscSimulation) -> usize {
    unsafe { sim.as_ref() }.map_or(0, |s| s.x.len())
}

/// # Safety
/// `sim` must be live and `buf` writable for `len` elements.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_simulation_values(
    sim: *const WemgscSimulation,
    buf: *mut f64,
    len: usize,
) -> WemgscStatus {
    guard(|| {
        let s = unsafe { sim.as_ref() }.ok_or_else(|| null("simulation"))?;
        unsafe { copy_out(&s.x, buf, len) }
    })
}

/// # Safety
/// `sim` must be null or a live simulation handle.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_simulation_num_changepoints(sim: *const WemgscSimulation) -> usize {
    unsafe { sim.as_ref() }.map_or(0, |s| s.truth.len())
}

/// True change points of the simulation.
///
/// # Safety
/// `sim` must be live and `buf` writable for `len` elements.
#[no_mangle]
pub unsafe extern "C" fn wemgsc_simulation_changepoints(
    sim: *const WemgscSimulation,
    buf: *mut usize,
    len: usize,
) -> WemgscStatus {
    guard(|| {
        let s = unsafe { sim.as_ref() }.ok_or_else(|| null("simulation"))?;
        unsafe { copy_out(&s.truth, buf, len) }
    })
}
