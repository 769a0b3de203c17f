//! C ABI over the `trisector` crate.
//!
//! Objects are opaque handles created by `*_new`/`*_solve`/`*_trace`
//! functions and released by the matching `*_free`. Every fallible call
//! returns a [`TrisectorStatus`]; on failure the message is available from
//! [`trisector_last_error`] on the same thread. Strings returned to the
//! caller are released with [`trisector_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use trisector::branch::{residuals_vanish, solve_branch, Branch, BranchSolution};
use trisector::config::RunConfig;
use trisector::error::{Error, GeometryError};
use trisector::geometry::{
    theta_point, trace, FramedPoint, RefineOptions, SampledCurve, SeedKind, Vec2,
};
use trisector::verify;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrisectorStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    OutOfRange = 3,
    Solver = 4,
    Geometry = 5,
    Analysis = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrisectorBranch {
    Trisector = 0,
    Conjugate = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrisectorCoefficient {
    /// Coefficients of `y = f(x)`.
    M = 0,
    /// Coefficients of the reparametrization `t(x)`.
    Lambda = 1,
}

/// Position and unit tangent at parameter `t`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TrisectorSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub ux: f64,
    pub uy: f64,
}

/// Exact branch solution.
pub struct TrisectorSeries {
    inner: BranchSolution,
}

/// Sampled curve after a number of envelope iterations.
pub struct TrisectorCurve {
    inner: SampledCurve,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(TrisectorStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Solver(_) | Error::Field(_) | Error::Series(_) => TrisectorStatus::Solver,
            Error::Geometry(_) => TrisectorStatus::Geometry,
            Error::Analysis(_) => TrisectorStatus::Analysis,
            Error::Config(_) => TrisectorStatus::InvalidArgument,
            Error::Io(_) | Error::Json(_) => TrisectorStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Failure::from(Error::from(e))
    }
}

fn fail(status: TrisectorStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TrisectorStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TrisectorStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(format!("internal error: {msg}"));
            TrisectorStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| fail(TrisectorStatus::NullPointer, "output pointer is null"))
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| fail(TrisectorStatus::NullPointer, "handle is null"))
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| fail(TrisectorStatus::Io, "string contains a NUL byte"))
}

fn sample(fp: &FramedPoint) -> TrisectorSample {
    TrisectorSample {
        t: fp.t(),
        x: fp.p().x,
        y: fp.p().y,
        ux: fp.u().x,
        uy: fp.u().y,
    }
}

fn branch(b: TrisectorBranch) -> Branch {
    match b {
        TrisectorBranch::Trisector => Branch::Trisector,
        TrisectorBranch::Conjugate => Branch::Conjugate,
    }
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn trisector_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn trisector_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn trisector_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Solves `branch` exactly through even `order`.
///
/// # Safety
/// `out_series` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisector_series_solve(
    branch_kind: TrisectorBranch,
    order: usize,
    out_series: *mut *mut TrisectorSeries,
) -> TrisectorStatus {
    guard(|| {
        let slot = out(out_series)?;
        *slot = ptr::null_mut();
        if order < 2 || !order.is_multiple_of(2) {
            return Err(fail(
                TrisectorStatus::InvalidArgument,
                format!("order must be even and at least 2, got {order}"),
            ));
        }
        let inner = solve_branch(branch(branch_kind), order).map_err(Error::from)?;
        *slot = Box::into_raw(Box::new(TrisectorSeries { inner }));
        Ok(())
    })
}

/// # Safety
/// `series` must come from [`trisector_series_solve`] and not have been
/// freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn trisector_series_free(series: *mut TrisectorSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// # Safety
/// `series` must be a live handle; `out_order` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisector_series_order(
    series: *const TrisectorSeries,
    out_order: *mut usize,
) -> TrisectorStatus {
    guard(|| {
        *out(out_order)? = get(series)?.inner.order;
        Ok(())
    })
}

/// Float value of coefficient `index` (`0..=order`).
///
/// # Safety
/// `series` must be a live handle; `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisector_series_coefficient(
    series: *const TrisectorSeries,
    which: TrisectorCoefficient,
    index: usize,
    out_value: *mut f64,
) -> TrisectorStatus {
    guard(|| {
        let s = &get(series)?.inner;
        let slot = out(out_value)?;
        check_index(s, index)?;
        *slot = coefficient(s, which, index).to_f64();
        Ok(())
    })
}

/// Exact coefficient as `p/q+r/s*sqrt3`. Release with
/// [`trisector_string_free`].
///
/// # Safety
/// `series` must be a live handle; `out_string` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisector_series_coefficient_string(
    series: *const TrisectorSeries,
    which: TrisectorCoefficient,
    index: usize,
    out_string: *mut *mut c_char,
) -> TrisectorStatus {
    guard(|| {
        let s = &get(series)?.inner;
        let slot = out(out_string)?;
        *slot = ptr::null_mut();
        check_index(s, index)?;
        *slot = to_c_string(coefficient(s, which, index).to_string())?;
        Ok(())
    })
}

fn check_index(s: &BranchSolution, index: usize) -> Result<(), Failure> {
    if index > s.order {
        return Err(fail(
            TrisectorStatus::OutOfRange,
            format!("index {index} exceeds order {}", s.order),
        ));
    }
    Ok(())
}

fn coefficient(
    s: &BranchSolution,
    which: TrisectorCoefficient,
    index: usize,
) -> &trisector::field::Qs3 {
    match which {
        TrisectorCoefficient::M => s.m(index),
        TrisectorCoefficient::Lambda => s.lambda(index),
    }
}

/// Float value of the step-`k` determinant (`k` even, `2 ≤ k ≤ order`).
///
/// # Safety
/// `series` must be a live handle; `out_value` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisector_series_determinant(
    series: *const TrisectorSeries,
    k: usize,
    out_value: *mut f64,
) -> TrisectorStatus {
    guard(|| {
        let s = &get(series)?.inner;
        let slot = out(out_value)?;
        let d = s.determinant(k).ok_or_else(|| {
            fail(
                TrisectorStatus::OutOfRange,
                format!("no determinant at step {k}"),
            )
        })?;
        *slot = d.to_f64();
        Ok(())
    })
}

/// Whether both residual series vanish exactly through the solved order.
///
/// # Safety
/// `series` must be a live handle; `out_vanish` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisector_series_residuals_vanish(
    series: *const TrisectorSeries,
    out_vanish: *mut bool,
) -> TrisectorStatus {
    guard(|| {
        let s = &get(series)?.inner;
        *out(out_vanish)? = residuals_vanish(s).map_err(Error::from)?;
        Ok(())
    })
}

fn options(event_tol: f64) -> Result<RefineOptions, Failure> {
    if !(event_tol > 0.0 && event_tol.is_finite()) {
        return Err(fail(
            TrisectorStatus::InvalidArgument,
            format!("event tolerance must be positive, got {event_tol}"),
        ));
    }
    Ok(RefineOptions {
        event_tol,
        ..RefineOptions::default()
    })
}

unsafe fn trace_into(
    seed: SeedKind,
    t_min: f64,
    t_max: f64,
    samples: usize,
    iterations: usize,
    out_curve: *mut *mut TrisectorCurve,
) -> Result<(), Failure> {
    let slot = out(out_curve)?;
    *slot = ptr::null_mut();
    if !t_min.is_finite() || !t_max.is_finite() || t_min >= t_max || samples < 2 {
        return Err(fail(
            TrisectorStatus::InvalidArgument,
            "need t_min < t_max and at least 2 samples",
        ));
    }
    let inner = trace(seed, (t_min, t_max), samples, iterations, &options(1e-14)?)?;
    *slot = Box::into_raw(Box::new(TrisectorCurve { inner }));
    Ok(())
}

/// Traces the parabola seed `y = 1/3 − t²` through `iterations`
/// applications of the envelope map.
///
/// # Safety
/// `out_curve` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisector_curve_trace_parabola(
    t_min: f64,
    t_max: f64,
    samples: usize,
    iterations: usize,
    out_curve: *mut *mut TrisectorCurve,
) -> TrisectorStatus {
    guard(|| {
        trace_into(
            SeedKind::Parabola,
            t_min,
            t_max,
            samples,
            iterations,
            out_curve,
        )
    })
}

/// Traces the graph of a solved series as seed.
///
/// # Safety
/// `series` must be a live handle; `out_curve` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisector_curve_trace_series(
    series: *const TrisectorSeries,
    t_min: f64,
    t_max: f64,
    samples: usize,
    iterations: usize,
    out_curve: *mut *mut TrisectorCurve,
) -> TrisectorStatus {
    guard(|| {
        let seed = SeedKind::from_solution(&get(series)?.inner);
        trace_into(seed, t_min, t_max, samples, iterations, out_curve)
    })
}

/// # Safety
/// `curve` must come from a trace function and not have been freed. Null is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn trisector_curve_free(curve: *mut TrisectorCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// # Safety
/// `curve` must be a live handle; `out_len` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisector_curve_len(
    curve: *const TrisectorCurve,
    out_len: *mut usize,
) -> TrisectorStatus {
    guard(|| {
        *out(out_len)? = get(curve)?.inner.len();
        Ok(())
    })
}

/// # Safety
/// `curve` must be a live handle; `out_sample` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisector_curve_sample(
    curve: *const TrisectorCurve,
    index: usize,
    out_sample: *mut TrisectorSample,
) -> TrisectorStatus {
    guard(|| {
        let c = &get(curve)?.inner;
        let slot = out(out_sample)?;
        let fp = c.samples.get(index).ok_or_else(|| {
            fail(
                TrisectorStatus::OutOfRange,
                format!("index {index} out of {} samples", c.len()),
            )
        })?;
        *slot = sample(fp);
        Ok(())
    })
}

/// Copies up to `capacity` samples into `buffer` and stores the number
/// written in `out_written`.
///
/// # Safety
/// `buffer` must hold `capacity` samples; the other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn trisector_curve_copy_samples(
    curve: *const TrisectorCurve,
    buffer: *mut TrisectorSample,
    capacity: usize,
    out_written: *mut usize,
) -> TrisectorStatus {
    guard(|| {
        let c = &get(curve)?.inner;
        let written = out(out_written)?;
        *written = 0;
        let n = capacity.min(c.len());
        if n > 0 && buffer.is_null() {
            return Err(fail(TrisectorStatus::NullPointer, "buffer is null"));
        }
        for (i, fp) in c.samples.iter().take(n).enumerate() {
            buffer.add(i).write(sample(fp));
        }
        *written = n;
        Ok(())
    })
}

/// Evaluates the curve at any parameter, independent of the samples.
///
/// # Safety
/// `curve` must be a live handle; `out_sample` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisector_curve_eval(
    curve: *const TrisectorCurve,
    t: f64,
    out_sample: *mut TrisectorSample,
) -> TrisectorStatus {
    guard(|| {
        let c = &get(curve)?.inner;
        let slot = out(out_sample)?;
        *slot = sample(&c.model.eval(t)?.point);
        Ok(())
    })
}

/// One application of the envelope map followed by reflection in the
/// x-axis, at a single framed point.
///
/// # Safety
/// `out_sample` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn trisector_theta(
    input: TrisectorSample,
    out_sample: *mut TrisectorSample,
) -> TrisectorStatus {
    guard(|| {
        let slot = out(out_sample)?;
        let fp = FramedPoint::new(
            input.t,
            Vec2::new(input.x, input.y),
            Vec2::new(input.ux, input.uy),
        )?;
        *slot = sample(&theta_point(&fp)?.point);
        Ok(())
    })
}

/// Runs the verification suite with default settings. `only` is a comma
/// separated list of criterion names or numbers, or null for all. The JSON
/// report is stored in `out_json`; release it with
/// [`trisector_string_free`].
///
/// # Safety
/// `only` must be null or a NUL-terminated string; the other pointers must
/// be valid.
#[no_mangle]
pub unsafe extern "C" fn trisector_verify(
    only: *const c_char,
    out_json: *mut *mut c_char,
    out_all_pass: *mut bool,
) -> TrisectorStatus {
    guard(|| {
        let json_slot = out(out_json)?;
        *json_slot = ptr::null_mut();
        let pass_slot = out(out_all_pass)?;
        let selection: Vec<String> = if only.is_null() {
            Vec::new()
        } else {
            let s = CStr::from_ptr(only)
                .to_str()
                .map_err(|_| fail(TrisectorStatus::InvalidArgument, "selection is not UTF-8"))?;
            vec![s.to_string()]
        };
        let ids = verify::select(&selection)?;
        let report = verify::run(&RunConfig::default(), &ids)?;
        *pass_slot = report.all_pass;
        *json_slot = to_c_string(trisector::report::to_json(&report)?)?;
        Ok(())
    })
}
