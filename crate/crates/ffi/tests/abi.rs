use std::ffi::{CStr, CString};
use std::ptr;

use trisector_ffi::*;

fn last_error() -> String {
    let p = trisector_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn solve(b: TrisectorBranch, order: usize) -> *mut TrisectorSeries {
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { trisector_series_solve(b, order, &mut s) },
        TrisectorStatus::Ok
    );
    assert!(!s.is_null());
    s
}

#[test]
fn series_round_trip() {
    let s = solve(TrisectorBranch::Conjugate, 4);
    unsafe {
        let mut order = 0;
        assert_eq!(trisector_series_order(s, &mut order), TrisectorStatus::Ok);
        assert_eq!(order, 4);

        let mut text = ptr::null_mut();
        assert_eq!(
            trisector_series_coefficient_string(s, TrisectorCoefficient::M, 4, &mut text),
            TrisectorStatus::Ok
        );
        assert_eq!(
            CStr::from_ptr(text).to_str().unwrap(),
            "-351/704-189/704*sqrt3"
        );
        trisector_string_free(text);

        let mut v = 0.0;
        assert_eq!(
            trisector_series_coefficient(s, TrisectorCoefficient::Lambda, 1, &mut v),
            TrisectorStatus::Ok
        );
        assert!((v + 1.0 + 3f64.sqrt()).abs() < 1e-15);

        let mut d = 0.0;
        assert_eq!(
            trisector_series_determinant(s, 4, &mut d),
            TrisectorStatus::Ok
        );
        assert!(d < 0.0);
        assert_eq!(
            trisector_series_determinant(s, 3, &mut d),
            TrisectorStatus::OutOfRange
        );

        let mut vanish = false;
        assert_eq!(
            trisector_series_residuals_vanish(s, &mut vanish),
            TrisectorStatus::Ok
        );
        assert!(vanish);
        trisector_series_free(s);
    }
}

#[test]
fn invalid_arguments_set_status_and_message() {
    let mut s = ptr::null_mut();
    let status = unsafe { trisector_series_solve(TrisectorBranch::Trisector, 5, &mut s) };
    assert_eq!(status, TrisectorStatus::InvalidArgument);
    assert!(s.is_null());
    assert!(last_error().contains("even"));

    let status = unsafe { trisector_series_solve(TrisectorBranch::Trisector, 2, ptr::null_mut()) };
    assert_eq!(status, TrisectorStatus::NullPointer);

    let mut len = 0;
    let status = unsafe { trisector_curve_len(ptr::null(), &mut len) };
    assert_eq!(status, TrisectorStatus::NullPointer);

    let s = solve(TrisectorBranch::Trisector, 2);
    let mut v = 0.0;
    let status = unsafe { trisector_series_coefficient(s, TrisectorCoefficient::M, 3, &mut v) };
    assert_eq!(status, TrisectorStatus::OutOfRange);
    assert!(last_error().contains("exceeds"));
    let status = unsafe { trisector_series_order(s, &mut len) };
    assert_eq!(status, TrisectorStatus::Ok);
    assert!(trisector_last_error().is_null());
    unsafe { trisector_series_free(s) };
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        trisector_series_free(ptr::null_mut());
        trisector_curve_free(ptr::null_mut());
        trisector_string_free(ptr::null_mut());
    }
}

#[test]
fn curve_handles() {
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(
            trisector_curve_trace_parabola(-1.0, 1.0, 401, 5, &mut c),
            TrisectorStatus::Ok
        );
        let mut p = TrisectorSample::default();
        assert_eq!(
            trisector_curve_eval(c, 1.0 / 32.0, &mut p),
            TrisectorStatus::Ok
        );
        assert!((p.x - 0.92795).abs() < 1e-3 && (p.y - 2.82373).abs() < 1e-3);
        assert!((p.ux.hypot(p.uy) - 1.0).abs() < 1e-12);

        let mut n = 0;
        assert_eq!(trisector_curve_len(c, &mut n), TrisectorStatus::Ok);
        let mut buf = vec![TrisectorSample::default(); n + 5];
        let mut written = 0;
        assert_eq!(
            trisector_curve_copy_samples(c, buf.as_mut_ptr(), buf.len(), &mut written),
            TrisectorStatus::Ok
        );
        assert_eq!(written, n);
        let mut last = TrisectorSample::default();
        assert_eq!(
            trisector_curve_sample(c, n - 1, &mut last),
            TrisectorStatus::Ok
        );
        assert_eq!(last, buf[n - 1]);
        assert_eq!(
            trisector_curve_sample(c, n, &mut last),
            TrisectorStatus::OutOfRange
        );
        assert!(buf[..n].windows(2).all(|w| w[0].t < w[1].t));
        trisector_curve_free(c);
    }
}

#[test]
fn series_seeded_curve_is_invariant() {
    let s = solve(TrisectorBranch::Trisector, 20);
    let mut seed = ptr::null_mut();
    let mut once = ptr::null_mut();
    unsafe {
        assert_eq!(
            trisector_curve_trace_series(s, -0.2, 0.2, 101, 0, &mut seed),
            TrisectorStatus::Ok
        );
        assert_eq!(
            trisector_curve_trace_series(s, -0.2, 0.2, 101, 1, &mut once),
            TrisectorStatus::Ok
        );
        let mut p = TrisectorSample::default();
        assert_eq!(trisector_curve_eval(once, 0.1, &mut p), TrisectorStatus::Ok);
        let mut q = TrisectorSample::default();
        assert_eq!(trisector_curve_eval(seed, p.x, &mut q), TrisectorStatus::Ok);
        assert!((p.y - q.y).abs() < 1e-6, "{p:?} {q:?}");
        trisector_curve_free(seed);
        trisector_curve_free(once);
        trisector_series_free(s);
    }
}

#[test]
fn theta_of_vertex() {
    let mut out = TrisectorSample::default();
    let vertex = TrisectorSample {
        t: 0.0,
        x: 0.0,
        y: 1.0 / 3.0,
        ux: 1.0,
        uy: 0.0,
    };
    assert_eq!(
        unsafe { trisector_theta(vertex, &mut out) },
        TrisectorStatus::Ok
    );
    assert!(out.x.abs() < 1e-15 && (out.y - 1.0 / 3.0).abs() < 1e-15);

    let focus = TrisectorSample { y: 1.0, ..vertex };
    assert_eq!(
        unsafe { trisector_theta(focus, &mut out) },
        TrisectorStatus::Geometry
    );
}

#[test]
fn verify_subset() {
    let only = CString::new("seeds,duality").unwrap();
    let mut json = ptr::null_mut();
    let mut pass = false;
    unsafe {
        assert_eq!(
            trisector_verify(only.as_ptr(), &mut json, &mut pass),
            TrisectorStatus::Ok
        );
        assert!(pass);
        let text = CStr::from_ptr(json).to_str().unwrap();
        assert!(text.contains("\"duality\""));
        assert!(!text.contains("\"census\""));
        trisector_string_free(json);

        let bad = CString::new("nope").unwrap();
        assert_eq!(
            trisector_verify(bad.as_ptr(), &mut json, &mut pass),
            TrisectorStatus::InvalidArgument
        );
        assert!(json.is_null());
    }
}
