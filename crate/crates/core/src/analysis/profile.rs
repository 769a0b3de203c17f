//! Local minima of the squared distance from a point to a traced curve.

use serde::{Deserialize, Serialize};

use crate::geometry::{SampledCurve, Vec2};

/// Golden-section search stops at this parameter width.
pub const PROFILE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalMin {
    pub t: f64,
    pub dist_sq: f64,
    pub point: Vec2,
}

/// Minimizes a unimodal `f` on `[a, b]`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    0.5 * (a + b)
}

/// Interior local minima of `t ↦ ‖q − c(t)‖²`, sorted by parameter.
pub fn distance_profile(q: Vec2, c: &SampledCurve) -> Vec<LocalMin> {
    let s = &c.samples;
    let d: Vec<f64> = s.iter().map(|fp| (fp.p() - q).norm_sq()).collect();
    let eval = |t: f64| {
        c.model
            .eval(t)
            .map(|cp| (cp.point.p() - q).norm_sq())
            .unwrap_or(f64::INFINITY)
    };
    let mut out: Vec<LocalMin> = Vec::new();
    for i in 1..s.len().saturating_sub(1) {
        if !(d[i] < d[i - 1] && d[i] <= d[i + 1]) || !c.segment_ok(i - 1) || !c.segment_ok(i) {
            continue;
        }
        let t = golden_section(eval, s[i - 1].t(), s[i + 1].t(), PROFILE_TOL);
        let Ok(cp) = c.model.eval(t) else { continue };
        let m = LocalMin {
            t,
            dist_sq: (cp.point.p() - q).norm_sq(),
            point: cp.point.p(),
        };
        // A plateau over two samples yields the same minimum twice.
        if out.last().is_none_or(|l| (l.t - t).abs() > 1e-7) {
            out.push(m);
        }
    }
    out
}

/// The minimum with the smallest squared distance.
pub fn global_min(minima: &[LocalMin]) -> Option<LocalMin> {
    minima
        .iter()
        .copied()
        .min_by(|a, b| a.dist_sq.total_cmp(&b.dist_sq))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{trace, RefineOptions, SeedKind};

    #[test]
    fn golden_section_finds_quadratic_minimum() {
        let t = golden_section(|x| (x - 0.3).powi(2), 0.0, 1.0, 1e-12);
        assert!((t - 0.3).abs() < 1e-9);
    }

    #[test]
    fn point_on_curve_is_a_zero_minimum() {
        let c = trace(
            SeedKind::Parabola,
            (-1.0, 1.0),
            401,
            2,
            &RefineOptions::default(),
        )
        .unwrap();
        let t0 = 0.0123;
        let q = c.model.eval(t0).unwrap().point.p();
        let mins = distance_profile(q, &c);
        let hit = mins
            .iter()
            .find(|m| (m.t - t0).abs() < 1e-6)
            .expect("minimum at the matching parameter");
        assert!(hit.dist_sq < 1e-12);
    }

    #[test]
    fn parabola_from_inside_focus() {
        // From (0, 2) the parabola y = 1/3 − t² is closest at its vertex.
        let c = trace(
            SeedKind::Parabola,
            (-1.0, 1.0),
            201,
            0,
            &RefineOptions::default(),
        )
        .unwrap();
        let mins = distance_profile(Vec2::new(0.0, 2.0), &c);
        assert_eq!(mins.len(), 1);
        assert!(mins[0].t.abs() < 1e-7);
        assert!((mins[0].dist_sq - (5.0f64 / 3.0).powi(2)).abs() < 1e-12);
    }
}
