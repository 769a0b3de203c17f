//! Framed points and the pointwise envelope map.
//!
//! For a curve point `p` with unit tangent `u`, the circle centred at `p`
//! through the focus `F = (0, 1)` touches the envelope of the whole circle
//! family at `F + 2⟨p − F, n⟩ n` with `n = perp(u)`. Its tangent there is
//! `−⟨v, u⟩ n − ⟨v, n⟩ u` where `v` is the unit vector from `F` to `p`.

use serde::{Deserialize, Serialize};

use super::vec2::Vec2;
use crate::error::GeometryError;

pub const FOCUS: Vec2 = Vec2::new(0.0, 1.0);
pub const MIRROR_FOCUS: Vec2 = Vec2::new(0.0, -1.0);

/// Relative size of `⟨p − F, n⟩` below which the envelope point is taken
/// to be the focus.
const FOCUS_EPS: f64 = 4.0 * f64::EPSILON;

/// Parameter, position and unit tangent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FramedPoint {
    t: f64,
    p: Vec2,
    u: Vec2,
}

impl FramedPoint {
    /// Normalizes `u`. Rejects the focus and zero tangents.
    pub fn new(t: f64, p: Vec2, u: Vec2) -> Result<Self, GeometryError> {
        if p == FOCUS {
            return Err(GeometryError::DegenerateFocus);
        }
        let u = u.normalized().ok_or(GeometryError::ZeroTangent)?;
        Ok(FramedPoint { t, p, u })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn p(&self) -> Vec2 {
        self.p
    }

    pub fn u(&self) -> Vec2 {
        self.u
    }

    pub fn normal(&self) -> Vec2 {
        self.u.perp()
    }

    pub fn with_t(self, t: f64) -> Self {
        FramedPoint { t, ..self }
    }

    pub fn flipped(self) -> Self {
        FramedPoint { u: -self.u, ..self }
    }

    /// Flips the tangent if it points against `reference`.
    pub fn oriented_along(self, reference: Vec2) -> Self {
        if self.u.dot(reference) < 0.0 {
            self.flipped()
        } else {
            self
        }
    }
}

/// Image of a framed point under the envelope map or under `Θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Image {
    pub point: FramedPoint,
    /// The tangent line of the source passes through the focus.
    pub at_focus: bool,
}

pub fn envelope_point(fp: &FramedPoint) -> Result<Image, GeometryError> {
    let d = fp.p - FOCUS;
    let r = d.norm();
    if r == 0.0 {
        return Err(GeometryError::DegenerateFocus);
    }
    let n = fp.normal();
    let s = d.dot(n);
    let at_focus = s.abs() <= FOCUS_EPS * r;
    let p = if at_focus {
        FOCUS
    } else {
        FOCUS + n * (2.0 * s)
    };
    let v = d * (1.0 / r);
    let tangent = (n * -v.dot(fp.u) - fp.u * v.dot(n))
        .normalized()
        .ok_or(GeometryError::ZeroTangent)?;
    Ok(Image {
        point: FramedPoint {
            t: fp.t,
            p,
            u: tangent,
        },
        at_focus,
    })
}

/// `Θ`: the envelope map followed by reflection across the x-axis.
pub fn theta_point(fp: &FramedPoint) -> Result<Image, GeometryError> {
    let img = envelope_point(fp)?;
    Ok(Image {
        point: FramedPoint {
            t: img.point.t,
            p: img.point.p.mirror_x(),
            u: img.point.u.mirror_x(),
        },
        at_focus: img.at_focus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(x: f64, y: f64, ux: f64, uy: f64) -> FramedPoint {
        FramedPoint::new(0.0, Vec2::new(x, y), Vec2::new(ux, uy)).unwrap()
    }

    fn close(a: Vec2, b: Vec2, tol: f64) -> bool {
        a.dist(b) <= tol
    }

    #[test]
    fn construction_rejects_focus_and_zero_tangent() {
        assert_eq!(
            FramedPoint::new(0.0, FOCUS, Vec2::new(1.0, 0.0)).unwrap_err(),
            GeometryError::DegenerateFocus
        );
        assert_eq!(
            FramedPoint::new(0.0, Vec2::new(1.0, 0.0), Vec2::default()).unwrap_err(),
            GeometryError::ZeroTangent
        );
        let p = FramedPoint::new(0.0, Vec2::new(1.0, 0.0), Vec2::new(3.0, 4.0)).unwrap();
        assert!((p.u().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vertex_of_parabola() {
        let img = envelope_point(&fp(0.0, 1.0 / 3.0, 1.0, 0.0)).unwrap();
        assert!(close(img.point.p(), Vec2::new(0.0, -1.0 / 3.0), 1e-15));
        assert!(close(img.point.u(), Vec2::new(1.0, 0.0), 1e-15));
        let th = theta_point(&fp(0.0, 1.0 / 3.0, 1.0, 0.0)).unwrap();
        assert!(close(th.point.p(), Vec2::new(0.0, 1.0 / 3.0), 1e-15));
        assert!(close(th.point.u(), Vec2::new(1.0, 0.0), 1e-15));
    }

    #[test]
    fn circles_centred_on_x_axis_share_mirror_focus() {
        let img = envelope_point(&fp(5.0, 0.0, 1.0, 0.0)).unwrap();
        assert!(close(img.point.p(), MIRROR_FOCUS, 1e-15));
    }

    #[test]
    fn tangent_through_focus_maps_to_mirror_focus() {
        // Line through (2, −3) and the focus.
        let p = Vec2::new(2.0, -3.0);
        let u = FOCUS - p;
        let th = theta_point(&FramedPoint::new(0.0, p, u).unwrap()).unwrap();
        assert!(th.at_focus);
        assert_eq!(th.point.p(), MIRROR_FOCUS);
    }

    fn framed() -> impl Strategy<Value = FramedPoint> {
        (-5.0..5.0f64, -5.0..5.0f64, 0.0..std::f64::consts::TAU).prop_filter_map(
            "away from focus",
            |(x, y, a)| {
                let p = Vec2::new(x, y);
                (p.dist(FOCUS) > 1e-3)
                    .then(|| FramedPoint::new(0.0, p, Vec2::new(a.cos(), a.sin())).unwrap())
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn orientation_invariance(f in framed()) {
            let a = envelope_point(&f).unwrap().point;
            let b = envelope_point(&f.flipped()).unwrap().point;
            prop_assert!(a.p().dist(b.p()) <= 1e-12 * (1.0 + a.p().norm()));
            prop_assert!(a.u().line_angle(b.u()) <= 1e-7);
            prop_assert!((a.u().norm() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn envelope_point_is_parallel_to_normal(f in framed()) {
            let beta = theta_point(&f).unwrap().point.p().mirror_x();
            let seg = beta - FOCUS;
            prop_assert!(seg.cross(f.normal()).abs() <= 1e-8 * (1.0 + seg.norm()));
        }

        #[test]
        fn envelope_point_lies_on_circle(f in framed()) {
            let beta = theta_point(&f).unwrap().point.p().mirror_x();
            let r = f.p().dist(FOCUS);
            prop_assert!((beta.dist(f.p()) - r).abs() <= 1e-9 * (1.0 + r));
        }
    }
}
