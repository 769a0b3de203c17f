//! Envelope points computed directly from the circle family.
//!
//! The circle centred at `(a, b)` through the focus `(0, 1)` is
//! `F = x² − 2ax + y² − 2by + 2b − 1 = 0`, and `∂F/∂t = 0` reads
//! `a′x = b′(1 − y)`. Eliminating one coordinate leaves a quadratic with
//! the focus as one root; the other root is the envelope point.

use crate::error::AnalysisError;
use crate::geometry::{envelope_point, FramedPoint, SeedKind, Vec2, FOCUS};

/// A differentiable arc `t ↦ (a(t), b(t))`.
pub trait Arc {
    /// Position and velocity at `t`.
    fn jet(&self, t: f64) -> (Vec2, Vec2);
}

/// `t ↦ (t, 1/3 − t²)`.
pub struct ParabolaArc;

impl Arc for ParabolaArc {
    fn jet(&self, t: f64) -> (Vec2, Vec2) {
        (Vec2::new(t, 1.0 / 3.0 - t * t), Vec2::new(1.0, -2.0 * t))
    }
}

/// `t ↦ origin + t·direction`.
pub struct LineArc {
    pub origin: Vec2,
    pub direction: Vec2,
}

impl Arc for LineArc {
    fn jet(&self, t: f64) -> (Vec2, Vec2) {
        (self.origin + self.direction * t, self.direction)
    }
}

/// Envelope point of the circle family of `arc` at `fp.t()`.
pub fn envelope_oracle(fp: &FramedPoint, arc: &dyn Arc) -> Result<Vec2, AnalysisError> {
    let t = fp.t();
    let (Vec2 { x: a, y: b }, Vec2 { x: da, y: db }) = arc.jet(t);
    if da == 0.0 && db == 0.0 {
        return Err(AnalysisError::NonRegular { t });
    }
    if da.abs() >= db.abs() {
        // x = w r with w = 1 − y
        let r = db / da;
        let w = 2.0 * (1.0 + r * a - b) / (1.0 + r * r);
        Ok(Vec2::new(w * r, 1.0 - w))
    } else {
        // 1 − y = r x
        let r = da / db;
        let x = 2.0 * (a + r - r * b) / (1.0 + r * r);
        Ok(Vec2::new(x, 1.0 - r * x))
    }
}

/// Relative error of `‖dβ/ds‖ = 2|κ| ‖α − F‖` on the parabola seed at `t`,
/// with `dβ/dt` from central differences of step `h`.
pub fn curvature_identity_error(t: f64, h: f64) -> Result<f64, AnalysisError> {
    let beta = |t: f64| -> Result<Vec2, AnalysisError> {
        Ok(envelope_point(&SeedKind::Parabola.frame(t)?)?.point.p())
    };
    let dbeta = (beta(t + h)? - beta(t - h)?) * (0.5 / h);
    let (p, v) = ParabolaArc.jet(t);
    let speed = v.norm();
    let kappa = -2.0 / speed.powi(3);
    let lhs = dbeta.norm() / speed;
    let rhs = 2.0 * kappa.abs() * (p - FOCUS).norm();
    Ok((lhs - rhs).abs() / rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn frame(p: Vec2, u: Vec2, t: f64) -> FramedPoint {
        FramedPoint::new(t, p, u).unwrap()
    }

    #[test]
    fn horizontal_line_gives_mirror_focus() {
        let arc = LineArc {
            origin: Vec2::new(0.0, 0.0),
            direction: Vec2::new(1.0, 0.0),
        };
        for t in [-3.0, 0.0, 0.7, 12.0] {
            let q =
                envelope_oracle(&frame(Vec2::new(t, 0.0), Vec2::new(1.0, 0.0), t), &arc).unwrap();
            assert!(q.dist(Vec2::new(0.0, -1.0)) < 1e-15);
        }
    }

    #[test]
    fn vertex_with_horizontal_tangent() {
        let fp = frame(Vec2::new(0.0, 1.0 / 3.0), Vec2::new(1.0, 0.0), 0.0);
        let q = envelope_oracle(&fp, &ParabolaArc).unwrap();
        assert!(q.dist(Vec2::new(0.0, -1.0 / 3.0)) < 1e-15);
    }

    #[test]
    fn steep_arc_uses_swapped_substitution() {
        let arc = LineArc {
            origin: Vec2::new(2.0, 0.0),
            direction: Vec2::new(0.0, 1.0),
        };
        let fp = frame(Vec2::new(2.0, 0.5), Vec2::new(0.0, 1.0), 0.5);
        let q = envelope_oracle(&fp, &arc).unwrap();
        // Circles centred on x = 2 through (0, 1) share its mirror (4, 1).
        assert!(q.dist(Vec2::new(4.0, 1.0)) < 1e-15);
        assert!(q.dist(envelope_point(&fp).unwrap().point.p()) < 1e-12);
    }

    #[test]
    fn stationary_arc_is_rejected() {
        let arc = LineArc {
            origin: Vec2::new(1.0, 0.0),
            direction: Vec2::new(0.0, 0.0),
        };
        let fp = frame(Vec2::new(1.0, 0.0), Vec2::new(1.0, 0.0), 0.25);
        assert_eq!(
            envelope_oracle(&fp, &arc).unwrap_err(),
            AnalysisError::NonRegular { t: 0.25 }
        );
    }

    #[test]
    fn parabola_half_matches_closed_form() {
        let fp = SeedKind::Parabola.frame(0.5).unwrap();
        let q = envelope_oracle(&fp, &ParabolaArc).unwrap();
        assert!(q.dist(envelope_point(&fp).unwrap().point.p()) < 1e-9);
    }

    #[test]
    fn curvature_identity_on_seed() {
        for t in [-0.9, -0.3, 0.0, 0.2, 0.8] {
            assert!(curvature_identity_error(t, 1e-5).unwrap() < 1e-4);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn oracle_agrees_with_closed_form(t in -1.0..1.0f64) {
            let fp = SeedKind::Parabola.frame(t).unwrap();
            let q = envelope_oracle(&fp, &ParabolaArc).unwrap();
            prop_assert!(q.dist(envelope_point(&fp).unwrap().point.p()) < 1e-9);
        }
    }
}
