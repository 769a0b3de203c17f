//! Seed arcs, the iterated `Θ` chain and adaptively sampled curves.

use serde::{Deserialize, Serialize};

use super::frame::{theta_point, FramedPoint};
use super::vec2::Vec2;
use crate::branch::{Branch, BranchSolution};
use crate::error::GeometryError;
use crate::series::horner;

/// Relative change between the last two partial sums above which a series
/// evaluation is rejected.
pub const SERIES_TRUST: f64 = 0.1;

/// The analytic arc every traced curve starts from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeedKind {
    /// `t ↦ (t, 1/3 − t²)`.
    Parabola,
    /// `t ↦ (t, f(t))` for a truncated branch series.
    Series {
        branch: Branch,
        order: usize,
        coeffs: Vec<f64>,
    },
}

impl SeedKind {
    pub fn from_solution(s: &BranchSolution) -> Self {
        SeedKind::Series {
            branch: s.branch,
            order: s.order,
            coeffs: s.f_series.to_f64_coeffs(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SeedKind::Parabola => "parabola y = 1/3 - t^2".to_string(),
            SeedKind::Series { branch, order, .. } => {
                format!("{branch} branch series, order {order}")
            }
        }
    }

    pub fn frame(&self, t: f64) -> Result<FramedPoint, GeometryError> {
        match self {
            SeedKind::Parabola => {
                FramedPoint::new(t, Vec2::new(t, 1.0 / 3.0 - t * t), Vec2::new(1.0, -2.0 * t))
            }
            SeedKind::Series { coeffs, .. } => {
                let y = horner(coeffs, t);
                if coeffs.len() > 2 {
                    let shorter = horner(&coeffs[..coeffs.len() - 2], t);
                    if !y.is_finite() || (y - shorter).abs() > SERIES_TRUST * y.abs() {
                        return Err(GeometryError::SeriesUntrusted { t });
                    }
                }
                let deriv: Vec<f64> = coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, c)| i as f64 * c)
                    .collect();
                FramedPoint::new(t, Vec2::new(t, y), Vec2::new(1.0, horner(&deriv, t)))
            }
        }
    }
}

/// A seed arc followed by a fixed number of `Θ` applications.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveModel {
    pub seed: SeedKind,
    pub iterations: usize,
}

/// A framed point of the chain and whether any step went through the focus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainPoint {
    pub point: FramedPoint,
    pub at_focus: bool,
}

impl CurveModel {
    pub fn new(seed: SeedKind, iterations: usize) -> Self {
        CurveModel { seed, iterations }
    }

    /// Unoriented framed point at `t`.
    pub fn eval(&self, t: f64) -> Result<ChainPoint, GeometryError> {
        let mut point = self.seed.frame(t)?;
        let mut at_focus = false;
        for _ in 0..self.iterations {
            let img = theta_point(&point)?;
            point = img.point;
            at_focus |= img.at_focus;
        }
        Ok(ChainPoint { point, at_focus })
    }

    /// Framed point at `t` with its tangent turned towards `reference`.
    pub fn frame_along(&self, t: f64, reference: Vec2) -> Result<FramedPoint, GeometryError> {
        Ok(self.eval(t)?.point.oriented_along(reference))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefineOptions {
    /// Largest turn of the tangent line between neighbours, in radians.
    pub angle_bound: f64,
    /// Largest distance between neighbours.
    pub arc_bound: f64,
    /// Parameter gaps below this are not split further.
    pub min_step: f64,
    pub max_samples: usize,
    /// Relative parameter width at which event bisection stops.
    pub event_tol: f64,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            angle_bound: 0.2,
            arc_bound: 0.05,
            min_step: 1e-12,
            max_samples: 2_000_000,
            event_tol: 1e-14,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledCurve {
    pub model: CurveModel,
    pub samples: Vec<FramedPoint>,
    /// Parameters whose chain evaluation failed. Segments spanning one of
    /// these are broken.
    pub gaps: Vec<f64>,
    /// Sample parameters whose chain passed through the focus.
    pub flagged: Vec<f64>,
    /// Intervals that still violate a bound at `min_step`.
    pub unresolved: usize,
    pub event_tol: f64,
}

impl SampledCurve {
    pub fn generation(&self) -> usize {
        self.model.iterations
    }

    pub fn seed_descriptor(&self) -> String {
        self.model.seed.describe()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn domain(&self) -> Option<(f64, f64)> {
        Some((self.samples.first()?.t(), self.samples.last()?.t()))
    }

    /// Whether the segment from sample `i` to `i + 1` is continuous.
    pub fn segment_ok(&self, i: usize) -> bool {
        let (a, b) = (self.samples[i].t(), self.samples[i + 1].t());
        let k = self.gaps.partition_point(|&g| g <= a);
        self.gaps.get(k).is_none_or(|&g| g >= b)
    }

    /// Framed point at `t` oriented consistently with the nearest sample.
    pub fn frame_at(&self, t: f64) -> Result<FramedPoint, GeometryError> {
        let k = self.samples.partition_point(|s| s.t() < t);
        let near = match (k.checked_sub(1), self.samples.get(k)) {
            (Some(i), Some(b)) if (t - self.samples[i].t()) < (b.t() - t) => self.samples[i],
            (_, Some(b)) => *b,
            (Some(i), None) => self.samples[i],
            (None, None) => return self.model.eval(t).map(|c| c.point),
        };
        self.model.frame_along(t, near.u())
    }

    pub fn positions(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.samples.iter().map(FramedPoint::p)
    }
}

fn uniform(domain: (f64, f64), n: usize) -> Result<Vec<f64>, GeometryError> {
    let (lo, hi) = domain;
    if n < 2 || !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(GeometryError::BadDomain);
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect())
}

/// Generation-0 curve sampled uniformly, without refinement.
pub fn seed_curve(
    seed: SeedKind,
    domain: (f64, f64),
    n_samples: usize,
) -> Result<SampledCurve, GeometryError> {
    let ts = uniform(domain, n_samples)?;
    let mut curve = SampledCurve {
        model: CurveModel::new(seed, 0),
        samples: Vec::with_capacity(ts.len()),
        gaps: Vec::new(),
        flagged: Vec::new(),
        unresolved: 0,
        event_tol: RefineOptions::default().event_tol,
    };
    for t in ts {
        match curve.model.seed.frame(t) {
            Ok(fp) => curve.samples.push(fp),
            Err(_) => curve.gaps.push(t),
        }
    }
    orient(&mut curve.samples);
    Ok(curve)
}

/// Applies `Θ` `n` more times to every sample of `seed`, then refines.
pub fn iterate_curve(
    seed: &SampledCurve,
    n: usize,
    opts: &RefineOptions,
) -> Result<SampledCurve, GeometryError> {
    if n == 0 {
        return Err(GeometryError::NoIterations);
    }
    let model = CurveModel::new(seed.model.seed.clone(), seed.model.iterations + n);
    let mut ts: Vec<f64> = seed.samples.iter().map(FramedPoint::t).collect();
    ts.extend(&seed.gaps);
    ts.sort_by(f64::total_cmp);
    build(model, &ts, opts)
}

/// Seed, iterate and refine in one step. `iterations = 0` gives the refined
/// seed arc.
pub fn trace(
    seed: SeedKind,
    domain: (f64, f64),
    n_samples: usize,
    iterations: usize,
    opts: &RefineOptions,
) -> Result<SampledCurve, GeometryError> {
    let ts = uniform(domain, n_samples)?;
    build(CurveModel::new(seed, iterations), &ts, opts)
}

fn needs_split(a: &FramedPoint, b: &FramedPoint, opts: &RefineOptions) -> bool {
    a.u().line_angle(b.u()) > opts.angle_bound || a.p().dist(b.p()) > opts.arc_bound
}

fn build(
    model: CurveModel,
    ts: &[f64],
    opts: &RefineOptions,
) -> Result<SampledCurve, GeometryError> {
    let mut curve = SampledCurve {
        model,
        samples: Vec::new(),
        gaps: Vec::new(),
        flagged: Vec::new(),
        unresolved: 0,
        event_tol: opts.event_tol,
    };
    let mut prev: Option<FramedPoint> = None;
    for &t in ts {
        let cp = match curve.model.eval(t) {
            Ok(cp) => cp,
            Err(_) => {
                curve.gaps.push(t);
                prev = None;
                continue;
            }
        };
        if let Some(a) = prev {
            refine_between(&mut curve, a, cp.point, opts)?;
        }
        if cp.at_focus {
            curve.flagged.push(t);
        }
        curve.samples.push(cp.point);
        if curve.samples.len() > opts.max_samples {
            return Err(GeometryError::TooManySamples(opts.max_samples));
        }
        prev = Some(cp.point);
    }
    curve.gaps.sort_by(f64::total_cmp);
    orient(&mut curve.samples);
    Ok(curve)
}

/// Pushes the interior samples needed between `a` and `b`, excluding both.
fn refine_between(
    curve: &mut SampledCurve,
    a: FramedPoint,
    b: FramedPoint,
    opts: &RefineOptions,
) -> Result<(), GeometryError> {
    let mut stack = vec![(a, b)];
    while let Some((l, r)) = stack.pop() {
        if !needs_split(&l, &r, opts) {
            if l.t() != a.t() {
                curve.samples.push(l);
            }
            continue;
        }
        let mid = 0.5 * (l.t() + r.t());
        if r.t() - l.t() <= opts.min_step || mid <= l.t() || mid >= r.t() {
            curve.unresolved += 1;
            if l.t() != a.t() {
                curve.samples.push(l);
            }
            continue;
        }
        match curve.model.eval(mid) {
            Ok(cp) => {
                if cp.at_focus {
                    curve.flagged.push(mid);
                }
                // Right half first so the left half is emitted first.
                stack.push((cp.point, r));
                stack.push((l, cp.point));
            }
            Err(_) => {
                curve.gaps.push(mid);
                if l.t() != a.t() {
                    curve.samples.push(l);
                }
            }
        }
        if curve.samples.len() > opts.max_samples {
            return Err(GeometryError::TooManySamples(opts.max_samples));
        }
    }
    Ok(())
}

/// Turns tangents so that neighbours agree, starting from the direction of
/// travel at the first sample.
fn orient(samples: &mut [FramedPoint]) {
    if samples.len() >= 2 {
        let chord = samples[1].p() - samples[0].p();
        samples[0] = samples[0].oriented_along(chord);
    }
    for i in 1..samples.len() {
        samples[i] = samples[i].oriented_along(samples[i - 1].u());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branch::solve_branch;

    #[test]
    fn parabola_seed_samples() {
        let c = seed_curve(SeedKind::Parabola, (-1.0, 1.0), 3).unwrap();
        let want = [(-1.0, -2.0 / 3.0), (0.0, 1.0 / 3.0), (1.0, -2.0 / 3.0)];
        for (p, w) in c.positions().zip(want) {
            assert!(p.dist(w.into()) < 1e-15);
        }
        assert_eq!(c.samples[1].u(), Vec2::new(1.0, 0.0));
        assert_eq!(c.generation(), 0);
    }

    #[test]
    fn bad_domains() {
        assert_eq!(
            seed_curve(SeedKind::Parabola, (1.0, 1.0), 10).unwrap_err(),
            GeometryError::BadDomain
        );
        assert_eq!(
            seed_curve(SeedKind::Parabola, (0.0, 1.0), 1).unwrap_err(),
            GeometryError::BadDomain
        );
        let c = seed_curve(SeedKind::Parabola, (0.0, 1.0), 2).unwrap();
        assert_eq!(
            iterate_curve(&c, 0, &RefineOptions::default()).unwrap_err(),
            GeometryError::NoIterations
        );
    }

    #[test]
    fn series_seed_matches_float_evaluation() {
        let s = solve_branch(Branch::Conjugate, 4).unwrap();
        let seed = SeedKind::from_solution(&s);
        let fp = seed.frame(0.1).unwrap();
        assert_eq!(fp.p().y, s.f_series.eval_f64(0.1));
        let want_slope = s.f_series.derive().unwrap().eval_f64(0.1);
        assert!((fp.u().y / fp.u().x - want_slope).abs() < 1e-14);
    }

    #[test]
    fn series_seed_rejects_far_parameters() {
        let s = solve_branch(Branch::Conjugate, 12).unwrap();
        let seed = SeedKind::from_solution(&s);
        assert!(seed.frame(0.05).is_ok());
        assert!(matches!(
            seed.frame(3.0),
            Err(GeometryError::SeriesUntrusted { .. })
        ));
    }

    #[test]
    fn vertex_is_fixed_by_every_iteration() {
        for n in 1..6 {
            let cp = CurveModel::new(SeedKind::Parabola, n).eval(0.0).unwrap();
            assert!(cp.point.p().dist(Vec2::new(0.0, 1.0 / 3.0)) < 1e-14);
            assert!(cp.point.u().line_angle(Vec2::new(1.0, 0.0)) < 1e-15);
        }
    }

    #[test]
    fn refinement_bounds_hold() {
        let opts = RefineOptions::default();
        let c = trace(SeedKind::Parabola, (-0.2, 0.2), 101, 5, &opts).unwrap();
        assert_eq!(c.unresolved, 0);
        for (i, w) in c.samples.windows(2).enumerate() {
            assert!(w[0].t() < w[1].t());
            if c.segment_ok(i) {
                assert!(!needs_split(&w[0], &w[1], &opts));
                assert!(w[0].u().dot(w[1].u()) > 0.0);
            }
        }
    }

    #[test]
    fn iterate_matches_direct_trace() {
        let opts = RefineOptions::default();
        let seed = seed_curve(SeedKind::Parabola, (-0.1, 0.1), 201).unwrap();
        let a = iterate_curve(&seed, 3, &opts).unwrap();
        let b = trace(SeedKind::Parabola, (-0.1, 0.1), 201, 3, &opts).unwrap();
        assert_eq!(a, b);
        let again = iterate_curve(&seed, 3, &opts).unwrap();
        assert_eq!(a, again);
    }
}
