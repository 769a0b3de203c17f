//! Geometric events along a sampled curve.
//!
//! Every event is bracketed on the samples and then refined by bisection on
//! the recomputed `Θ` chain, so its accuracy does not depend on how densely
//! the curve was sampled.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::curve::SampledCurve;
use super::frame::{FramedPoint, FOCUS};
use super::vec2::Vec2;

/// Events closer than this in parameter are merged.
pub const MERGE_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    AxisCrossing,
    VerticalTangent,
    HorizontalTangent,
    TangentThroughFocus,
    SelfIntersection,
    /// Crossing of a horizontal line `y = level`.
    LineCrossing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureEvent {
    pub kind: EventKind,
    /// One parameter, or two for self-intersections.
    pub params: Vec<f64>,
    pub location: Vec2,
    pub tangents: Vec<Vec2>,
    /// 2 for a touch without sign change.
    pub multiplicity: u8,
    /// Set for tangencies and for points whose chain went through the focus.
    pub flagged: bool,
    /// Defining quantity at the refined parameter.
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
}

impl FeatureEvent {
    pub fn t(&self) -> f64 {
        self.params[0]
    }
}

fn same_sign(a: f64, b: f64) -> bool {
    (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0)
}

/// Shrinks a sign-changing bracket `[lo, hi]` of `g` along the chain.
fn bisect(
    c: &SampledCurve,
    mut lo: FramedPoint,
    mut hi: FramedPoint,
    g: &dyn Fn(&FramedPoint) -> f64,
) -> FramedPoint {
    let mut glo = g(&lo);
    let mut ghi = g(&hi);
    for _ in 0..200 {
        let width = hi.t() - lo.t();
        if width <= c.event_tol * lo.t().abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo.t() + hi.t());
        if mid <= lo.t() || mid >= hi.t() {
            break;
        }
        let Ok(m) = c.model.frame_along(mid, lo.u()) else {
            break;
        };
        let gm = g(&m);
        if gm == 0.0 {
            return m;
        }
        if same_sign(gm, glo) {
            lo = m;
            glo = gm;
        } else {
            hi = m;
            ghi = gm;
        }
    }
    if glo.abs() <= ghi.abs() {
        lo
    } else {
        hi
    }
}

/// Sign changes and touches of `g` along the samples, refined and merged.
pub fn find_sign_changes(
    c: &SampledCurve,
    kind: EventKind,
    g: &dyn Fn(&FramedPoint) -> f64,
) -> Vec<FeatureEvent> {
    let s = &c.samples;
    let vals: Vec<f64> = s.iter().map(g).collect();
    let mut out: Vec<FeatureEvent> = Vec::new();
    let event = |fp: &FramedPoint, multiplicity: u8| {
        let at_focus = c.flagged.iter().any(|&t| (t - fp.t()).abs() <= MERGE_TOL);
        FeatureEvent {
            kind,
            params: vec![fp.t()],
            location: fp.p(),
            tangents: vec![fp.u()],
            multiplicity,
            flagged: multiplicity > 1 || at_focus,
            residual: g(fp),
            level: None,
        }
    };
    for i in 0..s.len() {
        if vals[i] == 0.0 {
            let before = i.checked_sub(1).map(|j| vals[j]);
            let after = vals.get(i + 1).copied();
            let touch = matches!((before, after), (Some(b), Some(a)) if same_sign(a, b));
            out.push(event(&s[i], if touch { 2 } else { 1 }));
            continue;
        }
        if i + 1 < s.len()
            && c.segment_ok(i)
            && vals[i + 1] != 0.0
            && !same_sign(vals[i], vals[i + 1])
        {
            let fp = bisect(c, s[i], s[i + 1], g);
            out.push(event(&fp, 1));
        }
    }
    merge(out)
}

fn merge(mut events: Vec<FeatureEvent>) -> Vec<FeatureEvent> {
    events.sort_by(|a, b| a.t().total_cmp(&b.t()));
    let mut out: Vec<FeatureEvent> = Vec::with_capacity(events.len());
    for e in events {
        match out.last() {
            Some(last)
                if last.params.len() == e.params.len()
                    && last
                        .params
                        .iter()
                        .zip(&e.params)
                        .all(|(a, b)| (a - b).abs() <= MERGE_TOL) => {}
            _ => out.push(e),
        }
    }
    out
}

/// Vertical and horizontal tangents, ordered by parameter.
pub fn find_tangent_events(c: &SampledCurve) -> Vec<FeatureEvent> {
    let mut v = find_vertical_tangents(c);
    v.extend(find_horizontal_tangents(c));
    v.sort_by(|a, b| a.t().total_cmp(&b.t()).then(a.kind.cmp(&b.kind)));
    v
}

pub fn find_vertical_tangents(c: &SampledCurve) -> Vec<FeatureEvent> {
    find_sign_changes(c, EventKind::VerticalTangent, &|fp| fp.u().x)
}

pub fn find_horizontal_tangents(c: &SampledCurve) -> Vec<FeatureEvent> {
    find_sign_changes(c, EventKind::HorizontalTangent, &|fp| fp.u().y)
}

/// Crossings of the y-axis, ordered by parameter.
pub fn find_axis_crossings(c: &SampledCurve) -> Vec<FeatureEvent> {
    find_sign_changes(c, EventKind::AxisCrossing, &|fp| fp.p().x)
}

/// Points whose tangent line passes through `focus`.
pub fn find_tangent_through_focus(c: &SampledCurve, focus: Vec2) -> Vec<FeatureEvent> {
    find_sign_changes(c, EventKind::TangentThroughFocus, &move |fp| {
        (fp.p() - focus).dot(fp.normal())
    })
}

pub fn find_tangent_through_default_focus(c: &SampledCurve) -> Vec<FeatureEvent> {
    find_tangent_through_focus(c, FOCUS)
}

/// Crossings of the line `y = level`.
pub fn find_line_crossings(c: &SampledCurve, level: f64) -> Vec<FeatureEvent> {
    let mut v = find_sign_changes(c, EventKind::LineCrossing, &move |fp| fp.p().y - level);
    for e in &mut v {
        e.level = Some(level);
    }
    v
}

/// Parameters `(s, r)` in `[0, 1]²` with `a0 + s(a1 − a0) = b0 + r(b1 − b0)`.
fn segment_hit(a0: Vec2, a1: Vec2, b0: Vec2, b1: Vec2) -> Option<(f64, f64)> {
    let da = a1 - a0;
    let db = b1 - b0;
    let denom = da.cross(db);
    let scale = da.norm() * db.norm();
    if scale == 0.0 || denom.abs() <= 1e-12 * scale {
        return None;
    }
    let w = b0 - a0;
    let s = w.cross(db) / denom;
    let r = w.cross(da) / denom;
    ((0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&r)).then_some((s, r))
}

/// Subdivides both parameter intervals around a chord crossing until the
/// chords shrink onto the curve.
fn refine_crossing(
    c: &SampledCurve,
    mut a: (FramedPoint, FramedPoint),
    mut b: (FramedPoint, FramedPoint),
) -> Option<(FramedPoint, FramedPoint)> {
    for _ in 0..80 {
        let wa = a.1.t() - a.0.t();
        let wb = b.1.t() - b.0.t();
        let tiny = |w: f64, t: f64| w <= c.event_tol * t.abs().max(1.0);
        if tiny(wa, a.0.t()) && tiny(wb, b.0.t()) {
            break;
        }
        let halves =
            |(l, r): (FramedPoint, FramedPoint)| -> Option<Vec<(FramedPoint, FramedPoint)>> {
                let mid = 0.5 * (l.t() + r.t());
                if tiny(r.t() - l.t(), l.t()) || mid <= l.t() || mid >= r.t() {
                    return Some(vec![(l, r)]);
                }
                let m = c.model.frame_along(mid, l.u()).ok()?;
                Some(vec![(l, m), (m, r)])
            };
        let ha = halves(a)?;
        let hb = halves(b)?;
        let next = ha
            .iter()
            .flat_map(|x| hb.iter().map(move |y| (*x, *y)))
            .find(|(x, y)| segment_hit(x.0.p(), x.1.p(), y.0.p(), y.1.p()).is_some());
        match next {
            Some((x, y)) => {
                a = x;
                b = y;
            }
            None => break,
        }
    }
    let (s, r) = segment_hit(a.0.p(), a.1.p(), b.0.p(), b.1.p()).unwrap_or((0.5, 0.5));
    let ta = a.0.t() + s * (a.1.t() - a.0.t());
    let tb = b.0.t() + r * (b.1.t() - b.0.t());
    let fa = c.model.frame_along(ta, a.0.u()).ok()?;
    let fb = c.model.frame_along(tb, b.0.u()).ok()?;
    Some((fa, fb))
}

/// Transverse crossings of the sampled polyline with itself.
pub fn find_self_intersections(c: &SampledCurve) -> Vec<FeatureEvent> {
    let s = &c.samples;
    if s.len() < 4 {
        return Vec::new();
    }
    let segs: Vec<usize> = (0..s.len() - 1).filter(|&i| c.segment_ok(i)).collect();
    let cell = segs
        .iter()
        .map(|&i| s[i].p().dist(s[i + 1].p()))
        .fold(0.0f64, f64::max)
        .max(1e-9);
    let key = |v: f64| (v / cell).floor() as i64;
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for &i in &segs {
        let (p, q) = (s[i].p(), s[i + 1].p());
        for gx in key(p.x.min(q.x))..=key(p.x.max(q.x)) {
            for gy in key(p.y.min(q.y))..=key(p.y.max(q.y)) {
                grid.entry((gx, gy)).or_default().push(i);
            }
        }
    }
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for bucket in grid.values() {
        for (k, &i) in bucket.iter().enumerate() {
            for &j in &bucket[k + 1..] {
                let (i, j) = (i.min(j), i.max(j));
                if j > i + 1 {
                    pairs.insert((i, j));
                }
            }
        }
    }
    let mut out = Vec::new();
    for (i, j) in pairs {
        if segment_hit(s[i].p(), s[i + 1].p(), s[j].p(), s[j + 1].p()).is_none() {
            continue;
        }
        let Some((fa, fb)) = refine_crossing(c, (s[i], s[i + 1]), (s[j], s[j + 1])) else {
            continue;
        };
        out.push(FeatureEvent {
            kind: EventKind::SelfIntersection,
            params: vec![fa.t(), fb.t()],
            location: (fa.p() + fb.p()) * 0.5,
            tangents: vec![fa.u(), fb.u()],
            multiplicity: 1,
            flagged: false,
            residual: fa.p().dist(fb.p()),
            level: None,
        });
    }
    merge(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::curve::{trace, RefineOptions, SeedKind};

    fn parabola(n: usize, iterations: usize, domain: (f64, f64)) -> SampledCurve {
        trace(
            SeedKind::Parabola,
            domain,
            n,
            iterations,
            &RefineOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn vertex_events_of_seed() {
        let c = parabola(201, 0, (-1.0, 1.0));
        let h = find_horizontal_tangents(&c);
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].t(), 0.0);
        assert_eq!(h[0].location, Vec2::new(0.0, 1.0 / 3.0));
        let x = find_axis_crossings(&c);
        assert_eq!(x.len(), 1);
        assert_eq!(x[0].t(), 0.0);
        assert!(find_vertical_tangents(&c).is_empty());
    }

    #[test]
    fn seed_focus_tangents_match_dense_scan() {
        // Tangent line of (t, 1/3 − t²) through (0, 1): t² = −2/3 has no
        // real root, so there are none on the seed itself.
        let c = parabola(401, 0, (-1.0, 1.0));
        let events = find_tangent_through_default_focus(&c);
        let n = 100_000;
        let g = |t: f64| {
            let d = Vec2::new(t, 1.0 / 3.0 - t * t) - FOCUS;
            d.dot(Vec2::new(1.0, -2.0 * t).perp())
        };
        let dense = (0..n)
            .filter(|&i| {
                let a = -1.0 + 2.0 * i as f64 / n as f64;
                let b = -1.0 + 2.0 * (i + 1) as f64 / n as f64;
                g(a) * g(b) <= 0.0
            })
            .count();
        assert_eq!(events.len(), dense);
    }

    #[test]
    fn line_crossings_of_seed() {
        let c = parabola(201, 0, (-1.0, 1.0));
        let e = find_line_crossings(&c, 0.0);
        assert_eq!(e.len(), 2);
        let root = (1.0f64 / 3.0).sqrt();
        assert!((e[0].t() + root).abs() < 1e-13);
        assert!((e[1].t() - root).abs() < 1e-13);
        assert_eq!(e[0].level, Some(0.0));
    }

    #[test]
    fn touch_is_reported_with_multiplicity_two() {
        // u_x of the seed is positive everywhere; the line y = 1/3 touches
        // the vertex.
        let c = parabola(201, 0, (-1.0, 1.0));
        let e = find_line_crossings(&c, 1.0 / 3.0);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].multiplicity, 2);
        assert!(e[0].flagged);
    }

    #[test]
    fn segment_hits() {
        let o = Vec2::new(0.0, 0.0);
        let hit = segment_hit(
            o,
            Vec2::new(2.0, 2.0),
            Vec2::new(0.0, 2.0),
            Vec2::new(2.0, 0.0),
        );
        assert_eq!(hit, Some((0.5, 0.5)));
        assert_eq!(
            segment_hit(
                o,
                Vec2::new(1.0, 0.0),
                Vec2::new(0.0, 1.0),
                Vec2::new(1.0, 1.0)
            ),
            None
        );
    }

    #[test]
    fn events_are_reproducible() {
        let c = parabola(801, 5, (-0.2, 0.2));
        let a = (find_tangent_events(&c), find_self_intersections(&c));
        let b = (find_tangent_events(&c), find_self_intersections(&c));
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }
}
