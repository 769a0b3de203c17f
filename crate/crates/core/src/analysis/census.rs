//! Census of y-axis crossings, horizontal and vertical tangents, and
//! crossings of the lines `y = ±1` along the forward half of a curve.
//!
//! With `C_n`, `H_n`, `V_n` the n-th crossing, horizontal tangent and
//! vertical tangent at parameters `t_n`, `u_n`, `s_n` (counted from `t = 0`),
//! a census of depth `d` checks
//!
//! * `sign y(t_n) = (−1)^n` for `n ≤ d`,
//! * `|y(t_n) − 1| ≥ 2^(n−1)` for `1 ≤ n ≤ d`,
//! * `t_n < u_n < s_n < t_(n+1)` for `n < d` (`t_0 = u_0 = 0`, so the first
//!   comparison is not strict at `n = 0`),
//! * `|x(s_(n+1))| > 2 |x(s_n)|` and `|y(u_(n+1))| > 2 |y(u_n)|` for `n + 1 < d`,
//! * `|y(t_n)| < |y(t_(n+1))|` for `n < d`,
//! * `|y(t_2)| > 3` when `d ≥ 2`.
//!
//! Vertical tangents are compared through `|x|`: the curve winds so that the
//! forward half may sit on either side of the axis.

use serde::{Deserialize, Serialize};

use crate::geometry::events::{
    find_axis_crossings, find_horizontal_tangents, find_line_crossings, find_vertical_tangents,
    FeatureEvent,
};
use crate::geometry::{SampledCurve, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    InsufficientTrace,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusCheck {
    pub name: String,
    pub index: usize,
    pub status: CheckStatus,
    /// Amount by which the inequality holds. Negative on failure.
    pub margin: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusPoint {
    pub param: f64,
    pub point: Vec2,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinePoint {
    pub param: f64,
    pub point: Vec2,
    pub level: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub depth: usize,
    pub crossings: Vec<CensusPoint>,
    pub horizontals: Vec<CensusPoint>,
    pub verticals: Vec<CensusPoint>,
    pub line_points: Vec<LinePoint>,
    pub checks: Vec<CensusCheck>,
    pub verdict: CheckStatus,
}

impl CensusReport {
    /// Overall status of the checks that involve indices up to `depth`.
    pub fn status_at(&self, depth: usize) -> CheckStatus {
        combine(
            self.checks
                .iter()
                .filter(|c| check_depth(c) <= depth)
                .map(|c| c.status),
        )
    }

    pub fn checks_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a CensusCheck> + 'a {
        self.checks.iter().filter(move |c| c.name == name)
    }
}

/// Smallest depth whose census contains the check.
fn check_depth(c: &CensusCheck) -> usize {
    match c.name.as_str() {
        "sign_alternation" | "crossing_gap" => c.index,
        "interleaving" | "crossing_growth" => c.index + 1,
        "vertical_doubling" | "horizontal_doubling" => c.index + 2,
        "beyond_three" => 2,
        _ => c.index,
    }
}

fn combine(statuses: impl Iterator<Item = CheckStatus>) -> CheckStatus {
    let mut out = CheckStatus::Pass;
    for s in statuses {
        match s {
            CheckStatus::Fail => return CheckStatus::Fail,
            CheckStatus::InsufficientTrace => out = CheckStatus::InsufficientTrace,
            CheckStatus::Pass => {}
        }
    }
    out
}

fn forward(events: Vec<FeatureEvent>) -> Vec<CensusPoint> {
    events
        .into_iter()
        .filter(|e| e.t() >= 0.0)
        .map(|e| CensusPoint {
            param: e.t(),
            point: e.location,
        })
        .collect()
}

struct Builder {
    checks: Vec<CensusCheck>,
}

impl Builder {
    /// Records `lhs > rhs` (or `≥` when `strict` is false).
    fn compare(
        &mut self,
        name: &str,
        index: usize,
        lhs: Option<f64>,
        rhs: Option<f64>,
        strict: bool,
    ) {
        let (status, margin) = match (lhs, rhs) {
            (Some(l), Some(r)) => {
                let m = l - r;
                let ok = if strict { m > 0.0 } else { m >= 0.0 };
                (
                    if ok {
                        CheckStatus::Pass
                    } else {
                        CheckStatus::Fail
                    },
                    Some(m),
                )
            }
            _ => (CheckStatus::InsufficientTrace, None),
        };
        self.checks.push(CensusCheck {
            name: name.to_string(),
            index,
            status,
            margin,
        });
    }
}

pub fn crossing_census(c: &SampledCurve, depth: usize) -> CensusReport {
    let crossings = forward(find_axis_crossings(c));
    let horizontals = forward(find_horizontal_tangents(c));
    let verticals = forward(find_vertical_tangents(c));
    let mut line_points: Vec<LinePoint> = [1.0, -1.0]
        .into_iter()
        .flat_map(|level| {
            find_line_crossings(c, level)
                .into_iter()
                .filter(|e| e.t() >= 0.0)
                .map(move |e| LinePoint {
                    param: e.t(),
                    point: e.location,
                    level,
                })
        })
        .collect();
    line_points.sort_by(|a, b| a.param.total_cmp(&b.param));

    let ct = |n: usize| crossings.get(n).map(|p| p.param);
    let cy = |n: usize| crossings.get(n).map(|p| p.point.y);
    let hu = |n: usize| horizontals.get(n).map(|p| p.param);
    let hy = |n: usize| horizontals.get(n).map(|p| p.point.y.abs());
    let vs = |n: usize| verticals.get(n).map(|p| p.param);
    let vx = |n: usize| verticals.get(n).map(|p| p.point.x.abs());

    let mut b = Builder { checks: Vec::new() };
    for n in 0..=depth {
        // (−1)^n y > 0
        let signed = cy(n).map(|y| if n % 2 == 0 { y } else { -y });
        b.compare("sign_alternation", n, signed, Some(0.0), true);
    }
    for n in 1..=depth {
        let gap = cy(n).map(|y| (y - 1.0).abs());
        b.compare("crossing_gap", n, gap, Some(2f64.powi(n as i32 - 1)), false);
    }
    for n in 0..depth {
        let chain = [ct(n), hu(n), vs(n), ct(n + 1)];
        let margin = chain
            .iter()
            .copied()
            .collect::<Option<Vec<f64>>>()
            .map(|v| {
                v.windows(2)
                    .map(|w| w[1] - w[0])
                    .fold(f64::INFINITY, f64::min)
            });
        let status = match margin {
            None => CheckStatus::InsufficientTrace,
            Some(_) => {
                let v: Vec<f64> = chain.iter().map(|x| x.unwrap()).collect();
                let first_ok = if n == 0 { v[0] <= v[1] } else { v[0] < v[1] };
                if first_ok && v[1] < v[2] && v[2] < v[3] {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                }
            }
        };
        b.checks.push(CensusCheck {
            name: "interleaving".to_string(),
            index: n,
            status,
            margin,
        });
    }
    for n in 0..depth.saturating_sub(1) {
        b.compare(
            "vertical_doubling",
            n,
            vx(n + 1),
            vx(n).map(|x| 2.0 * x),
            true,
        );
        b.compare(
            "horizontal_doubling",
            n,
            hy(n + 1),
            hy(n).map(|y| 2.0 * y),
            true,
        );
    }
    for n in 0..depth {
        b.compare(
            "crossing_growth",
            n,
            cy(n + 1).map(f64::abs),
            cy(n).map(f64::abs),
            true,
        );
    }
    if depth >= 2 {
        b.compare("beyond_three", 2, cy(2).map(f64::abs), Some(3.0), true);
    }

    let verdict = combine(b.checks.iter().map(|c| c.status));
    CensusReport {
        depth,
        crossings,
        horizontals,
        verticals,
        line_points,
        checks: b.checks,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{trace, RefineOptions, SeedKind};

    fn curve(domain: (f64, f64), iterations: usize) -> SampledCurve {
        trace(
            SeedKind::Parabola,
            domain,
            2001,
            iterations,
            &RefineOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn seed_parabola_has_no_second_crossing() {
        let r = crossing_census(&curve((0.0, 1.0), 0), 1);
        assert_eq!(r.crossings.len(), 1);
        assert_eq!(r.verdict, CheckStatus::InsufficientTrace);
        assert_eq!(
            r.checks_named("sign_alternation").next().unwrap().status,
            CheckStatus::Pass
        );
    }

    #[test]
    fn first_crossings_of_default_trace() {
        let r = crossing_census(&curve((0.0, 1.0), 5), 1);
        assert!(r.crossings[0].point.dist(Vec2::new(0.0, 1.0 / 3.0)) < 1e-12);
        assert!(r.crossings[1].point.dist(Vec2::new(0.0, -1.0)) < 1e-2);
        assert_eq!(r.status_at(1), CheckStatus::Pass);
    }

    #[test]
    fn nested_traces_agree_on_shared_depth() {
        let short = crossing_census(&curve((0.0, 0.05), 7), 2);
        let long = crossing_census(&curve((0.0, 1.0), 7), 2);
        for (a, b) in short.crossings.iter().zip(&long.crossings).take(3) {
            assert!((a.param - b.param).abs() < 1e-10);
            assert!(a.point.dist(b.point) < 1e-8);
        }
        assert_eq!(short.status_at(2), long.status_at(2));
    }

    #[test]
    fn missing_events_are_insufficient_not_failed() {
        let r = crossing_census(&curve((0.0, 0.002), 7), 3);
        assert!(r.checks.iter().all(|c| c.status != CheckStatus::Fail));
        assert_eq!(r.verdict, CheckStatus::InsufficientTrace);
    }
}
