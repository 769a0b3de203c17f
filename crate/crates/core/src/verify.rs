//! The verification suite behind `trisector verify`.
//!
//! Each criterion produces a pass flag and a map of measured values. The
//! report contains no timings, so repeated runs with one configuration
//! serialize identically.

use std::cell::OnceCell;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::analysis::census::{crossing_census, CheckStatus};
use crate::analysis::controls::{check_control, controls};
use crate::analysis::oracle::{curvature_identity_error, envelope_oracle, ParabolaArc};
use crate::analysis::profile::{distance_profile, global_min};
use crate::branch::{
    conjugate_solution, find_determinant, residuals_vanish, seed_residuals, seed_solutions,
    solve_branch, Branch,
};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::field::Qs3;
use crate::geometry::events::{
    find_self_intersections, find_tangent_through_default_focus, find_vertical_tangents,
};
use crate::geometry::{
    envelope_point, theta_point, trace, SampledCurve, SeedKind, Vec2, MIRROR_FOCUS,
};
use crate::report::annihilator_run;

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "seeds"),
    (2, "series"),
    (3, "residuals"),
    (4, "duality"),
    (5, "determinants"),
    (6, "alpha5"),
    (7, "profile"),
    (8, "events"),
    (9, "census"),
    (10, "annihilator"),
    (11, "oracle"),
    (12, "determinism"),
];

/// Criterion thresholds.
pub mod tol {
    pub const DETERMINANT_TARGET: f64 = -497.415;
    pub const DETERMINANT: f64 = 1e-3;
    pub const DETERMINANT_MAX_K: usize = 10;
    pub const EXACT_ORDER: usize = 20;
    pub const ALPHA5_PARAM: f64 = 1.0 / 32.0;
    pub const ALPHA5_POINT: (f64, f64) = (0.92795, 2.82373);
    pub const THETA_POINT: (f64, f64) = (2.2336, -4.39928);
    pub const POINT: f64 = 1e-3;
    pub const PREIMAGE_PARAM: f64 = -0.0858323;
    pub const PREIMAGE_PARAM_TOL: f64 = 1e-3;
    pub const PREIMAGE_DIST: f64 = 2e-3;
    pub const PROFILE_MIN: f64 = 3.03018;
    pub const PROFILE_MIN_TOL: f64 = 1e-2;
    pub const PROFILE_PARAM: f64 = 0.0134386;
    pub const PROFILE_PARAM_TOL: f64 = 1e-3;
    pub const PROFILE_COUNT: usize = 4;
    pub const VERTICAL: (f64, f64) = (0.524251, -0.243883);
    pub const FOCUS_TANGENT: (f64, f64) = (0.464045, 0.0289289);
    pub const FOCUS_IMAGE: f64 = 1e-6;
    pub const CROSSING: f64 = 1e-2;
    pub const CROSSING_DIR: (f64, f64) = (0.902272, -0.431168);
    pub const CROSSING_ANGLE: f64 = 1e-2;
    pub const CENSUS_REQUIRED: usize = 2;
    pub const CENSUS_TARGET: usize = 3;
    pub const ORACLE: f64 = 1e-9;
    pub const CURVATURE: f64 = 1e-4;
    pub const CURVATURE_STEP: f64 = 1e-5;
    pub const ITERATIONS: usize = 5;
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    pub detail: Map<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub verdicts: Vec<Verdict>,
    pub all_pass: bool,
}

impl VerifyReport {
    /// One line per criterion.
    pub fn summary(&self) -> String {
        self.verdicts
            .iter()
            .map(|v| {
                format!(
                    "[{}] {:>2} {}\n",
                    if v.pass { "PASS" } else { "FAIL" },
                    v.id,
                    v.name
                )
            })
            .collect()
    }
}

/// Resolves criterion names or numbers. Empty selects all.
pub fn select(only: &[String]) -> Result<Vec<u8>> {
    if only.is_empty() {
        return Ok(CRITERIA.iter().map(|c| c.0).collect());
    }
    let mut ids = Vec::new();
    for name in only.iter().flat_map(|s| s.split(',')).map(str::trim) {
        let id = CRITERIA
            .iter()
            .find(|(id, n)| *n == name || id.to_string() == name)
            .map(|c| c.0)
            .ok_or_else(|| Error::Config(format!("unknown criterion {name:?}")))?;
        if !ids.contains(&id) {
            ids.push(id);
        }
    }
    ids.sort_unstable();
    Ok(ids)
}

struct Context<'a> {
    config: &'a RunConfig,
    default_trace: OnceCell<SampledCurve>,
    deep_trace: OnceCell<SampledCurve>,
}

impl<'a> Context<'a> {
    fn new(config: &'a RunConfig) -> Self {
        Context {
            config,
            default_trace: OnceCell::new(),
            deep_trace: OnceCell::new(),
        }
    }

    fn default_trace(&self) -> Result<&SampledCurve> {
        if self.default_trace.get().is_none() {
            let c = trace(
                SeedKind::Parabola,
                (self.config.t_min, self.config.t_max),
                self.config.samples,
                tol::ITERATIONS,
                &self.config.refine_options(),
            )?;
            let _ = self.default_trace.set(c);
        }
        Ok(self.default_trace.get().expect("set above"))
    }

    fn deep_trace(&self) -> Result<&SampledCurve> {
        if self.deep_trace.get().is_none() {
            let c = trace(
                SeedKind::Parabola,
                (self.config.deep_t_min, self.config.deep_t_max),
                self.config.samples,
                self.config.deep_iterations,
                &self.config.refine_options(),
            )?;
            let _ = self.deep_trace.set(c);
        }
        Ok(self.deep_trace.get().expect("set above"))
    }
}

type Outcome = Result<(bool, Map<String, Value>)>;

fn detail(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn within(p: Vec2, want: (f64, f64), tol: f64) -> bool {
    (p.x - want.0).abs() <= tol && (p.y - want.1).abs() <= tol
}

fn pt(p: Vec2) -> Value {
    json!([p.x, p.y])
}

fn seeds() -> Outcome {
    let [tri, con] = seed_solutions();
    let want = [
        (
            Qs3::from_ratios((-1, 1), (1, 1)),
            Qs3::from_ratios((-3, 8), (3, 8)),
        ),
        (
            Qs3::from_ratios((-1, 1), (-1, 1)),
            Qs3::from_ratios((-3, 8), (-3, 8)),
        ),
    ];
    let values_ok = tri.lambda == want[0].0
        && tri.q2 == want[0].1
        && con.lambda == want[1].0
        && con.q2 == want[1].1;
    let residuals: Vec<(Qs3, Qs3)> = [&tri, &con].iter().map(|s| seed_residuals(s)).collect();
    let zero = residuals.iter().all(|(a, b)| a.is_zero() && b.is_zero());
    Ok((
        values_ok && zero,
        detail(json!({
            "trisector": {"lambda": tri.lambda, "q2": tri.q2},
            "conjugate": {"lambda": con.lambda, "q2": con.q2},
            "residuals_zero": zero,
        })),
    ))
}

fn series() -> Outcome {
    let s = solve_branch(Branch::Conjugate, 4)?;
    let want = [
        ("m2", s.m(2), Qs3::from_ratios((-3, 8), (-3, 8))),
        ("m4", s.m(4), Qs3::from_ratios((-351, 704), (-189, 704))),
        ("lambda1", s.lambda(1), Qs3::from_ratios((-1, 1), (-1, 1))),
        (
            "lambda3",
            s.lambda(3),
            Qs3::from_ratios((459, 88), (135, 44)),
        ),
    ];
    let mut d = Map::new();
    let mut pass = true;
    for (name, got, expected) in want {
        pass &= *got == expected;
        d.insert(
            name.to_string(),
            json!({"computed": got, "expected": expected}),
        );
    }
    Ok((pass, d))
}

fn residuals() -> Outcome {
    let mut d = Map::new();
    let mut pass = true;
    for b in [Branch::Trisector, Branch::Conjugate] {
        let ok = residuals_vanish(&solve_branch(b, tol::EXACT_ORDER)?)?;
        pass &= ok;
        d.insert(b.to_string(), json!(ok));
    }
    d.insert("order".into(), json!(tol::EXACT_ORDER));
    Ok((pass, d))
}

fn duality() -> Outcome {
    let tri = solve_branch(Branch::Trisector, tol::EXACT_ORDER)?;
    let con = solve_branch(Branch::Conjugate, tol::EXACT_ORDER)?;
    let image = conjugate_solution(&tri);
    let same = image == con;
    let back = conjugate_solution(&image) == tri;
    Ok((
        same && back,
        detail(
            json!({"order": tol::EXACT_ORDER, "conj_trisector_equals_conjugate": same, "involution": back}),
        ),
    ))
}

fn determinants() -> Outcome {
    let s = solve_branch(Branch::Conjugate, tol::EXACT_ORDER)?;
    let floats: Vec<(usize, f64)> = s
        .determinants
        .iter()
        .map(|d| (d.k, d.value.to_f64()))
        .collect();
    let negative = floats
        .iter()
        .filter(|(k, _)| *k <= tol::DETERMINANT_MAX_K)
        .all(|(_, v)| *v < 0.0);
    let d4 = s.determinant(4).map(Qs3::to_f64);
    let matched = find_determinant(&s, tol::DETERMINANT_TARGET, tol::DETERMINANT);
    let table: Map<String, Value> = floats
        .iter()
        .map(|(k, v)| (format!("d{k:02}"), json!(v)))
        .collect();
    Ok((
        !matched.is_empty() && negative,
        detail(json!({
            "d4": d4,
            "target": tol::DETERMINANT_TARGET,
            "steps_matching_target": matched,
            "all_negative_up_to_10": negative,
            "determinants": table,
            "indexing": crate::report::DETERMINANT_INDEXING,
        })),
    ))
}

fn alpha5(ctx: &Context) -> Outcome {
    let c = ctx.default_trace()?;
    let a = c.model.eval(tol::ALPHA5_PARAM)?.point;
    let th = theta_point(&a)?.point.p();
    let target = Vec2::new(tol::THETA_POINT.0, tol::THETA_POINT.1);
    let preimage = distance_profile(target, c)
        .into_iter()
        .filter(|m| (m.t - tol::PREIMAGE_PARAM).abs() <= tol::PREIMAGE_PARAM_TOL)
        .min_by(|x, y| x.dist_sq.total_cmp(&y.dist_sq));
    let pre_ok = preimage.is_some_and(|m| m.dist_sq.sqrt() <= tol::PREIMAGE_DIST);
    let a_ok = within(a.p(), tol::ALPHA5_POINT, tol::POINT);
    let th_ok = within(th, tol::THETA_POINT, tol::POINT);
    Ok((
        a_ok && th_ok && pre_ok,
        detail(json!({
            "alpha5": pt(a.p()),
            "theta_image": pt(th),
            "preimage_param": preimage.map(|m| m.t),
            "preimage_distance": preimage.map(|m| m.dist_sq.sqrt()),
        })),
    ))
}

fn profile(ctx: &Context) -> Outcome {
    let c = ctx.default_trace()?;
    let q = ctx.config.profile_q;
    let mins = distance_profile(q, c);
    let g = global_min(&mins);
    let matches = |g: Option<crate::analysis::profile::LocalMin>, count: usize| {
        g.is_some_and(|g| {
            (g.dist_sq - tol::PROFILE_MIN).abs() <= tol::PROFILE_MIN_TOL
                && (g.t - tol::PROFILE_PARAM).abs() <= tol::PROFILE_PARAM_TOL
        }) && count >= tol::PROFILE_COUNT
    };
    let pass = matches(g, mins.len());
    // The same profile measured from the reflection of α₅(1/32), the point
    // whose distance function has the stated minima.
    let mirror = c.model.eval(tol::ALPHA5_PARAM)?.point.p().mirror_x();
    let mirror_mins = distance_profile(mirror, c);
    let near = |ms: &[crate::analysis::profile::LocalMin]| -> Vec<Value> {
        ms.iter()
            .filter(|m| m.t.abs() <= 0.15)
            .map(|m| json!({"t": m.t, "dist_sq": m.dist_sq}))
            .collect()
    };
    Ok((
        pass,
        detail(json!({
            "q": pt(q),
            "minima_count": mins.len(),
            "global_min": g.map(|g| json!({"t": g.t, "dist_sq": g.dist_sq})),
            "minima_near_origin": near(&mins),
            "reflected_alpha5_point": {
                "q": pt(mirror),
                "matches_thresholds": matches(global_min(&mirror_mins), mirror_mins.len()),
                "global_min": global_min(&mirror_mins).map(|g| json!({"t": g.t, "dist_sq": g.dist_sq})),
                "minima_near_origin": near(&mirror_mins),
            },
        })),
    ))
}

fn events(ctx: &Context) -> Outcome {
    let c = ctx.default_trace()?;
    // The curve is symmetric under t ↦ −t, x ↦ −x; the first event of each
    // pair is taken on the x > 0 side.
    let first_right = |ev: Vec<crate::geometry::FeatureEvent>| {
        ev.into_iter()
            .filter(|e| e.location.x > 0.0)
            .min_by(|a, b| a.t().abs().total_cmp(&b.t().abs()))
    };
    let v = first_right(find_vertical_tangents(c));
    let v_ok = v
        .as_ref()
        .is_some_and(|e| within(e.location, tol::VERTICAL, tol::POINT));
    let f = first_right(find_tangent_through_default_focus(c));
    let f_image = match &f {
        Some(e) => Some(theta_point(&c.frame_at(e.t())?)?.point.p()),
        None => None,
    };
    let f_ok = f
        .as_ref()
        .is_some_and(|e| within(e.location, tol::FOCUS_TANGENT, tol::POINT))
        && f_image.is_some_and(|p| within(p, (0.0, -1.0), tol::FOCUS_IMAGE));
    let dir = Vec2::new(tol::CROSSING_DIR.0, tol::CROSSING_DIR.1)
        .normalized()
        .expect("nonzero");
    let crossing = find_self_intersections(c)
        .into_iter()
        .filter(|e| e.location.dist(MIRROR_FOCUS) <= tol::CROSSING)
        .min_by(|a, b| {
            a.location
                .dist(MIRROR_FOCUS)
                .total_cmp(&b.location.dist(MIRROR_FOCUS))
        });
    let angle = crossing.as_ref().map(|e| {
        e.tangents
            .iter()
            .map(|u| u.line_angle(dir))
            .fold(f64::INFINITY, f64::min)
    });
    let x_ok = angle.is_some_and(|a| a <= tol::CROSSING_ANGLE);
    Ok((
        v_ok && f_ok && x_ok,
        detail(json!({
            "vertical_tangent": v.as_ref().map(|e| json!({"t": e.t(), "location": pt(e.location)})),
            "tangent_through_focus": f.as_ref().map(|e| json!({"t": e.t(), "location": pt(e.location)})),
            "focus_tangent_image": f_image.map(pt),
            "self_intersection": crossing.as_ref().map(|e| json!({
                "params": e.params,
                "location": pt(e.location),
                "tangents": e.tangents.iter().map(|u| pt(*u)).collect::<Vec<_>>(),
            })),
            "crossing_angle": angle,
        })),
    ))
}

fn census(ctx: &Context) -> Outcome {
    let c = ctx.deep_trace()?;
    let depth = ctx.config.census_depth;
    let r = crossing_census(c, depth);
    let required = r.status_at(tol::CENSUS_REQUIRED.min(depth));
    let target = (depth >= tol::CENSUS_TARGET).then(|| r.status_at(tol::CENSUS_TARGET));
    let pass = depth >= tol::CENSUS_REQUIRED
        && required == CheckStatus::Pass
        && target != Some(CheckStatus::Fail);
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|k| json!({"name": k.name, "index": k.index, "status": k.status, "margin": k.margin}))
        .collect();
    Ok((
        pass,
        detail(json!({
            "depth": depth,
            "status_required_depth": required,
            "status_target_depth": target,
            "crossings": r.crossings.iter().map(|p| json!({"t": p.param, "y": p.point.y})).collect::<Vec<_>>(),
            "checks": checks,
        })),
    ))
}

fn annihilator(ctx: &Context) -> Outcome {
    let mut d = Map::new();
    let mut pass = true;
    for b in [Branch::Trisector, Branch::Conjugate] {
        let run = annihilator_run(ctx.config, b)?;
        let nullities: Map<String, Value> = run
            .results
            .iter()
            .map(|r| {
                (
                    format!("D{}", r.degree),
                    json!({"rank": r.rank, "nullity": r.nullity, "jet_order": r.jet_order}),
                )
            })
            .collect();
        pass &= run.results.iter().all(|r| r.nullity == 0);
        d.insert(b.to_string(), Value::Object(nullities));
    }
    let outcomes = controls(ctx.config.controls, ctx.config.control_seed)
        .iter()
        .map(check_control)
        .collect::<Result<Vec<_>, _>>()?;
    let recovered = outcomes.iter().filter(|o| o.recovered).count();
    pass &= recovered == outcomes.len() && !outcomes.is_empty();
    d.insert("controls".into(), json!(outcomes.len()));
    d.insert("controls_recovered".into(), json!(recovered));
    Ok((pass, d))
}

fn oracle(ctx: &Context) -> Outcome {
    let mut rng = StdRng::seed_from_u64(ctx.config.oracle_seed);
    let mut worst: f64 = 0.0;
    for _ in 0..ctx.config.oracle_points {
        let t = rng.random_range(-1.0..=1.0);
        let fp = SeedKind::Parabola.frame(t)?;
        let q = envelope_oracle(&fp, &ParabolaArc)?;
        worst = worst.max(q.dist(envelope_point(&fp)?.point.p()));
    }
    let mut curvature: f64 = 0.0;
    for i in 0..=40 {
        let t = -1.0 + i as f64 / 20.0;
        curvature = curvature.max(curvature_identity_error(t, tol::CURVATURE_STEP)?);
    }
    Ok((
        worst <= tol::ORACLE && curvature <= tol::CURVATURE && ctx.config.oracle_points > 0,
        detail(json!({
            "points": ctx.config.oracle_points,
            "max_oracle_difference": worst,
            "max_curvature_relative_error": curvature,
        })),
    ))
}

fn evaluate(id: u8, ctx: &Context) -> Verdict {
    let outcome = match id {
        1 => seeds(),
        2 => series(),
        3 => residuals(),
        4 => duality(),
        5 => determinants(),
        6 => alpha5(ctx),
        7 => profile(ctx),
        8 => events(ctx),
        9 => census(ctx),
        10 => annihilator(ctx),
        11 => oracle(ctx),
        _ => unreachable!("determinism is evaluated by run"),
    };
    let (pass, detail) = outcome.unwrap_or_else(|e| {
        let mut m = Map::new();
        m.insert("error".into(), json!(e.to_string()));
        (false, m)
    });
    Verdict {
        id,
        name: CRITERIA[id as usize - 1].1.to_string(),
        pass,
        detail,
    }
}

fn evaluate_all(ids: &[u8], config: &RunConfig) -> Vec<Verdict> {
    let ctx = Context::new(config);
    ids.iter().map(|&id| evaluate(id, &ctx)).collect()
}

/// Runs the selected criteria. Determinism reruns the others and compares
/// their serialized verdicts.
pub fn run(config: &RunConfig, ids: &[u8]) -> Result<VerifyReport> {
    config.validate()?;
    let others: Vec<u8> = ids.iter().copied().filter(|&id| id != 12).collect();
    let mut verdicts = evaluate_all(&others, config);
    if ids.contains(&12) {
        let basis: Vec<u8> = if others.is_empty() {
            (1..12).collect()
        } else {
            others.clone()
        };
        let first = if others.is_empty() {
            evaluate_all(&basis, config)
        } else {
            verdicts.clone()
        };
        let second = evaluate_all(&basis, config);
        let a = serde_json::to_string(&first)?;
        let b = serde_json::to_string(&second)?;
        let mut d = Map::new();
        d.insert("criteria_compared".into(), json!(basis));
        d.insert("identical".into(), json!(a == b));
        verdicts.push(Verdict {
            id: 12,
            name: "determinism".into(),
            pass: a == b,
            detail: d,
        });
    }
    let all_pass = verdicts.iter().all(|v| v.pass);
    Ok(VerifyReport {
        config: config.clone(),
        verdicts,
        all_pass,
    })
}
