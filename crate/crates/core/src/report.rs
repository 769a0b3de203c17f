//! JSON reports. Every report carries the configuration that produced it.

use serde::Serialize;

use crate::analysis::annihilator::{annihilator_rank, required_order, AnnihilatorResult};
use crate::analysis::census::{crossing_census, CensusReport};
use crate::analysis::profile::{distance_profile, global_min, LocalMin};
use crate::branch::{residuals_vanish, solve_branch, Branch, BranchSolution, Seed};
use crate::config::RunConfig;
use crate::error::Result;
use crate::field::Qs3;
use crate::geometry::{SampledCurve, Vec2};

/// How determinant steps are numbered.
pub const DETERMINANT_INDEXING: &str =
    "d_k is the determinant of the 2x2 system in (m_k, lambda_(k-1)) built from the x^k \
     coefficient of the distance residual and the x^(k-1) coefficient of the tangency residual";

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientRow {
    pub index: usize,
    pub m: Qs3,
    pub m_float: f64,
    pub lambda: Qs3,
    pub lambda_float: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeterminantRow {
    pub k: usize,
    pub value: Qs3,
    pub float: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesReport {
    pub config: RunConfig,
    pub branch: Branch,
    pub order: usize,
    pub seed: Seed,
    pub coefficients: Vec<CoefficientRow>,
    pub determinants: Vec<DeterminantRow>,
    pub determinant_indexing: &'static str,
    pub residuals_vanish: bool,
}

impl SeriesReport {
    pub fn new(config: &RunConfig, s: &BranchSolution) -> Result<Self> {
        let coefficients = (0..=s.order)
            .map(|i| CoefficientRow {
                index: i,
                m: s.m(i).clone(),
                m_float: s.m(i).to_f64(),
                lambda: s.lambda(i).clone(),
                lambda_float: s.lambda(i).to_f64(),
            })
            .collect();
        let determinants = s
            .determinants
            .iter()
            .map(|d| DeterminantRow {
                k: d.k,
                value: d.value.clone(),
                float: d.value.to_f64(),
            })
            .collect();
        Ok(SeriesReport {
            config: config.clone(),
            branch: s.branch,
            order: s.order,
            seed: s.seed.clone(),
            coefficients,
            determinants,
            determinant_indexing: DETERMINANT_INDEXING,
            residuals_vanish: residuals_vanish(s)?,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceReport {
    pub config: RunConfig,
    pub seed: String,
    pub generation: usize,
    pub samples: usize,
    pub domain: Option<(f64, f64)>,
    pub gaps: Vec<f64>,
    pub flagged: Vec<f64>,
    pub unresolved: usize,
}

impl TraceReport {
    pub fn new(config: &RunConfig, c: &SampledCurve) -> Self {
        TraceReport {
            config: config.clone(),
            seed: c.seed_descriptor(),
            generation: c.generation(),
            samples: c.len(),
            domain: c.domain(),
            gaps: c.gaps.clone(),
            flagged: c.flagged.clone(),
            unresolved: c.unresolved,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusRun {
    pub config: RunConfig,
    pub trace_samples: usize,
    pub census: CensusReport,
}

pub fn census_run(config: &RunConfig, deep: &SampledCurve) -> CensusRun {
    CensusRun {
        config: config.clone(),
        trace_samples: deep.len(),
        census: crossing_census(deep, config.census_depth),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileRun {
    pub config: RunConfig,
    pub q: Vec2,
    pub minima: Vec<LocalMin>,
    pub global_min: Option<LocalMin>,
}

pub fn profile_run(config: &RunConfig, q: Vec2, curve: &SampledCurve) -> ProfileRun {
    let minima = distance_profile(q, curve);
    ProfileRun {
        config: config.clone(),
        q,
        global_min: global_min(&minima),
        minima,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AnnihilatorRun {
    pub config: RunConfig,
    pub branch: Branch,
    pub series_order: usize,
    pub results: Vec<AnnihilatorResult>,
}

/// Solves `branch` deep enough for every configured degree and runs the
/// search at each.
pub fn annihilator_run(config: &RunConfig, branch: Branch) -> Result<AnnihilatorRun> {
    let need = config
        .degrees
        .iter()
        .map(|&d| required_order(d))
        .max()
        .unwrap_or(2);
    let order = need + need % 2;
    let s = solve_branch(branch, order)?;
    let results = config
        .degrees
        .iter()
        .map(|&d| annihilator_rank(&s, d))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AnnihilatorRun {
        config: config.clone(),
        branch,
        series_order: order,
        results,
    })
}

pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}
