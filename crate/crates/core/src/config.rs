//! Run configuration: defaults, a `key = value` file format and validation.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::branch::Branch;
use crate::error::{Error, Result};
use crate::geometry::{RefineOptions, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedChoice {
    Parabola,
    Series,
}

impl FromStr for SeedChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "parabola" => Ok(SeedChoice::Parabola),
            "series" => Ok(SeedChoice::Series),
            _ => Err(format!(
                "unknown seed kind {s:?} (expected parabola or series)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub branch: Branch,
    pub order: usize,
    pub seed: SeedChoice,
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub iterations: usize,
    pub deep_t_min: f64,
    pub deep_t_max: f64,
    pub deep_iterations: usize,
    pub angle_bound: f64,
    pub arc_bound: f64,
    pub max_samples: usize,
    pub event_tol: f64,
    pub census_depth: usize,
    pub degrees: Vec<usize>,
    pub controls: usize,
    pub control_seed: u64,
    pub oracle_points: usize,
    pub oracle_seed: u64,
    pub profile_q: Vec2,
    pub emit_circles: usize,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            branch: Branch::Conjugate,
            order: 20,
            seed: SeedChoice::Parabola,
            t_min: -1.0,
            t_max: 1.0,
            samples: 4001,
            iterations: 5,
            deep_t_min: 0.0,
            deep_t_max: 1.0,
            deep_iterations: 7,
            angle_bound: 0.2,
            arc_bound: 0.05,
            max_samples: 2_000_000,
            event_tol: 1e-14,
            census_depth: 3,
            degrees: vec![2, 4, 6, 8],
            controls: 20,
            control_seed: 20,
            oracle_points: 100,
            oracle_seed: 100,
            profile_q: Vec2::new(2.2336, 4.39928),
            emit_circles: 0,
            output_dir: PathBuf::from("."),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| Error::Config(format!("{key}: cannot parse {value:?}: {e}")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<usize>> {
    value.split(',').map(|s| parse(key, s.trim())).collect()
}

fn parse_point(key: &str, value: &str) -> Result<Vec2> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [x, y] => Ok(Vec2::new(parse(key, x)?, parse(key, y)?)),
        _ => Err(Error::Config(format!(
            "{key}: expected \"x, y\", got {value:?}"
        ))),
    }
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "branch" => self.branch = parse(key, value)?,
            "order" => self.order = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "t_min" => self.t_min = parse(key, value)?,
            "t_max" => self.t_max = parse(key, value)?,
            "samples" => self.samples = parse(key, value)?,
            "iterations" => self.iterations = parse(key, value)?,
            "deep_t_min" => self.deep_t_min = parse(key, value)?,
            "deep_t_max" => self.deep_t_max = parse(key, value)?,
            "deep_iterations" => self.deep_iterations = parse(key, value)?,
            "angle_bound" => self.angle_bound = parse(key, value)?,
            "arc_bound" => self.arc_bound = parse(key, value)?,
            "max_samples" => self.max_samples = parse(key, value)?,
            "event_tol" => self.event_tol = parse(key, value)?,
            "census_depth" => self.census_depth = parse(key, value)?,
            "degrees" => self.degrees = parse_list(key, value)?,
            "controls" => self.controls = parse(key, value)?,
            "control_seed" => self.control_seed = parse(key, value)?,
            "oracle_points" => self.oracle_points = parse(key, value)?,
            "oracle_seed" => self.oracle_seed = parse(key, value)?,
            "profile_q" => self.profile_q = parse_point(key, value)?,
            "emit_circles" => self.emit_circles = parse(key, value)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines over the defaults. `#` starts a comment.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse_str(&std::fs::read_to_string(path)?)
    }

    /// Serializes back to the file format. Floats use shortest round-trip
    /// form so `parse_str(to_file_string())` is the identity.
    pub fn to_file_string(&self) -> String {
        let degrees: Vec<String> = self.degrees.iter().map(usize::to_string).collect();
        let lines = [
            format!("branch = {}", self.branch),
            format!("order = {}", self.order),
            format!(
                "seed = {}",
                match self.seed {
                    SeedChoice::Parabola => "parabola",
                    SeedChoice::Series => "series",
                }
            ),
            format!("t_min = {:?}", self.t_min),
            format!("t_max = {:?}", self.t_max),
            format!("samples = {}", self.samples),
            format!("iterations = {}", self.iterations),
            format!("deep_t_min = {:?}", self.deep_t_min),
            format!("deep_t_max = {:?}", self.deep_t_max),
            format!("deep_iterations = {}", self.deep_iterations),
            format!("angle_bound = {:?}", self.angle_bound),
            format!("arc_bound = {:?}", self.arc_bound),
            format!("max_samples = {}", self.max_samples),
            format!("event_tol = {:?}", self.event_tol),
            format!("census_depth = {}", self.census_depth),
            format!("degrees = {}", degrees.join(", ")),
            format!("controls = {}", self.controls),
            format!("control_seed = {}", self.control_seed),
            format!("oracle_points = {}", self.oracle_points),
            format!("oracle_seed = {}", self.oracle_seed),
            format!("profile_q = {:?}, {:?}", self.profile_q.x, self.profile_q.y),
            format!("emit_circles = {}", self.emit_circles),
            format!("output_dir = {}", self.output_dir.display()),
        ];
        let mut s = lines.join("\n");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.order < 2 || !self.order.is_multiple_of(2) {
            return fail(format!(
                "order must be even and at least 2, got {}",
                self.order
            ));
        }
        for (name, v) in [
            ("angle_bound", self.angle_bound),
            ("arc_bound", self.arc_bound),
            ("event_tol", self.event_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return fail(format!("{name} must be positive, got {v}"));
            }
        }
        if self.samples < 2 || self.max_samples < self.samples {
            return fail(format!(
                "samples must be at least 2 and at most max_samples, got {}",
                self.samples
            ));
        }
        for (name, lo, hi) in [
            ("t", self.t_min, self.t_max),
            ("deep_t", self.deep_t_min, self.deep_t_max),
        ] {
            if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                return fail(format!("{name}_min must be below {name}_max"));
            }
        }
        if self.deep_t_min < 0.0 {
            return fail("deep_t_min must be non-negative".to_string());
        }
        if self.census_depth == 0 {
            return fail("census_depth must be at least 1".to_string());
        }
        if self.degrees.is_empty() {
            return fail("degrees must not be empty".to_string());
        }
        if !self.profile_q.is_finite() {
            return fail("profile_q must be finite".to_string());
        }
        Ok(())
    }

    pub fn refine_options(&self) -> RefineOptions {
        RefineOptions {
            angle_bound: self.angle_bound,
            arc_bound: self.arc_bound,
            max_samples: self.max_samples,
            event_tol: self.event_tol,
            ..RefineOptions::default()
        }
    }
}
