use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use trisector::branch::{solve_branch, Branch};
use trisector::config::{RunConfig, SeedChoice};
use trisector::error::{Error, Result};
use trisector::geometry::events::{find_self_intersections, find_tangent_events};
use trisector::geometry::{trace, SampledCurve, SeedKind, Vec2};
use trisector::output::{focus_circles, render_svg, write_csv, Scene, SvgOptions};
use trisector::report::{
    self, annihilator_run, census_run, profile_run, SeriesReport, TraceReport,
};
use trisector::verify;

#[derive(Parser)]
#[command(
    name = "trisector",
    version,
    about = "Exact series, curve tracing and checks for the distance trisector and its conjugate"
)]
struct Cli {
    /// `key = value` configuration file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a branch to a given order and print the coefficient report.
    Series {
        #[arg(long)]
        branch: Option<Branch>,
        #[arg(long, value_parser = even_order)]
        order: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterate the envelope map and write CSV and SVG.
    Trace(TraceArgs),
    /// Census, distance profile or annihilator search.
    Analyze {
        #[command(subcommand)]
        what: Analysis,
    },
    /// Run the verification suite.
    Verify {
        /// Criterion names or numbers, comma separated or repeated.
        #[arg(long)]
        only: Vec<String>,
        #[arg(long)]
        depth: Option<usize>,
        /// Event refinement tolerance.
        #[arg(long, value_parser = positive)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    t_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_max: Option<f64>,
    #[arg(long)]
    seed: Option<SeedChoice>,
    #[arg(long)]
    branch: Option<Branch>,
    #[arg(long, value_parser = even_order)]
    order: Option<usize>,
    /// Defaults to `trace.csv` in the output directory.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Defaults to `trace.svg` in the output directory.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Number of focus circles drawn on the previous generation.
    #[arg(long)]
    emit_circles: Option<usize>,
    #[arg(long, value_parser = positive)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Analysis {
    /// Crossing census on the deep trace.
    Census {
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        t_max: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Local minima of the squared distance from a point.
    Profile {
        #[arg(long, allow_hyphen_values = true, num_args = 2, value_names = ["X", "Y"])]
        point: Option<Vec<f64>>,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact rank of the jet matrix for each degree bound.
    Annihilator {
        #[arg(long)]
        branch: Option<Branch>,
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn even_order(s: &str) -> std::result::Result<usize, String> {
    let k: usize = s.parse().map_err(|e| format!("{e}"))?;
    if k < 2 || !k.is_multiple_of(2) {
        return Err(format!("order must be even and at least 2, got {k}"));
    }
    Ok(k)
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(format!("tolerance must be positive, got {v}"));
    }
    Ok(v)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn seed_kind(config: &RunConfig) -> Result<SeedKind> {
    Ok(match config.seed {
        SeedChoice::Parabola => SeedKind::Parabola,
        SeedChoice::Series => SeedKind::from_solution(&solve_branch(config.branch, config.order)?),
    })
}

fn default_trace(config: &RunConfig, iterations: usize) -> Result<SampledCurve> {
    Ok(trace(
        seed_kind(config)?,
        (config.t_min, config.t_max),
        config.samples,
        iterations,
        &config.refine_options(),
    )?)
}

fn cmd_series(
    mut config: RunConfig,
    branch: Option<Branch>,
    order: Option<usize>,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    if let Some(b) = branch {
        config.branch = b;
    }
    if let Some(k) = order {
        config.order = k;
    }
    config.validate()?;
    let s = solve_branch(config.branch, config.order)?;
    let r = SeriesReport::new(&config, &s)?;
    emit(&report::to_json(&r)?, out.as_deref())?;
    if !r.residuals_vanish {
        eprintln!("residuals do not vanish through order {}", config.order);
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_trace(mut config: RunConfig, a: TraceArgs) -> Result<ExitCode> {
    if let Some(v) = a.iterations {
        config.iterations = v;
    }
    if let Some(v) = a.samples {
        config.samples = v;
    }
    if let Some(v) = a.t_min {
        config.t_min = v;
    }
    if let Some(v) = a.t_max {
        config.t_max = v;
    }
    if let Some(v) = a.seed {
        config.seed = v;
    }
    if let Some(v) = a.branch {
        config.branch = v;
    }
    if let Some(v) = a.order {
        config.order = v;
    }
    if let Some(v) = a.emit_circles {
        config.emit_circles = v;
    }
    if let Some(v) = a.tol {
        config.event_tol = v;
    }
    config.validate()?;
    let curve = default_trace(&config, config.iterations)?;
    let csv = a.csv.unwrap_or_else(|| config.output_dir.join("trace.csv"));
    let svg = a.svg.unwrap_or_else(|| config.output_dir.join("trace.svg"));

    let mut w = BufWriter::new(File::create(&csv)?);
    write_csv(&mut w, &curve, &config.to_file_string())?;
    w.flush()?;

    let previous = if config.emit_circles > 0 && config.iterations > 0 {
        Some(default_trace(&config, config.iterations - 1)?)
    } else {
        None
    };
    let carrier = previous.as_ref().unwrap_or(&curve);
    let mut curves = vec![&curve];
    curves.extend(previous.as_ref());
    let mut events = find_tangent_events(&curve);
    events.extend(find_self_intersections(&curve));
    let scene = Scene {
        curves,
        circles: focus_circles(carrier, config.emit_circles),
        events,
    };
    let opts = SvgOptions {
        description: format!(
            "generation {} of the {} seed on [{}, {}]",
            config.iterations,
            curve.seed_descriptor(),
            config.t_min,
            config.t_max
        ),
        ..SvgOptions::default()
    };
    std::fs::write(&svg, render_svg(&scene, &opts))?;
    emit(&report::to_json(&TraceReport::new(&config, &curve))?, None)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_analyze(mut config: RunConfig, what: Analysis) -> Result<ExitCode> {
    match what {
        Analysis::Census {
            depth,
            iterations,
            t_max,
            out,
        } => {
            if let Some(v) = depth {
                config.census_depth = v;
            }
            if let Some(v) = iterations {
                config.deep_iterations = v;
            }
            if let Some(v) = t_max {
                config.deep_t_max = v;
            }
            config.validate()?;
            let deep = trace(
                SeedKind::Parabola,
                (config.deep_t_min, config.deep_t_max),
                config.samples,
                config.deep_iterations,
                &config.refine_options(),
            )?;
            let r = census_run(&config, &deep);
            emit(&report::to_json(&r)?, out.as_deref())?;
        }
        Analysis::Profile {
            point,
            iterations,
            out,
        } => {
            if let Some(p) = point {
                config.profile_q = Vec2::new(p[0], p[1]);
            }
            if let Some(v) = iterations {
                config.iterations = v;
            }
            config.validate()?;
            let curve = default_trace(&config, config.iterations)?;
            let r = profile_run(&config, config.profile_q, &curve);
            emit(&report::to_json(&r)?, out.as_deref())?;
        }
        Analysis::Annihilator {
            branch,
            degrees,
            out,
        } => {
            if let Some(b) = branch {
                config.branch = b;
            }
            if let Some(d) = degrees {
                config.degrees = d;
            }
            config.validate()?;
            let r = annihilator_run(&config, config.branch)?;
            emit(&report::to_json(&r)?, out.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    mut config: RunConfig,
    only: Vec<String>,
    depth: Option<usize>,
    tol: Option<f64>,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    if let Some(d) = depth {
        config.census_depth = d;
    }
    if let Some(t) = tol {
        config.event_tol = t;
    }
    let ids = verify::select(&only)?;
    let r = verify::run(&config, &ids)?;
    eprint!("{}", r.summary());
    emit(&report::to_json(&r)?, out.as_deref())?;
    Ok(if r.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let config = match &cli.config {
        Some(p) => RunConfig::load(p).map_err(|e| match e {
            Error::Io(io) => Error::Config(format!("{}: {io}", p.display())),
            e => e,
        })?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Series { branch, order, out } => cmd_series(config, branch, order, out),
        Command::Trace(a) => cmd_trace(config, a),
        Command::Analyze { what } => cmd_analyze(config, what),
        Command::Verify {
            only,
            depth,
            tol,
            out,
        } => cmd_verify(config, only, depth, tol, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
