//! Batch interface: file formats, commands and SVG output.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 violated domain
//! precondition, 4 failed verification.

pub mod files;
pub mod plot;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cones::delaunay_decomposition;
use crate::develop::DevelopError;
use crate::exact::{format_rational, parse_rational};
use crate::fan::{enumerate_fan, FanError};
use crate::penner::{PennerError, Weighting};
use crate::polyhedron::{check_normal_fan, secondary_polyhedron, PolyhedronError};

pub use files::{load_surface, to_json_string, FileError, SurfaceFile, SCHEMA};
pub use plot::{render, PlotError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    File(#[from] FileError),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Verification(String),
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::File(_) | CliError::Output { .. } => 2,
            CliError::Domain(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl From<PennerError> for CliError {
    fn from(e: PennerError) -> Self {
        match e {
            PennerError::WeightLength { .. } => CliError::Usage(format!("--weights: {e}")),
            PennerError::NonPositiveWeight(_) | PennerError::NegativeWeight(_) | PennerError::ZeroWeighting => {
                CliError::Domain(format!("--weights: {e}"))
            }
            e => CliError::Domain(e.to_string()),
        }
    }
}

impl From<FanError> for CliError {
    fn from(e: FanError) -> Self {
        match e {
            FanError::Invalid(_) => CliError::Verification(e.to_string()),
            e => CliError::Domain(e.to_string()),
        }
    }
}

impl From<PolyhedronError> for CliError {
    fn from(e: PolyhedronError) -> Self {
        match e {
            PolyhedronError::Develop(DevelopError::BadTolerance) => CliError::Usage(format!("--tail-tol: {e}")),
            PolyhedronError::Develop(_) | PolyhedronError::Penner(_) => CliError::Domain(e.to_string()),
            _ => CliError::Verification(e.to_string()),
        }
    }
}

impl From<PlotError> for CliError {
    fn from(e: PlotError) -> Self {
        match e {
            PlotError::UnsupportedDimension { .. } => CliError::Domain(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hypfan", version, about = "Secondary fans and polyhedra of decorated hyperbolic surfaces")]
pub struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true, env = "HYPFAN_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Flip to the Delaunay triangulation for a weighting and report its decomposition.
    Delaunay {
        file: PathBuf,
        /// Comma-separated positive rationals, one per cusp.
        #[arg(long)]
        weights: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the secondary fan.
    Fan {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute the secondary polyhedron and verify its normal fan.
    Polyhedron {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-5)]
        tail_tol: f64,
        /// Tolerance of the normal-fan check.
        #[arg(long, default_value_t = 1e-3)]
        check_tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a fan or polyhedron document as SVG.
    Plot {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_weights(s: &str) -> Result<Weighting, CliError> {
    let w = s
        .split(',')
        .map(|x| parse_rational(x).map_err(|e| CliError::Usage(format!("--weights: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let w = Weighting::new(w)?;
    w.check_positive()?;
    Ok(w)
}

fn document(kind: &str, body: Value) -> Value {
    let mut v = body;
    v["schema"] = json!(SCHEMA);
    v["kind"] = json!(kind);
    v
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Output { path: p.display().to_string(), source }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Output { path: "<stdout>".into(), source }),
    }
}

pub fn cmd_delaunay(file: &Path, weights: &str) -> Result<Value, CliError> {
    let d = load_surface(file)?;
    let w = parse_weights(weights)?;
    let run = d.make_delaunay(&w)?;
    let label = delaunay_decomposition(&run.surface, &w).map_err(|e| CliError::Domain(e.to_string()))?;
    let margins = run.surface.delaunay_margins(&w)?;
    Ok(document(
        "delaunay",
        json!({
            "weights": w.as_slice().iter().map(format_rational).collect::<Vec<_>>(),
            "flip_log": run.flips,
            "surface": serde_json::to_value(SurfaceFile::from_surface(&run.surface, None)).expect("plain data"),
            "weak_edges": label.weak_edges,
            "is_triangulation": label.is_triangulation(),
            "margins": margins.iter().map(format_rational).collect::<Vec<_>>(),
        }),
    ))
}

pub fn cmd_fan(file: &Path, seed: u64) -> Result<Value, CliError> {
    let d = load_surface(file)?;
    let start = Weighting::new(vec![crate::exact::int(1); d.num_cusps()])?;
    let fan = enumerate_fan(&d, &start, seed)?;
    fan.validate()?;
    let mut v = fan.to_json();
    v["seed"] = json!(seed);
    Ok(document("fan", v))
}

/// Returns the document and whether the normal-fan check passed.
pub fn cmd_polyhedron(file: &Path, tail_tol: f64, check_tol: f64, seed: u64) -> Result<(Value, bool), CliError> {
    if !(tail_tol > 0.0 && tail_tol.is_finite()) {
        return Err(CliError::Usage(format!("--tail-tol must be positive, got {tail_tol}")));
    }
    if !(check_tol > 0.0 && check_tol.is_finite()) {
        return Err(CliError::Usage(format!("--check-tol must be positive, got {check_tol}")));
    }
    let d = load_surface(file)?;
    let start = Weighting::new(vec![crate::exact::int(1); d.num_cusps()])?;
    let fan = enumerate_fan(&d, &start, seed)?;
    let p = secondary_polyhedron(&d, &fan, tail_tol)?;
    let (report, passed) = match check_normal_fan(&p, &fan, check_tol) {
        Ok(r) => (r.to_json(), true),
        Err(e @ PolyhedronError::NormalFanMismatch { .. }) => (json!({"passed": false, "error": e.to_string()}), false),
        Err(e) => return Err(e.into()),
    };
    let mut v = p.to_json();
    v["normal_fan"] = report;
    v["fan"] = fan.to_json();
    Ok((document("polyhedron", v), passed))
}

pub fn cmd_plot(input: &Path) -> Result<String, CliError> {
    let text = std::fs::read_to_string(input)
        .map_err(|source| FileError::Io { path: input.display().to_string(), source })?;
    let v: Value = serde_json::from_str(&text).map_err(FileError::from)?;
    Ok(render(&v)?)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        // a second initialization (e.g. in tests) keeps the existing pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match cli.command {
        Command::Delaunay { file, weights, out } => emit(&to_json_string(&cmd_delaunay(&file, &weights)?), out.as_deref()),
        Command::Fan { file, seed, out } => emit(&to_json_string(&cmd_fan(&file, seed)?), out.as_deref()),
        Command::Polyhedron { file, tail_tol, check_tol, seed, out } => {
            let (v, passed) = cmd_polyhedron(&file, tail_tol, check_tol, seed)?;
            emit(&to_json_string(&v), out.as_deref())?;
            if passed {
                Ok(())
            } else {
                Err(CliError::Verification(v["normal_fan"]["error"].as_str().unwrap_or("normal fan mismatch").into()))
            }
        }
        Command::Plot { input, out } => emit(&cmd_plot(&input)?, out.as_deref()),
    }
}

/// Entry point shared by the binary and the tests.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hypfan: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
