//! `lambert`: enumerate Keplerian arcs between two points from the command line.

mod frame;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frame::{Frame, Vec3};
use keplerian_arcs::solver::{minimal_flight_time, solve_all, solve_up_to};
use keplerian_arcs::{Branch, Geometry, LambertError};
use report::{
    sweep_rows, ArcRecord, Boundaries, CountDocument, GeometrySummary, MinimaDocument,
    MinimumRecord, SolveDocument, SweepDocument,
};
use serde::Serialize;
use std::process::ExitCode;

#[derive(Debug)]
pub enum Failure {
    Input(String),
    MissingPlane,
    NonConvergence(String),
}

impl From<LambertError> for Failure {
    fn from(e: LambertError) -> Self {
        match e {
            LambertError::NonConvergence { .. } | LambertError::ToleranceFailure(_) => {
                Failure::NonConvergence(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::MissingPlane => 3,
            Failure::NonConvergence(_) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(m) => m.clone(),
            Failure::MissingPlane => {
                "qa and qb are opposite; pass --plane-normal to fix the orbit plane".into()
            }
            Failure::NonConvergence(m) => m.clone(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lambert",
    version,
    about = "Enumerate Keplerian arcs joining two points in a given time"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Every arc of every type reaching qb after the given flight time.
    Solve {
        #[command(flatten)]
        problem: Problem,
        #[command(flatten)]
        target: Target,
    },
    /// Number of arcs of each type, with the minimal flight times.
    Count {
        #[command(flatten)]
        problem: Problem,
        #[command(flatten)]
        target: Target,
    },
    /// Minimal flight times of the multirevolution types.
    Minima {
        #[command(flatten)]
        problem: Problem,
        /// Largest type listed.
        #[arg(long, default_value_t = 6)]
        max_rev: u32,
    },
    /// Flight time and its slope across the window of one type.
    Sweep {
        #[command(flatten)]
        problem: Problem,
        #[arg(long = "type")]
        k: u32,
        /// Defaults to the branch carrying the type.
        #[arg(long, value_enum)]
        branch: Option<BranchArg>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Debug, Args)]
struct Problem {
    /// Departure point, `x,y` or `x,y,z`.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    qa: Point,
    /// Arrival point, `x,y` or `x,y,z`.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    qb: Point,
    /// Gravitational parameter.
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    /// Normal of the orbit plane; required when the center lies between the points.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    plane_normal: Option<Point>,
    /// Defaults to JSON, or CSV for `sweep`.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
struct Target {
    /// Flight time.
    #[arg(long)]
    tof: f64,
    /// Largest type examined; by default every type that can occur.
    #[arg(long)]
    max_rev: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BranchArg {
    Pos,
    Neg,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Pos => Branch::Positive,
            BranchArg::Neg => Branch::Negative,
        }
    }
}

/// A point or direction; `planar` records a 2-component input.
#[derive(Debug, Clone, Copy)]
struct Point {
    coords: Vec3,
    planar: bool,
}

fn parse_vector(text: &str) -> Result<Point, String> {
    let parts = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    match parts[..] {
        [x, y] => Ok(Point {
            coords: [x, y, 0.0],
            planar: true,
        }),
        [x, y, z] => Ok(Point {
            coords: [x, y, z],
            planar: false,
        }),
        _ => Err(format!("expected 2 or 3 components, got {}", parts.len())),
    }
}

impl Problem {
    fn reduce(&self) -> Result<(Frame, Geometry), Failure> {
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Failure::Input("mu must be positive".into()));
        }
        // Two-component points fix the plane even when they are opposite.
        let planar = self.qa.planar && self.qb.planar;
        let normal = self
            .plane_normal
            .map(|n| n.coords)
            .or(planar.then_some([0.0, 0.0, 1.0]));
        Frame::reduce(self.qa.coords, self.qb.coords, normal, self.mu)
    }

    fn format(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn normalized_tof(target: &Target, frame: &Frame) -> Result<f64, Failure> {
    if !(target.tof > 0.0 && target.tof.is_finite()) {
        return Err(Failure::Input("tof must be positive".into()));
    }
    Ok(target.tof / frame.scales.time)
}

fn render<T: Serialize>(
    document: &T,
    format: Format,
    csv: impl FnOnce(&T) -> String,
) -> Result<String, Failure> {
    match format {
        Format::Json => serde_json::to_string_pretty(document)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| Failure::Input(e.to_string())),
        Format::Csv => Ok(csv(document)),
    }
}

fn run(cli: Cli) -> Result<(String, Option<std::path::PathBuf>), Failure> {
    let (text, out) = match cli.command {
        Command::Solve { problem, target } => {
            let (frame, g) = problem.reduce()?;
            let tof = normalized_tof(&target, &frame)?;
            let report = match target.max_rev {
                Some(k_max) => solve_up_to(&g, tof, k_max)?,
                None => solve_all(&g, tof)?,
            };
            let scales = &frame.scales;
            let document = SolveDocument {
                geometry: GeometrySummary::new(&g, scales),
                boundaries: Boundaries::new(&g, scales),
                tof: target.tof,
                counts: report.counts.clone(),
                total: report.total(),
                arcs: report
                    .arcs
                    .iter()
                    .map(|arc| ArcRecord::new(&g, &frame, arc))
                    .collect::<Result<_, _>>()?,
                minima: report
                    .minima
                    .iter()
                    .map(|m| MinimumRecord::new(&g, scales, m))
                    .collect(),
            };
            (
                render(&document, problem.format(Format::Json), SolveDocument::csv)?,
                problem.out,
            )
        }
        Command::Count { problem, target } => {
            let (frame, g) = problem.reduce()?;
            let tof = normalized_tof(&target, &frame)?;
            let report = match target.max_rev {
                Some(k_max) => solve_up_to(&g, tof, k_max)?,
                None => solve_all(&g, tof)?,
            };
            let scales = &frame.scales;
            let document = CountDocument {
                geometry: GeometrySummary::new(&g, scales),
                boundaries: Boundaries::new(&g, scales),
                tof: target.tof,
                counts: report.counts.clone(),
                total: report.total(),
                minima: report
                    .minima
                    .iter()
                    .map(|m| MinimumRecord::new(&g, scales, m))
                    .collect(),
            };
            (
                render(&document, problem.format(Format::Json), CountDocument::csv)?,
                problem.out,
            )
        }
        Command::Minima { problem, max_rev } => {
            let (frame, g) = problem.reduce()?;
            let scales = &frame.scales;
            let minima = (2..=max_rev)
                .map(|k| minimal_flight_time(&g, k).map(|m| MinimumRecord::new(&g, scales, &m)))
                .collect::<Result<_, _>>()?;
            let document = MinimaDocument {
                geometry: GeometrySummary::new(&g, scales),
                boundaries: Boundaries::new(&g, scales),
                gap_bound: g.gap_bound() * scales.time,
                minima,
            };
            (
                render(&document, problem.format(Format::Json), MinimaDocument::csv)?,
                problem.out,
            )
        }
        Command::Sweep {
            problem,
            k,
            branch,
            samples,
        } => {
            let (frame, g) = problem.reduce()?;
            let branch = branch.map_or(Branch::of_type(k), Branch::from);
            let document = SweepDocument {
                geometry: GeometrySummary::new(&g, &frame.scales),
                k,
                branch: branch.name(),
                rows: sweep_rows(&g, &frame.scales, k, branch, samples)?,
            };
            (
                render(&document, problem.format(Format::Csv), SweepDocument::csv)?,
                problem.out,
            )
        }
    };
    Ok((text, out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, out) = match run(cli) {
        Ok(result) => result,
        Err(failure) => {
            eprintln!("lambert: {}", failure.message());
            return ExitCode::from(failure.exit_code());
        }
    };
    let written = match out {
        Some(path) => std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("lambert: {message}");
            ExitCode::FAILURE
        }
    }
}
