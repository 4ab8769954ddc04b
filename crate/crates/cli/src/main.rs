//! Command-line driver for the sphere-approximation library.
//!
//! Subcommands:
//! * `optimize` -- best patch for one half-side, JSON result
//! * `table`    -- dyadic refinement table with convergence rates, CSV
//! * `mesh`     -- sphere covers as OBJ meshes plus per-vertex error CSV
//! * `rect`     -- the triangle of optimal rectangle parameters, CSV
//! * `verify`   -- property suites and oracle cross-checks, JSON
//!
//! Exit codes: 0 success, 1 completed verification with failed checks,
//! 2 parameter/solver/IO errors. Every file-writing run leaves a
//! `<output>.manifest.json` sibling recording flags, tolerances, and the
//! list of files written; rerunning with identical flags reproduces every
//! output byte for byte (the manifest differs only in its timestamp).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use quadsphere::ErrorKind;

mod commands;
mod manifest;

#[derive(Parser)]
#[command(name = "quadsphere", version, about = "Biquadratic Bezier sphere approximation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ErrorFlag {
    /// Radial distance to the unit sphere.
    Radial,
    /// The algebraic proxy (squared norm minus one).
    Simplified,
}

impl From<ErrorFlag> for ErrorKind {
    fn from(flag: ErrorFlag) -> Self {
        match flag {
            ErrorFlag::Radial => ErrorKind::Radial,
            ErrorFlag::Simplified => ErrorKind::Simplified,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SplineFlag {
    /// Two hemispherical patches (positionally continuous).
    Two,
    /// Six cube-face patches (positionally continuous).
    Six,
    /// Six cube-face patches with shared tangent planes.
    G1,
}

#[derive(Subcommand)]
enum Command {
    /// Find the optimal patch parameters for one spherical square.
    Optimize {
        /// Half-side length of the spherical square, in (0, sqrt(2)/2].
        #[arg(long)]
        a: f64,
        /// Error measure to minimize.
        #[arg(long, value_enum, default_value = "radial")]
        error: ErrorFlag,
        /// Newton residual target.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Also write the result JSON (plus a manifest) here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write the refinement table a = a_max/2^i with convergence rates.
    Table {
        /// Number of rows (at least 2, so a rate exists).
        #[arg(long)]
        levels: u32,
        /// Error measure to minimize.
        #[arg(long, value_enum, default_value = "radial")]
        error: ErrorFlag,
        /// Output CSV path.
        #[arg(long)]
        csv: PathBuf,
    },
    /// Export a sphere cover as an OBJ mesh plus a per-vertex error CSV.
    Mesh {
        /// Which cover to export.
        #[arg(long, value_enum)]
        spline: SplineFlag,
        /// Cells per patch side (vertices per side = samples + 1).
        #[arg(long)]
        samples: usize,
        /// Output OBJ path; the error CSV lands next to it.
        #[arg(long)]
        obj: PathBuf,
    },
    /// Solve the region of optimal parameter pairs for a spherical rectangle.
    Rect {
        /// Long half-side.
        #[arg(long)]
        a: f64,
        /// Short half-side (at most a).
        #[arg(long)]
        b: f64,
        /// Solve the full multi-optimum region (required; reserved for
        /// future single-point modes).
        #[arg(long, required = true)]
        region: bool,
        /// Output CSV path.
        #[arg(long)]
        csv: PathBuf,
    },
    /// Run the verification suite at one half-side length.
    Verify {
        /// Half-side length of the spherical square.
        #[arg(long)]
        a: f64,
        /// Dense-grid resolution for the extremum location check
        /// (odd, at least 101).
        #[arg(long, default_value_t = 1001)]
        grid: usize,
        /// Also write the report JSON (plus a manifest) here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// How a command run ended, beyond plain success.
enum Failure {
    /// Checks ran to completion and at least one failed.
    ChecksFailed,
    /// The command could not do its job (bad parameters, solver failure
    /// already reported on stdout, or an IO problem).
    Error(String),
}

impl From<quadsphere::Error> for Failure {
    fn from(e: quadsphere::Error) -> Self {
        Failure::Error(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(format!("io error: {e}"))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Optimize { a, error, tol, json } => {
            commands::optimize(a, error.into(), tol, json.as_deref())
        }
        Command::Table { levels, error, csv } => commands::table(levels, error.into(), &csv),
        Command::Mesh { spline, samples, obj } => commands::mesh(spline, samples, &obj),
        Command::Rect { a, b, region: _, csv } => commands::rect(a, b, &csv),
        Command::Verify { a, grid, json } => commands::verify(a, grid, json.as_deref()),
    }
}

fn main() -> ExitCode {
    // Clap itself exits with code 2 on usage errors, matching the
    // parameter-error convention below.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::ChecksFailed) => ExitCode::from(1),
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
