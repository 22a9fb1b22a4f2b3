//! `qspectra` — spectral reports, slice-plane scans, model queries, and
//! the invariant-verification suite for quaternionic operators.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

mod qparse;
mod scan;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qspectra::models::{self, OperatorModel, WeightRule};
use qspectra::spectrum::{self, SpectrumKind};
use qspectra::QMatrix;
use serde_json::json;

#[derive(Parser)]
#[command(name = "qspectra", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the S-spectrum report of a matrix file
    Spectrum {
        /// Matrix JSON file ({"n": ..., "entries": [[[w,x,y,z], ...], ...]})
        #[arg(long)]
        input: PathBuf,
        /// Report destination (stdout when omitted)
        #[arg(long)]
        output: Option<PathBuf>,
        /// Eigensphere clustering radius override
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Scan a slice plane and emit a CSV grid plus a PGM heatmap
    Scan {
        #[arg(long)]
        input: PathBuf,
        /// Slice plane: i, j, k, or an "x,y,z" imaginary direction
        #[arg(long, default_value = "i")]
        slice: String,
        /// Grid center "x,y" on the slice plane
        #[arg(long, default_value = "0,0")]
        center: String,
        /// Side length of the scanned square
        #[arg(long, default_value_t = 4.0)]
        window: f64,
        /// Grid resolution per side (max 4096)
        #[arg(long, default_value_t = 256)]
        res: usize,
        #[arg(long, value_enum, default_value_t = Quantity::MinSingular)]
        quantity: Quantity,
        /// Output basename; writes <output>.csv and <output>.pgm
        #[arg(long)]
        output: PathBuf,
    },
    /// Run the invariant-verification suites
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Test hook: corrupt one gauge to exercise the failure path
        #[arg(long, hide = true)]
        corrupt_gauge: bool,
    },
    /// Query a closed-form operator model at a point
    Model {
        /// unilateral-shift | bilateral-shift | weighted-shift:harmonic | diagonal:<file>
        name: String,
        /// Quaternion literal, e.g. "0.5+0.5i" or "1-2j+0.3k"
        #[arg(long)]
        query: String,
        /// Also compare against an N×N truncated section
        #[arg(long)]
        truncate: Option<usize>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// κ(R_q(A)): smallest singular value of the pseudo-resolvent
    MinSingular,
    /// 1/‖R_q(A)⁻¹‖, zero on the spectrum
    NormInverse,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Spectra,
    Kato,
    Local,
    Models,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Spectrum { input, output, tol } => {
            let a = load_matrix(&input)?;
            let report = spectrum::s_spectrum(&a, tol).map_err(|e| e.to_string())?;
            let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
            match output {
                Some(path) => fs::write(&path, text).map_err(|e| e.to_string())?,
                None => println!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Scan { input, slice, center, window, res, quantity, output } => {
            if res == 0 || res > 4096 {
                return Err(format!("resolution {res} outside 1..=4096"));
            }
            if !(window > 0.0) || !window.is_finite() {
                return Err(format!("window {window} must be positive and finite"));
            }
            let a = load_matrix(&input)?;
            let unit = qparse::parse_slice(&slice)?;
            let (cx, cy) = qparse::parse_center(&center)?;
            let grid = scan::scan_grid(&a, &unit, (cx, cy), window, res, quantity);
            fs::write(output.with_extension("csv"), grid.to_csv()).map_err(|e| e.to_string())?;
            fs::write(output.with_extension("pgm"), grid.to_pgm()).map_err(|e| e.to_string())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, seed, trials, corrupt_gauge } => {
            let results = verify::run_suite(suite, seed, trials.max(1), corrupt_gauge);
            let mut failed = false;
            println!("{:<44} {:>9} {:>15}", "invariant", "passes", "worst residual");
            for r in &results {
                let ok = r.passes == r.trials;
                failed |= !ok;
                println!(
                    "{:<44} {:>4}/{:<4} {:>15.3e} {}",
                    r.name,
                    r.passes,
                    r.trials,
                    r.worst_residual,
                    if ok { "ok" } else { "FAIL" }
                );
            }
            Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Command::Model { name, query, truncate } => {
            let model = parse_model(&name)?;
            let q = qparse::parse_quaternion(&query)?;
            let mut out = json!({
                "model": model.name(),
                "query": [q.w, q.x, q.y, q.z],
                "descriptors": {
                    "spectral_radius": model.spectral_radius(),
                    "lower_index": model.lower_index(),
                    "invertible": model.is_invertible(),
                },
                "membership": {
                    "s_spectrum": models::model_membership(&model, &q, SpectrumKind::SSpectrum),
                    "approximate_point":
                        models::model_membership(&model, &q, SpectrumKind::ApproximatePoint),
                    "surjectivity":
                        models::model_membership(&model, &q, SpectrumKind::Surjectivity),
                    "compression":
                        models::model_membership(&model, &q, SpectrumKind::Compression),
                    "kato": models::model_kato_membership(&model, &q),
                },
            });
            if let Some(n) = truncate {
                if n == 0 {
                    return Err("truncation size must be >= 1".into());
                }
                let report =
                    models::truncation_report(&model, n, &[q]).map_err(|e| e.to_string())?;
                out["truncation"] =
                    serde_json::to_value(&report).map_err(|e| e.to_string())?;
            }
            println!("{}", serde_json::to_string_pretty(&out).map_err(|e| e.to_string())?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_matrix(path: &PathBuf) -> Result<QMatrix, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    QMatrix::from_json_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_model(name: &str) -> Result<OperatorModel, String> {
    match name {
        "unilateral-shift" => Ok(OperatorModel::UnilateralShift),
        "bilateral-shift" => Ok(OperatorModel::BilateralShift),
        "weighted-shift:harmonic" => {
            OperatorModel::weighted_shift(WeightRule::Harmonic).map_err(|e| e.to_string())
        }
        other => {
            if let Some(path) = other.strip_prefix("diagonal:") {
                let text = fs::read_to_string(path)
                    .map_err(|e| format!("cannot read {path}: {e}"))?;
                let entries = qparse::parse_quaternion_list(&text)?;
                OperatorModel::diagonal(entries).map_err(|e| e.to_string())
            } else {
                Err(format!(
                    "unknown model '{other}'; expected unilateral-shift, bilateral-shift, \
                     weighted-shift:harmonic, or diagonal:<file>"
                ))
            }
        }
    }
}
