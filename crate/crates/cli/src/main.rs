//! `phchain` — spectra, thresholds, and merger combinatorics of
//! pseudo-Hermitian chain Hamiltonians at the command line.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

mod commands;
mod format;

use clap::{Parser, Subcommand, ValueEnum};
use phchain_core::ChainModel;
use std::path::PathBuf;
use std::process::ExitCode;

use commands::{CliError, CmdResult, OutputFormat};

#[derive(Parser)]
#[command(name = "phchain", version, about = "Pseudo-Hermitian chain spectra, thresholds, and merger patterns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Energy trajectories over a t range, one row per (sample, energy)
    Spectrum {
        /// Half-dimension J (the matrix is 2J x 2J)
        #[arg(long = "J")]
        j: usize,
        /// Coupling coefficients G_1,...,G_J, outermost first
        #[arg(long = "G", value_name = "G1,G2,...", allow_hyphen_values = true)]
        g: String,
        /// Range START:END; decreasing ranges follow the leftwards time convention
        #[arg(long = "t", value_name = "START:END", allow_hyphen_values = true)]
        t: String,
        /// Number of grid samples (>= 2)
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write to a file instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Coupling switch-off points xi_n(t) = 1 and the quasi-Hermiticity loss
    Thresholds {
        #[arg(long = "J")]
        j: usize,
        #[arg(long = "G", value_name = "G1,G2,...", allow_hyphen_values = true)]
        g: String,
        /// Upper end of the xi-root search window (0, MAX]
        #[arg(long, default_value_t = 3.0)]
        search_max: f64,
        /// Override the reality-predicate bracket, HIGH:LOW (real at HIGH, complex at LOW)
        #[arg(long, value_name = "HIGH:LOW", allow_hyphen_values = true)]
        qh_bracket: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Walk a t range and classify the level mergers into label pairs
    Classify {
        #[arg(long = "J")]
        j: usize,
        #[arg(long = "G", value_name = "G1,G2,...", allow_hyphen_values = true)]
        g: String,
        #[arg(long = "t", value_name = "START:END", allow_hyphen_values = true)]
        t: String,
        /// Grid samples for the walk
        #[arg(long, default_value_t = 4000)]
        steps: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Merger-pattern multiplicity table for K = 0..maxK
    Enumerate {
        #[arg(long = "max-k")]
        max_k: usize,
        /// Append brute-force counts (N <= 20) and an agreement column
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Real-spectrum domain of the four-level chain over the unit square plus its boundary curves
    Domain4 {
        /// Grid points per axis (>= 2)
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn parse_g(text: &str, j: usize) -> Result<ChainModel, CliError> {
    let coeffs: Result<Vec<f64>, _> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let coeffs = coeffs.map_err(|e| CliError::Config(format!("bad --G value: {e}")))?;
    if coeffs.len() != j {
        return Err(CliError::Config(format!(
            "--G needs exactly {j} comma-separated values, got {}",
            coeffs.len()
        )));
    }
    ChainModel::new(j, coeffs).map_err(|e| CliError::Config(e.to_string()))
}

fn parse_pair(text: &str, what: &str) -> Result<(f64, f64), CliError> {
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|e| CliError::Config(format!("bad {what} value: {e}")))
    };
    match text.split_once(':') {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => Err(CliError::Config(format!(
            "{what} must be written as two numbers separated by ':'"
        ))),
    }
}

fn run(cli: Cli) -> Result<(CmdResult, Option<PathBuf>), CliError> {
    match cli.command {
        Command::Spectrum {
            j,
            g,
            t,
            steps,
            format,
            output,
        } => {
            let model = parse_g(&g, j)?;
            let (start, end) = parse_pair(&t, "--t")?;
            let res = commands::run_spectrum(&model, start, end, steps, format.into())?;
            Ok((res, output))
        }
        Command::Thresholds {
            j,
            g,
            search_max,
            qh_bracket,
            output,
        } => {
            let model = parse_g(&g, j)?;
            let bracket = qh_bracket
                .map(|b| parse_pair(&b, "--qh-bracket"))
                .transpose()?;
            let res = commands::run_thresholds(&model, search_max, bracket)?;
            Ok((res, output))
        }
        Command::Classify {
            j,
            g,
            t,
            steps,
            output,
        } => {
            let model = parse_g(&g, j)?;
            let (start, end) = parse_pair(&t, "--t")?;
            let res = commands::run_classify(&model, start, end, steps)?;
            Ok((res, output))
        }
        Command::Enumerate {
            max_k,
            oracle,
            format,
            output,
        } => {
            let res = commands::run_enumerate(max_k, oracle, format.into())?;
            Ok((res, output))
        }
        Command::Domain4 { grid, output } => {
            let res = commands::run_domain4(grid)?;
            Ok((res, output))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((result, output)) => {
            if let Some(path) = output {
                if let Err(e) = std::fs::write(&path, &result.output) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(3);
                }
            } else {
                print!("{}", result.output);
            }
            if let Some(note) = result.failure {
                eprintln!("error: {note}");
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
