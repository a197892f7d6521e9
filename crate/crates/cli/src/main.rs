//! `gkcs`: spectrum tables, coherent states, statistics scans, quantized
//! operators and the identity suite from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 numerical failure (evaluation budget, truncation cap, overflow).

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gkcs_core::{Error, ModelParams};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "gkcs", version, about = "Poschl-Teller coherent-state toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Energies E_n, excitations s n(n+2nu+2) and moments rho_n.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        levels: usize,
    },
    /// Fock coefficients and observables of |z, gamma>.
    Cs {
        #[command(flatten)]
        common: Common,
    },
    /// <N>, Mandel Q, Fano factor, g2 and the metric W over a grid of x = |z|^2.
    StatsScan {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "0:5:0.1", value_parser = parse_range)]
        x: Range,
    },
    /// The Fubini-Study metric W(x) and its two terms over a grid of x = |z|^2.
    GeometryScan {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "0:5:0.1", value_parser = parse_range)]
        x: Range,
    },
    /// Matrix of a quantized symbol on {|0>, ..., |nmax>}.
    Quantize {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        symbol: SymbolArg,
        #[arg(long, default_value_t = 1)]
        alpha: usize,
        #[arg(long, default_value_t = 0)]
        sigma: usize,
        #[arg(long, default_value_t = 1.0)]
        power: f64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        harmonic: i64,
    },
    /// Run the identity suite and print one row per check.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Use the fixed acceptance parameter grids instead of the given model.
        #[arg(long)]
        acceptance: bool,
    },
}

#[derive(Debug, Clone, Args)]
struct Common {
    #[arg(long, default_value_t = 0.0)]
    nu: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
    /// s = 2 M eps0
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// Box length.
    #[arg(long = "L", default_value_t = 1.0)]
    box_l: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    z_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    z_im: f64,
    /// Matrix truncation for `quantize`, truncation cap for `cs`.
    #[arg(long)]
    nmax: Option<usize>,
    /// Tail tolerance for coherent states, quadrature tolerance for radial symbols.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

impl Common {
    fn params(&self) -> Result<ModelParams, Failure> {
        Ok(ModelParams::new(self.nu, self.beta, self.s, self.box_l)?)
    }

    fn tol(&self) -> Result<f64, Failure> {
        if self.tol > 0.0 && self.tol < 1.0 {
            Ok(self.tol)
        } else {
            Err(Failure::Config(format!("--tol must lie in (0, 1), got {}", self.tol)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SymbolArg {
    Z,
    Zbar,
    Monomial,
    RadialPower,
    AngularHarmonic,
    BosonA,
    BosonAdag,
}

/// `start:stop:step`, inclusive of `stop` up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Range {
    start: f64,
    step: f64,
    count: usize,
}

const MAX_GRID_POINTS: usize = 1_000_000;

impl Range {
    fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

fn parse_range(s: &str) -> Result<Range, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, h] = parts[..] else {
        return Err(format!("expected start:stop:step, got {s:?}"));
    };
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let (start, stop, step) = (num(a)?, num(b)?, num(h)?);
    if !(start.is_finite() && stop.is_finite() && step > 0.0 && step.is_finite()) || stop < start || start < 0.0 {
        return Err(format!("need 0 <= start <= stop and step > 0, got {s:?}"));
    }
    let intervals = ((stop - start) / step * (1.0 + 1e-12)).floor();
    if intervals >= MAX_GRID_POINTS as f64 {
        return Err(format!("grid {s:?} has more than {MAX_GRID_POINTS} points"));
    }
    Ok(Range {
        start,
        step,
        count: intervals as usize + 1,
    })
}

/// What went wrong, mapped onto the exit codes.
#[derive(Debug)]
enum Failure {
    Config(String),
    Verification(String),
    Numerical(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::Domain { .. } => Failure::Config(e.to_string()),
            Error::Verification { .. } => Failure::Verification(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Config(_) | Failure::Io(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

const BUDGET_VAR: &str = "GKCS_EVAL_BUDGET";

fn eval_budget() -> Result<usize, Failure> {
    match std::env::var(BUDGET_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(gkcs_core::quadrature::DEFAULT_BUDGET),
        Err(e) => Err(Failure::Config(format!("{BUDGET_VAR}: {e}"))),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(b) if b > 0 => Ok(b),
            _ => Err(Failure::Config(format!("{BUDGET_VAR} must be a positive integer, got {v:?}"))),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gkcs: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
