//! Command-line front end for the Ekedahl–Oort classifier: classify single
//! curves, sweep family parameter spaces with deterministic CSV/JSON output,
//! analyze symplectic semilinear modules supplied directly, and print the
//! 2^g stratum lattice. The binary is a thin wrapper around [`run`], which
//! takes the argument vector and the two output streams so the whole
//! surface is testable in-process.

pub mod commands;
pub mod input;
pub mod sweep;

pub use commands::{cmd_curve, cmd_module, cmd_sweep, cmd_types};
pub use sweep::{
    bucket_key, csv_string, field_json, growth_report, log3_ceil_hundredths, sweep_family,
    GrowthReport, RowOutcome, SweepReport, SweepRow,
};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use eo_core::{CurveError, DeRhamError, EoError};
use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONSTRAINT: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;
pub const EXIT_BAD_INPUT: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

/// Command failures, each mapped to a distinct exit code.
#[derive(Clone, Debug)]
pub enum CliError {
    /// A family constraint rejected the input (exit 2).
    Constraint(String),
    /// The requested model is singular (exit 3).
    Singular(String),
    /// Unusable arguments or files (exit 4).
    BadInput(String),
    /// A failure that indicates a bug rather than bad input (exit 5).
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Constraint(_) => EXIT_CONSTRAINT,
            CliError::Singular(_) => EXIT_SINGULAR,
            CliError::BadInput(_) => EXIT_BAD_INPUT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Constraint(msg) => write!(f, "constraint violation: {msg}"),
            CliError::Singular(msg) => write!(f, "singular curve: {msg}"),
            CliError::BadInput(msg) => write!(f, "{msg}"),
            CliError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> CliError {
        match e {
            CurveError::ConstraintViolation(msg) => CliError::Constraint(msg),
            CurveError::SingularCurve(msg) => CliError::Singular(msg),
            other => CliError::BadInput(other.to_string()),
        }
    }
}

impl From<DeRhamError> for CliError {
    fn from(e: DeRhamError) -> CliError {
        CliError::Internal(e.to_string())
    }
}

impl From<EoError> for CliError {
    fn from(e: EoError) -> CliError {
        match e {
            EoError::NonNested | EoError::InterpolationAmbiguous => {
                CliError::Internal(e.to_string())
            }
            other => CliError::BadInput(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "eo",
    version,
    about = "Ekedahl–Oort invariants of genus-4 trigonal curves in characteristic 3"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Classify a single curve (Cartier–Manin matrix, a, f, E-O type)
    Curve(CurveArgs),
    /// Classify every parameter point of a family over GF(3^k)
    Sweep(SweepArgs),
    /// Validate and classify a symplectic module or a direct sum of modules
    Module(ModuleArgs),
    /// List the 2^g Ekedahl–Oort types with codim, p-rank, a-number, covers
    Types(TypesArgs),
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    /// Family name: F32, F321, F43A, F43B, F43C or F21
    #[arg(long, conflicts_with = "json")]
    pub family: Option<String>,
    /// Coefficient field, `3` or `3^k` (modulus auto-selected)
    #[arg(long, default_value = "3")]
    pub field: String,
    /// Parameters as element enumeration indices, e.g. a3=0,a2=1,a0=2,b=0
    #[arg(long, default_value = "")]
    pub params: String,
    /// Read the curve from a JSON description file instead of flags
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Family name: F32, F321, F43A, F43B, F43C or F21
    #[arg(long)]
    pub family: String,
    /// Coefficient field, `3` or `3^k`
    #[arg(long, default_value = "3")]
    pub field: String,
    /// Write the per-point rows to this CSV file
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
    /// Write the summary report (or growth report) to this JSON file
    #[arg(long, value_name = "FILE")]
    pub json: Option<PathBuf>,
    /// Sweep k = 1, 2, 3 and report log₃(count) per type (dimension evidence)
    #[arg(long)]
    pub growth: bool,
    /// Worker threads (overrides the EO_WORKERS environment variable)
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ModuleArgs {
    /// Module specs: a JSON file, `ordinary-elliptic`,
    /// `supersingular-elliptic`, or `μ@g` such as `[2,1]@3`
    #[arg(required = true, value_name = "SPEC")]
    pub specs: Vec<String>,
    /// Direct-sum another module onto the result (repeatable)
    #[arg(long = "direct-sum", value_name = "SPEC")]
    pub direct_sum: Vec<String>,
    /// Coefficient field for named blocks and standard modules
    #[arg(long, default_value = "3")]
    pub field: String,
}

#[derive(Args, Debug)]
pub struct TypesArgs {
    /// Genus, 1..=6
    #[arg(default_value_t = 4)]
    pub genus: usize,
}

/// Worker count: explicit flag first, then the EO_WORKERS environment
/// variable, then the default thread pool.
pub fn resolve_workers(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("EO_WORKERS") {
        Err(_) => Ok(None),
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::BadInput(format!("EO_WORKERS must be a number, got `{s}`"))),
    }
}

/// Parse the argument vector, dispatch, and write all output; returns the
/// process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_BAD_INPUT
                }
            };
        }
    };
    let result = match &cli.cmd {
        Cmd::Curve(args) => cmd_curve(args),
        Cmd::Sweep(args) => cmd_sweep(args),
        Cmd::Module(args) => cmd_module(args),
        Cmd::Types(args) => cmd_types(args),
    };
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
