//! `hypercone` command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure or numerical error,
//! 2 invalid input, 3 truncation insufficient, 4 undecidable membership,
//! 5 non-generic spectrum where a generic one is required. Every error is a
//! single stderr line `hypercone: <reason>: <message>`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use hypercone::Error;

#[derive(Parser, Debug)]
#[command(
    name = "hypercone",
    version,
    about = "Scattering resonances of hyperbolic cones",
    allow_negative_numbers = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a cross-section spectrum in the file schema.
    Spectrum(SpectrumArgs),
    /// Enumerate resonances up to |λ| <= --lambda-max.
    Resonances(ResonanceArgs),
    /// Classify the hypergeometric prefactor at one λ.
    Classify(ClassifyArgs),
    /// Resonance counts against the Weyl leading term.
    Weyl(WeylArgs),
    /// Run a self-verification battery.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("source").required(true).args(["sphere", "circle", "file"])))]
pub struct SourceArgs {
    /// Round S^n cross-section.
    #[arg(long, value_name = "N", allow_negative_numbers = true)]
    pub sphere: Option<i64>,
    /// Circle of radius RHO ("p/q", a decimal, or any float for the inexact path).
    #[arg(long, value_name = "RHO", allow_negative_numbers = true)]
    pub circle: Option<String>,
    /// Spectrum JSON file.
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
    /// Largest mode index for the built-in generators.
    #[arg(long)]
    pub jmax: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ResonanceArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_name = "LAMBDA", allow_hyphen_values = true)]
    pub lambda_max: f64,
    /// Largest depth k; chosen from --lambda-max when omitted.
    #[arg(long)]
    pub kmax: Option<u64>,
    /// Emit rows even when the truncation cannot certify completeness.
    #[arg(long)]
    pub allow_partial: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mu").required(true).args(["mu_sq", "mu_sq_exact"])))]
pub struct ClassifyArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_name = "MU_SQ")]
    pub mu_sq: Option<f64>,
    #[arg(long, value_name = "P/Q")]
    pub mu_sq_exact: Option<String>,
    /// Im λ; a rational string keeps the decision exact.
    #[arg(long, value_name = "T", allow_hyphen_values = true)]
    pub lambda_im: String,
    /// Re λ (float path when nonzero).
    #[arg(long, value_name = "X", allow_hyphen_values = true, default_value_t = 0.0)]
    pub lambda_re: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct WeylArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Comma-separated λ values.
    #[arg(
        long,
        value_name = "L1,L2,...",
        value_delimiter = ',',
        required = true,
        allow_hyphen_values = true
    )]
    pub lambda_grid: Vec<f64>,
    #[arg(long)]
    pub kmax: Option<u64>,
    /// Count only the generic modes of a partly non-generic spectrum.
    #[arg(long)]
    pub allow_partial: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Text report by default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// A failed command: exit code, reason code and message.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub reason: &'static str,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, reason: &'static str, message: impl Into<String>) -> Self {
        Failure {
            code,
            reason,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, reason) = match &e {
            Error::ValidationError(_) => (2, "validation_error"),
            Error::ParseError { .. } => (2, "parse_error"),
            Error::InvalidDimension(_) => (2, "invalid_dimension"),
            Error::InvalidRadius(_) => (2, "invalid_radius"),
            Error::InvalidArgument(_) => (2, "invalid_argument"),
            Error::DomainError { .. } => (2, "domain_error"),
            Error::Io(_) => (2, "io_error"),
            Error::TruncationInsufficient { .. } => (3, "truncation_insufficient"),
            Error::UndecidableMembership { .. } => (4, "undecidable_membership"),
            Error::PoleAtNonPositiveInteger(_) => (1, "gamma_pole"),
            Error::LowerParameterPole(_) => (1, "lower_parameter_pole"),
            Error::NoConvergence { .. } => (1, "no_convergence"),
            Error::InconsistentParams(_) => (1, "inconsistent_params"),
            Error::ParameterPole(_) => (1, "parameter_pole"),
            Error::PoleEvaluation { .. } => (1, "pole_evaluation"),
            Error::QuadratureFailure { .. } => (1, "quadrature_failure"),
            Error::ProbeInconclusive { .. } => (1, "probe_inconclusive"),
        };
        Failure::new(code, reason, e.to_string())
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("HYPERCONE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t >= 1).ok_or_else(|| {
        Failure::new(
            2,
            "invalid_environment",
            format!("HYPERCONE_THREADS must be an integer >= 1 (got {raw:?})"),
        )
    })?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::new(1, "thread_pool", e.to_string()))?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Spectrum(args) => commands::spectrum(&args, &mut out),
        Command::Resonances(args) => commands::resonances(&args, &mut out),
        Command::Classify(args) => commands::classify(&args, &mut out),
        Command::Weyl(args) => commands::weyl(&args, &mut out),
        Command::Verify(args) => commands::verify(&args, &mut out),
    }
}

fn single_line(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                eprintln!("hypercone: usage_error: missing subcommand (see --help)");
                return ExitCode::from(2);
            }
            let rendered = e.render().to_string();
            let first = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid usage");
            eprintln!(
                "hypercone: usage_error: {}",
                single_line(first.trim_start_matches("error:").trim())
            );
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("hypercone: {}: {}", f.reason, single_line(&f.message));
            ExitCode::from(f.code)
        }
    }
}
