//! Command-line front end for the `monoperron` library: discriminants,
//! classification, monogenicity reports, grid search with a JSON-lines
//! ledger, and a grid-wide invariant check.

use std::fmt;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use monoperron::arith::DEFAULT_BUDGET;
use monoperron::classify::{classify, ClassifyError, SolverConfig};
use monoperron::family::{
    build, discriminant_closed, family_irreducible, FamilyError, FamilyParams, PipelineConfig,
};
use monoperron::irreducible::is_irreducible;
use monoperron::monogenic::{monogenic, Method, MonogenicError, Verdict};
use monoperron::poly::{discriminant_resultant, IntPoly, PolyError};

pub mod search;
pub mod verify;

pub const LEDGER_ENV: &str = "MONOPERRON_LEDGER";

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Invalid = 2,
    Violation = 3,
    Precision = 4,
    Budget = 5,
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn new(exit: Exit, message: impl Into<String>) -> Self {
        CliError {
            exit,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new(Exit::Invalid, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        let exit = match e {
            ClassifyError::PrecisionExhausted { .. } | ClassifyError::NonConvergence => Exit::Precision,
            _ => Exit::Invalid,
        };
        CliError::new(exit, e.to_string())
    }
}

impl From<MonogenicError> for CliError {
    fn from(e: MonogenicError) -> Self {
        let exit = match e {
            MonogenicError::MethodDisagreement { .. } => Exit::Violation,
            _ => Exit::Invalid,
        };
        CliError::new(exit, e.to_string())
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Violation { .. } => CliError::new(Exit::Violation, e.to_string()),
            FamilyError::Classify(c) => c.into(),
            FamilyError::Monogenic(m) => m.into(),
            _ => CliError::invalid(e.to_string()),
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::invalid(format!("i/o error: {e}"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "monoperron", version, about = "Monogenic strictly-Perron trinomials x^n - a x^(n-1) - p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form and resultant discriminants of x^n - a x^(n-1) - p.
    Disc { n: u32, a: u64, p: u64 },
    /// Classify a monic polynomial by the moduli of its roots.
    Classify {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long, value_name = "BITS")]
        precision: Option<usize>,
    },
    /// Decide monogenicity of a trinomial.
    Monogenic {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long, default_value = "both")]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_name = "BITS")]
        precision: Option<usize>,
    },
    /// Certify every prime p <= pmax for the given (n, a) range.
    Search(search::SearchArgs),
    /// Check every invariant over a parameter grid.
    Verify(verify::VerifyArgs),
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct PolyInput {
    /// Ascending coefficients, constant term first.
    #[arg(long, allow_hyphen_values = true, value_name = "C0,C1,...")]
    pub coeffs: Option<String>,
    #[arg(long, num_args = 3, value_names = ["N", "A", "P"])]
    pub trinomial: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// A polynomial from the command line, with its family parameters when known.
pub struct ParsedPoly {
    pub poly: IntPoly,
    pub params: Option<FamilyParams>,
}

pub fn parse_params(n: u64, a: u64, p: u64) -> Result<FamilyParams, CliError> {
    let n = u32::try_from(n).map_err(|_| CliError::invalid(format!("degree {n} too large")))?;
    Ok(FamilyParams::new(n, a, p)?)
}

impl PolyInput {
    pub fn parse(&self) -> Result<ParsedPoly, CliError> {
        if let Some(text) = &self.coeffs {
            let poly: IntPoly = text.parse()?;
            return Ok(ParsedPoly { poly, params: None });
        }
        match self.trinomial.as_deref() {
            Some(&[n, a, p]) => {
                let params = parse_params(n, a, p)?;
                Ok(ParsedPoly {
                    poly: build(&params),
                    params: Some(params),
                })
            }
            _ => Err(CliError::invalid("expected --coeffs or --trinomial N A P")),
        }
    }
}

pub fn solver_config(precision: Option<usize>) -> SolverConfig {
    precision.map(SolverConfig::with_start_bits).unwrap_or_default()
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

pub fn cmd_disc(n: u32, a: u64, p: u64, out: &mut impl Write) -> Result<Exit, CliError> {
    let params = FamilyParams::new(n, a, p)?;
    let closed = discriminant_closed(&params);
    let oracle = discriminant_resultant(&build(&params))?;
    let agree = closed == oracle;
    writeln!(out, "{closed}")?;
    writeln!(out, "{oracle}")?;
    let json = serde_json::json!({
        "n": n, "a": a, "p": p,
        "closed": closed.to_string(),
        "oracle": oracle.to_string(),
        "agree": agree,
    });
    writeln!(out, "{json}")?;
    Ok(if agree { Exit::Success } else { Exit::Violation })
}

pub fn cmd_classify(input: &PolyInput, precision: Option<usize>, out: &mut impl Write) -> Result<Exit, CliError> {
    let parsed = input.parse()?;
    let c = classify(&parsed.poly, &solver_config(precision))?;
    writeln!(out, "{}", to_json(&c))?;
    Ok(Exit::Success)
}

pub fn cmd_monogenic(
    input: &PolyInput,
    method: Method,
    budget: u64,
    precision: Option<usize>,
    out: &mut impl Write,
) -> Result<Exit, CliError> {
    let parsed = input.parse()?;
    let irreducible = match &parsed.params {
        Some(params) => family_irreducible(params),
        None => is_irreducible(&parsed.poly, &solver_config(precision))?,
    };
    if !irreducible {
        let reason = match &parsed.params {
            Some(params) => format!("{} is reducible: n is even and p = a + 1, so x = -1 is a root", params),
            None => format!("{} is reducible", parsed.poly),
        };
        return Err(CliError::invalid(reason));
    }
    let report = monogenic(&parsed.poly, method, budget)?;
    writeln!(out, "{}", to_json(&report))?;
    Ok(match report.verdict {
        Verdict::Unknown(_) => Exit::Budget,
        _ => Exit::Success,
    })
}

/// Run a parsed command line, writing results to `out` and diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut impl Write, err: &mut impl Write) -> Exit {
    let result = match &cli.command {
        Command::Disc { n, a, p } => cmd_disc(*n, *a, *p, out),
        Command::Classify { input, precision } => cmd_classify(input, *precision, out),
        Command::Monogenic {
            input,
            method,
            budget,
            precision,
        } => cmd_monogenic(input, *method, *budget, *precision, out),
        Command::Search(args) => search::cmd_search(args, out, err),
        Command::Verify(args) => verify::cmd_verify(args, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit
        }
    }
}

pub fn pipeline_config(budget: u64, precision: Option<usize>) -> PipelineConfig {
    PipelineConfig {
        budget,
        solver: solver_config(precision),
    }
}
