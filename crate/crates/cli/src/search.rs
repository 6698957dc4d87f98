//! Grid search over `(n, a, p)` with ordered output and an append-only ledger.

use std::fs::OpenOptions;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use monoperron::arith::{is_prime_u64, SquarefreeStatus, DEFAULT_BUDGET};
use monoperron::family::{
    strictly_perron_certificate, Certificate, CertificateRecord, FamilyParams, PipelineConfig,
    CONCLUSION_HIT, CONCLUSION_REDUCIBLE,
};
use monoperron::monogenic::Verdict;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{pipeline_config, CliError, Exit, Format, LEDGER_ENV};

/// Candidates evaluated in parallel before their records are written.
const CHUNK: usize = 256;

pub const CSV_HEADER: [&str; 13] = [
    "n",
    "a",
    "p",
    "poly",
    "disc",
    "G",
    "G_status",
    "irreducible",
    "monogenic",
    "class",
    "lambda",
    "theorem_applicable",
    "conclusion",
];

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, conflicts_with = "nmax")]
    pub n: Option<u32>,
    #[arg(long, conflicts_with = "amax")]
    pub a: Option<u64>,
    /// Search every degree 2..=NMAX.
    #[arg(long)]
    pub nmax: Option<u32>,
    /// Search every a in 1..=AMAX.
    #[arg(long)]
    pub amax: Option<u64>,
    #[arg(long)]
    pub pmax: u64,
    /// Skip pairs with gcd(a, n) > 1.
    #[arg(long)]
    pub coprime_only: bool,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, env = LEDGER_ENV, value_name = "PATH")]
    pub ledger: Option<PathBuf>,
    #[arg(long, value_name = "BITS")]
    pub precision: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub n_range: (u32, u32),
    pub a_range: (u64, u64),
    pub pmax: u64,
    pub coprime_only: bool,
}

impl SearchSpec {
    pub fn from_args(args: &SearchArgs) -> Result<Self, CliError> {
        let n_range = match (args.n, args.nmax) {
            (Some(n), None) => (n, n),
            (None, Some(nmax)) => (2, nmax),
            _ => return Err(CliError::invalid("give exactly one of --n or --nmax")),
        };
        let a_range = match (args.a, args.amax) {
            (Some(a), None) => (a, a),
            (None, Some(amax)) => (1, amax),
            _ => return Err(CliError::invalid("give exactly one of --a or --amax")),
        };
        if n_range.0 < 2 || n_range.0 > n_range.1 {
            return Err(CliError::invalid("degree range is empty (need n >= 2)"));
        }
        if a_range.0 < 1 || a_range.0 > a_range.1 {
            return Err(CliError::invalid("range of a is empty (need a >= 1)"));
        }
        if args.pmax < 2 {
            return Err(CliError::invalid("pmax must be at least 2"));
        }
        Ok(SearchSpec {
            n_range,
            a_range,
            pmax: args.pmax,
            coprime_only: args.coprime_only,
        })
    }

    /// Candidates sorted by `(p, n, a)`.
    pub fn candidates(&self) -> Vec<FamilyParams> {
        let mut out = Vec::new();
        for p in (2..=self.pmax).filter(|&p| is_prime_u64(p)) {
            for n in self.n_range.0..=self.n_range.1 {
                for a in self.a_range.0..=self.a_range.1 {
                    if self.coprime_only && a.gcd(&(n as u64)) != 1 {
                        continue;
                    }
                    out.push(FamilyParams { n, a, p });
                }
            }
        }
        out
    }
}

/// One ledger line: the certificate fields plus provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerRecord {
    #[serde(flatten)]
    pub certificate: CertificateRecord,
    pub timestamp: String,
    pub version: String,
}

impl LedgerRecord {
    pub fn new(certificate: CertificateRecord) -> Self {
        LedgerRecord {
            certificate,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Read every record of a JSON-lines ledger.
pub fn read_ledger(path: &Path) -> Result<Vec<LedgerRecord>, CliError> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| {
            serde_json::from_str(l)
                .map_err(|e| CliError::invalid(format!("ledger line {}: {e}", i + 1)))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchSummary {
    pub total: usize,
    pub hits: usize,
    pub non_squarefree: usize,
    pub unknown: usize,
    pub reducible: usize,
}

impl SearchSummary {
    fn add(&mut self, c: &Certificate) {
        self.total += 1;
        if c.is_hit() {
            self.hits += 1;
        }
        match &c.g_status {
            SquarefreeStatus::NotSquarefree(_) => self.non_squarefree += 1,
            SquarefreeStatus::Unknown(_) => self.unknown += 1,
            SquarefreeStatus::Squarefree => {
                if matches!(c.monogenic.as_ref().map(|r| &r.verdict), Some(Verdict::Unknown(_))) {
                    self.unknown += 1;
                }
            }
        }
        if c.conclusion == CONCLUSION_REDUCIBLE {
            self.reducible += 1;
        }
    }
}

impl std::fmt::Display for SearchSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "searched {} candidates: {} {CONCLUSION_HIT} hits, {} non-squarefree G, {} unknown, {} reducible",
            self.total, self.hits, self.non_squarefree, self.unknown, self.reducible
        )
    }
}

/// 12 significant digits.
pub fn lambda_12(decimal: &str) -> String {
    let x: f64 = decimal.parse().unwrap_or(f64::NAN);
    if !x.is_finite() || x == 0.0 {
        return decimal.to_string();
    }
    let int_digits = x.abs().log10().floor() as i32 + 1;
    let decimals = (12 - int_digits).max(0) as usize;
    format!("{x:.decimals$}")
}

fn csv_row(r: &CertificateRecord) -> [String; 13] {
    [
        r.n.to_string(),
        r.a.to_string(),
        r.p.to_string(),
        r.poly.to_text(),
        r.disc.to_string(),
        r.g.to_string(),
        r.g_status.to_string(),
        r.irreducible.to_string(),
        r.monogenic.as_ref().map(|v| v.to_string()).unwrap_or_default(),
        r.class.clone(),
        r.lambda.as_deref().map(lambda_12).unwrap_or_default(),
        r.theorem_applicable.to_string(),
        r.conclusion.clone(),
    ]
}

/// Output sink for certificates, in candidate order.
enum Sink<W: Write> {
    Json(W),
    Csv(csv::Writer<W>),
}

impl<W: Write> Sink<W> {
    fn new(format: Format, out: W) -> Result<Self, CliError> {
        Ok(match format {
            Format::Json => Sink::Json(out),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(CSV_HEADER).map_err(csv_err)?;
                Sink::Csv(w)
            }
        })
    }

    fn emit(&mut self, r: &CertificateRecord) -> Result<(), CliError> {
        match self {
            Sink::Json(w) => {
                writeln!(w, "{}", serde_json::to_string(r).expect("serializable"))?;
            }
            Sink::Csv(w) => w.write_record(csv_row(r)).map_err(csv_err)?,
        }
        Ok(())
    }

    fn flush(&mut self) -> Result<(), CliError> {
        match self {
            Sink::Json(w) => w.flush()?,
            Sink::Csv(w) => w.flush()?,
        }
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::invalid(format!("csv: {e}"))
}

/// Evaluate every candidate, calling `emit` in candidate order. Stops at the
/// first pipeline error after emitting everything before it.
pub fn run_search(
    spec: &SearchSpec,
    cfg: &PipelineConfig,
    mut emit: impl FnMut(&Certificate) -> Result<(), CliError>,
) -> Result<SearchSummary, CliError> {
    let mut summary = SearchSummary::default();
    for chunk in spec.candidates().chunks(CHUNK) {
        let results: Vec<_> = chunk
            .par_iter()
            .map(|params| strictly_perron_certificate(params, cfg))
            .collect();
        for r in results {
            let c = r?;
            summary.add(&c);
            emit(&c)?;
        }
    }
    Ok(summary)
}

pub fn cmd_search(args: &SearchArgs, out: &mut impl Write, err: &mut impl Write) -> Result<Exit, CliError> {
    let spec = SearchSpec::from_args(args)?;
    let cfg = pipeline_config(args.budget, args.precision);
    let mut ledger = match &args.ledger {
        Some(path) => Some(BufWriter::new(
            OpenOptions::new().create(true).append(true).open(path)?,
        )),
        None => None,
    };
    let mut sink = Sink::new(args.format, out)?;
    let result = run_search(&spec, &cfg, |c| {
        let record = c.record();
        sink.emit(&record)?;
        if let Some(w) = ledger.as_mut() {
            let line = serde_json::to_string(&LedgerRecord::new(record)).expect("serializable");
            writeln!(w, "{line}")?;
        }
        Ok(())
    });
    sink.flush()?;
    if let Some(w) = ledger.as_mut() {
        w.flush()?;
    }
    let summary = result?;
    writeln!(err, "{summary}")?;
    Ok(Exit::Success)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_digits() {
        assert_eq!(lambda_12("2.302775637731994646559610633735"), "2.30277563773");
        assert_eq!(lambda_12("45.21"), "45.2100000000");
        assert_eq!(lambda_12("1.17628081825991750654407033847"), "1.17628081826");
    }

    #[test]
    fn candidates_in_prime_order() {
        let spec = SearchSpec {
            n_range: (2, 3),
            a_range: (1, 2),
            pmax: 7,
            coprime_only: true,
        };
        let c = spec.candidates();
        assert!(c.windows(2).all(|w| w[0].p <= w[1].p));
        assert!(c.iter().all(|f| f.a.gcd(&(f.n as u64)) == 1));
        assert_eq!(c.len(), 4 * 3);
    }
}
