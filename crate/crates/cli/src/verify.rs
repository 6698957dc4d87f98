//! Grid-wide invariant checks.

use std::io::Write;
use std::time::Instant;

use clap::Args;
use monoperron::arith::{is_prime_u64, SquarefreeStatus, DEFAULT_BUDGET};
use monoperron::classify::{
    companion_matrix, matrix_irreducible, ClassKind, SolverConfig, Subclass,
};
use monoperron::family::{
    all_roots_outside_unit_circle, build, discriminant_closed, family_irreducible, g_value,
    negative_root_beyond_one, strictly_perron_certificate, FamilyError, FamilyParams, PipelineConfig,
};
use monoperron::irreducible::{factor_oracle, irreducibility};
use monoperron::monogenic::{TrinomialParams, Verdict};
use monoperron::poly::discriminant_resultant;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{pipeline_config, CliError, Exit};

/// Random relabelings of the companion digraph checked per point.
pub const PERMUTATIONS: usize = 5;

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 8)]
    pub nmax: u32,
    #[arg(long, default_value_t = 6)]
    pub amax: u64,
    /// Exclusive bound on p.
    #[arg(long, default_value_t = 300)]
    pub pmax: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, value_name = "BITS")]
    pub precision: Option<usize>,
    /// Flip the sign of the closed-form discriminant.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

/// All points `2 <= n <= nmax`, `1 <= a <= amax`, prime `p < pmax`.
pub fn grid(nmax: u32, amax: u64, pmax: u64) -> Vec<FamilyParams> {
    let primes: Vec<u64> = (2..pmax).filter(|&p| is_prime_u64(p)).collect();
    let mut out = Vec::new();
    for n in 2..=nmax {
        for a in 1..=amax {
            for &p in &primes {
                out.push(FamilyParams { n, a, p });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct PointReport {
    pub failures: Vec<String>,
    pub unknown: bool,
    /// Set when the pipeline could not run (precision, budget).
    pub error: Option<String>,
}

fn seed(params: &FamilyParams) -> u64 {
    (params.n as u64) << 48 ^ params.a << 32 ^ params.p
}

pub fn check_permutations(params: &FamilyParams) -> bool {
    let m = companion_matrix(params.n as usize, params.a, params.p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed(params));
    let mut perm: Vec<usize> = (0..params.n as usize).collect();
    (0..PERMUTATIONS).all(|_| {
        perm.shuffle(&mut rng);
        matrix_irreducible(&m.permute(&perm))
    })
}

fn check_disc(params: &FamilyParams, fault: bool, fails: &mut Vec<String>) {
    let mut closed = discriminant_closed(params);
    if fault {
        closed = -closed;
    }
    match discriminant_resultant(&build(params)) {
        Ok(oracle) if oracle == closed => {}
        Ok(oracle) => fails.push(format!("discriminant: closed form {closed} != resultant {oracle}")),
        Err(e) => fails.push(format!("discriminant: {e}")),
    }
}

fn check_irreducibility(params: &FamilyParams, solver: &SolverConfig, fails: &mut Vec<String>) -> Result<(), String> {
    let f = build(params);
    let factors = factor_oracle(&f, solver).map_err(|e| e.to_string())?;
    let expected = family_irreducible(params);
    if (factors.len() == 1) != expected {
        fails.push(format!(
            "irreducibility: dichotomy says {expected}, factorization has {} factors",
            factors.len()
        ));
    }
    let verdict = irreducibility(&f, solver).map_err(|e| e.to_string())?;
    if verdict.is_irreducible() && factors.len() != 1 {
        fails.push(format!("irreducibility: criterion verdict {verdict:?} is unsound"));
    }
    Ok(())
}

/// Every invariant at one grid point.
pub fn check_point(params: &FamilyParams, cfg: &PipelineConfig, fault: bool) -> PointReport {
    let mut report = PointReport::default();
    let fails = &mut report.failures;
    check_disc(params, fault, fails);

    let quantity = TrinomialParams::family(params.n, params.a, params.p).condition_v_quantity();
    if quantity != -g_value(params) {
        fails.push(format!("condition (v) quantity {quantity} != -G"));
    }

    if let Err(e) = check_irreducibility(params, &cfg.solver, fails) {
        report.error = Some(e);
        return report;
    }

    if !check_permutations(params) {
        fails.push("companion digraph: permuted copy not strongly connected".into());
    }

    let cert = match strictly_perron_certificate(params, cfg) {
        Ok(c) => c,
        Err(e @ FamilyError::Violation { .. }) => {
            fails.push(format!("certificate: {e}"));
            return report;
        }
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };

    if cert.irreducible {
        if let Some(report_m) = &cert.monogenic {
            report.unknown = matches!(report_m.verdict, Verdict::Unknown(_));
        }
        if params.coprime() {
            let mono = cert.monogenic.as_ref().map(|r| &r.verdict);
            let consistent = match (&cert.g_status, mono) {
                (SquarefreeStatus::Squarefree, Some(Verdict::Monogenic)) => true,
                (SquarefreeStatus::NotSquarefree(_), Some(Verdict::NotMonogenic(_))) => true,
                (SquarefreeStatus::Unknown(_), _) | (_, Some(Verdict::Unknown(_))) => true,
                _ => false,
            };
            if !consistent {
                fails.push(format!("monogenic iff G squarefree: G is {}, verdict {mono:?}", cert.g_status));
            }
        }
        if cert.theorem_applicable
            && cert.g_status == SquarefreeStatus::Squarefree
            && cert.classification.kind != ClassKind::Perron(Subclass::StrictlyPerron)
        {
            fails.push(format!("strictly-Perron: classified {}", cert.classification.kind));
        }
    }

    let n_even = params.n % 2 == 0;
    if n_even && params.p > params.a + 1 {
        match negative_root_beyond_one(params, &cfg.solver) {
            Ok(true) => {}
            Ok(false) => fails.push("negative root not certified beyond -1".into()),
            Err(e) => report.error = Some(e.to_string()),
        }
    }
    if !n_even && params.p == params.a + 1 {
        match all_roots_outside_unit_circle(params, &cfg.solver) {
            Ok(true) => {}
            Ok(false) => fails.push("roots not all certified outside the unit circle".into()),
            Err(e) => report.error = Some(e.to_string()),
        }
    }
    report
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub points: usize,
    pub failures: Vec<(FamilyParams, String)>,
    pub errors: Vec<(FamilyParams, String)>,
    pub unknown: usize,
}

pub fn verify_grid(points: &[FamilyParams], cfg: &PipelineConfig, fault: bool) -> VerifyReport {
    let reports: Vec<PointReport> = points.par_iter().map(|p| check_point(p, cfg, fault)).collect();
    let mut out = VerifyReport {
        points: points.len(),
        ..Default::default()
    };
    for (params, r) in points.iter().zip(reports) {
        out.failures.extend(r.failures.into_iter().map(|f| (*params, f)));
        if let Some(e) = r.error {
            out.errors.push((*params, e));
        }
        out.unknown += r.unknown as usize;
    }
    out
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut impl Write, err: &mut impl Write) -> Result<Exit, CliError> {
    if args.nmax < 2 || args.amax < 1 || args.pmax < 3 {
        return Err(CliError::invalid("empty grid (need nmax >= 2, amax >= 1, pmax >= 3)"));
    }
    let start = Instant::now();
    let points = grid(args.nmax, args.amax, args.pmax);
    let cfg = pipeline_config(args.budget, args.precision);
    let report = verify_grid(&points, &cfg, args.inject_fault);
    for (params, f) in &report.failures {
        writeln!(out, "FAIL {params}: {f}")?;
    }
    for (params, e) in &report.errors {
        writeln!(out, "ERROR {params}: {e}")?;
    }
    let ok = report.failures.is_empty() && report.errors.is_empty();
    writeln!(
        out,
        "{} {} points, {} failures, {} errors, {} unknown, {:.2} s",
        if ok { "PASS" } else { "FAIL" },
        report.points,
        report.failures.len(),
        report.errors.len(),
        report.unknown,
        start.elapsed().as_secs_f64()
    )?;
    if !report.failures.is_empty() {
        writeln!(err, "{} property violations", report.failures.len())?;
        return Ok(Exit::Violation);
    }
    if !report.errors.is_empty() {
        return Ok(Exit::Precision);
    }
    Ok(Exit::Success)
}
