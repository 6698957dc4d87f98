use monoperron::arith::{is_prime_u64, SquarefreeStatus, DEFAULT_BUDGET};
use monoperron::classify::{classify, ClassKind, SolverConfig, Subclass};
use monoperron::family::{
    build, descartes_profile, discriminant_closed, expected_descartes, family_irreducible, family_monogenic,
    g_value, negative_root_beyond_one, strictly_perron_certificate, FamilyParams, PipelineConfig, CONCLUSION_HIT,
};
use monoperron::irreducible::factor_oracle;
use monoperron::monogenic::{monogenic, Method};
use monoperron::poly::discriminant_resultant;
use monoperron::squarefree_status;
use proptest::prelude::*;

fn primes_below(bound: u64) -> Vec<u64> {
    (2..bound).filter(|&p| is_prime_u64(p)).collect()
}

fn params() -> impl Strategy<Value = FamilyParams> {
    let primes = primes_below(5000);
    (2u32..=10, 1u64..=12, proptest::sample::select(primes)).prop_map(|(n, a, p)| FamilyParams { n, a, p })
}

/// Points where the excluded case bites, so the strategy hits it often.
fn near_excluded() -> impl Strategy<Value = FamilyParams> {
    (1u32..=5, proptest::sample::select(primes_below(60)))
        .prop_map(|(h, p)| FamilyParams { n: 2 * h, a: p - 1, p })
        .prop_filter("a >= 1", |f| f.a >= 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_discriminant_is_resultant(f in params()) {
        prop_assert_eq!(discriminant_closed(&f), discriminant_resultant(&build(&f)).unwrap());
    }

    #[test]
    fn dichotomy_matches_oracle(f in prop_oneof![params(), near_excluded()]) {
        let factors = factor_oracle(&build(&f), &SolverConfig::default()).unwrap();
        prop_assert_eq!(factors.len() == 1, family_irreducible(&f));
    }

    #[test]
    fn certificate_is_consistent(f in params()) {
        let c = strictly_perron_certificate(&f, &PipelineConfig::default()).unwrap();
        prop_assert_eq!(&c.disc, &c.disc_oracle);
        prop_assert!(c.matrix.char_poly_matches && c.matrix.strongly_connected);
        if c.theorem_applicable && c.g_status == SquarefreeStatus::Squarefree {
            prop_assert_eq!(c.conclusion.as_str(), CONCLUSION_HIT);
        }
        let record = c.record();
        let json = serde_json::to_string(&record).unwrap();
        prop_assert_eq!(serde_json::from_str::<monoperron::CertificateRecord>(&json).unwrap(), record);
    }

    #[test]
    fn descartes_profile_holds(f in params()) {
        prop_assume!(family_irreducible(&f));
        let cfg = SolverConfig::default();
        prop_assert_eq!(descartes_profile(&f, &cfg).unwrap(), expected_descartes(f.n));
        if f.n % 2 == 0 && f.p > f.a + 1 {
            prop_assert!(negative_root_beyond_one(&f, &cfg).unwrap());
        }
    }
}

#[test]
fn monogenic_verdicts_agree_on_grid() {
    for n in 2..=9u32 {
        for a in 1..=6u64 {
            for p in primes_below(150) {
                let f = FamilyParams { n, a, p };
                if !f.coprime() || !family_irreducible(&f) {
                    continue;
                }
                let poly = build(&f);
                let fam = family_monogenic(&f, DEFAULT_BUDGET).unwrap();
                let jks = monogenic(&poly, Method::Jks, DEFAULT_BUDGET).unwrap().verdict;
                let ded = monogenic(&poly, Method::Dedekind, DEFAULT_BUDGET).unwrap().verdict;
                assert_eq!(fam, jks, "{f}");
                assert_eq!(jks, ded, "{f}");
            }
        }
    }
}

#[test]
fn theorem_grid() {
    let cfg = SolverConfig::default();
    for n in 2..=9u32 {
        for a in 1..=6u64 {
            for p in primes_below(150) {
                let f = FamilyParams { n, a, p };
                if !f.coprime() || p <= a + 1 {
                    continue;
                }
                let g = g_value(&f).to_biguint().unwrap();
                if squarefree_status(&g, DEFAULT_BUDGET) != SquarefreeStatus::Squarefree {
                    continue;
                }
                let kind = classify(&build(&f), &cfg).unwrap().kind;
                assert_eq!(kind, ClassKind::Perron(Subclass::StrictlyPerron), "{f}");
                let verdict = monogenic(&build(&f), Method::Both, DEFAULT_BUDGET).unwrap().verdict;
                assert_eq!(verdict, monoperron::Verdict::Monogenic, "{f}");
            }
        }
    }
}
