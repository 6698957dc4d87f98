use std::process::{Command, Output};

use monoperron::arith::SquarefreeStatus;
use monoperron::family::{strictly_perron_certificate, CertificateRecord, FamilyParams, PipelineConfig};
use monoperron_cli::search::{read_ledger, CSV_HEADER};
use num_bigint::BigInt;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monoperron"))
        .args(args)
        .env_remove("MONOPERRON_LEDGER")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(out).lines().last().unwrap()).unwrap()
}

fn records(out: &Output) -> Vec<CertificateRecord> {
    stdout(out).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn disc_command() {
    let out = run(&["disc", "2", "1", "3"]);
    assert_eq!(code(&out), 0);
    let lines: Vec<_> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(&lines[..2], ["13", "13"]);
    let out = run(&["disc", "3", "1", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("-116\n-116\n"));
    assert_eq!(json(&out)["agree"], true);
    assert_eq!(code(&run(&["disc", "2", "1", "4"])), 2);
    assert_eq!(code(&run(&["disc", "1", "1", "3"])), 2);
    assert_eq!(code(&run(&["disc", "2", "0", "3"])), 2);
}

#[test]
fn classify_command() {
    let out = run(&["classify", "--coeffs", "-1,-1,1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["subclass"], "Pisot");
    let out = run(&["classify", "--trinomial", "4", "3", "5"]);
    assert_eq!(json(&out)["subclass"], "StrictlyPerron");
    let out = run(&["classify", "--coeffs", "1,1,0,-1,-1,-1,-1,-1,0,1,1"]);
    let v = json(&out);
    assert_eq!(v["subclass"], "Salem");
    assert!(v["lambda"].as_str().unwrap().starts_with("1.176280818"));
    assert_eq!(code(&run(&["classify", "--coeffs", "1,x,1"])), 2);
    assert_eq!(code(&run(&["classify"])), 2);
    assert_eq!(code(&run(&["classify", "--coeffs", "1,1,2"])), 2);
}

#[test]
fn monogenic_command() {
    let out = run(&["monogenic", "--trinomial", "2", "1", "11", "--method", "both"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verdict"], "NotMonogenic(3)");
    let out = run(&["monogenic", "--trinomial", "4", "3", "5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verdict"], "Monogenic");
    let out = run(&["monogenic", "--trinomial", "2", "2", "3"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("reducible"));
    let out = run(&["monogenic", "--coeffs", "-1,0,0,0,1"]);
    assert_eq!(code(&out), 2);
    let out = run(&["monogenic", "--coeffs", "-11,-1,1", "--method", "dedekind"]);
    assert_eq!(json(&out)["locals"][0]["condition"], "dedekind");
    assert_eq!(code(&run(&["monogenic", "--trinomial", "2", "1", "3", "--method", "nope"])), 2);
}

/// p <= 50 with 4p + 1 squarefree.
fn expected_hits() -> Vec<u64> {
    let primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    primes
        .into_iter()
        .filter(|p| {
            let g = 4 * p + 1;
            (2..=g).take_while(|d| d * d <= g).all(|d| g % (d * d) != 0)
        })
        .collect()
}

#[test]
fn search_hits_and_order() {
    let out = run(&["search", "--n", "2", "--a", "1", "--pmax", "50"]);
    assert_eq!(code(&out), 0);
    let recs = records(&out);
    assert!(recs.windows(2).all(|w| w[0].p < w[1].p));
    let hits: Vec<u64> = recs
        .iter()
        .filter(|r| r.conclusion == "monogenic strictly-Perron")
        .map(|r| r.p)
        .collect();
    assert_eq!(hits, expected_hits());
    assert!(recs
        .iter()
        .filter(|r| hits.contains(&r.p))
        .all(|r| r.g_status == SquarefreeStatus::Squarefree));
    assert!(String::from_utf8_lossy(&out.stderr).contains("10 monogenic strictly-Perron hits"));

    let out = run(&["search", "--n", "2", "--a", "1", "--pmax", "2"]);
    let recs = records(&out);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].conclusion, "reducible");

    let out = run(&["search", "--n", "3", "--a", "2", "--pmax", "100"]);
    let recs = records(&out);
    let squarefree: Vec<_> = recs
        .iter()
        .filter(|r| r.p > 3 && r.g_status == SquarefreeStatus::Squarefree)
        .collect();
    assert!(squarefree.len() > 20);
    for r in squarefree {
        assert_eq!(r.conclusion, "monogenic strictly-Perron", "p = {}", r.p);
    }
}

#[test]
fn search_invalid_specs() {
    assert_eq!(code(&run(&["search", "--n", "2", "--a", "1", "--pmax", "1"])), 2);
    assert_eq!(code(&run(&["search", "--n", "1", "--a", "1", "--pmax", "10"])), 2);
    assert_eq!(code(&run(&["search", "--n", "2", "--a", "0", "--pmax", "10"])), 2);
    assert_eq!(code(&run(&["search", "--a", "1", "--pmax", "10"])), 2);
    assert_eq!(code(&run(&["search", "--n", "2", "--nmax", "3", "--a", "1", "--pmax", "10"])), 2);
}

#[test]
fn search_is_deterministic() {
    let args = ["search", "--nmax", "4", "--amax", "3", "--pmax", "60", "--coprime-only"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    assert!(records(&first)
        .iter()
        .all(|r| num_integer::gcd(r.a, r.n as u64) == 1));
}

#[test]
fn ledger_round_trip_and_append() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ledger.jsonl");
    let p = path.to_str().unwrap();
    let out = run(&["search", "--n", "4", "--a", "3", "--pmax", "40", "--ledger", p]);
    assert_eq!(code(&out), 0);
    let first = std::fs::read_to_string(&path).unwrap();
    let ledger = read_ledger(&path).unwrap();
    assert_eq!(ledger.len(), 12);
    assert!(first.ends_with('\n') && !first.contains('\r'));
    for rec in &ledger {
        let params = FamilyParams::new(rec.certificate.n, rec.certificate.a, rec.certificate.p).unwrap();
        let cert = strictly_perron_certificate(&params, &PipelineConfig::default()).unwrap();
        assert_eq!(rec.certificate, cert.record());
        assert!(chrono::DateTime::parse_from_rfc3339(&rec.timestamp).is_ok());
        assert_eq!(rec.version, env!("CARGO_PKG_VERSION"));
    }
    assert_eq!(records(&out), ledger.iter().map(|r| r.certificate.clone()).collect::<Vec<_>>());

    let out = Command::new(env!("CARGO_BIN_EXE_monoperron"))
        .args(["search", "--n", "2", "--a", "1", "--pmax", "10"])
        .env("MONOPERRON_LEDGER", &path)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let second = std::fs::read_to_string(&path).unwrap();
    assert!(second.starts_with(&first));
    assert_eq!(read_ledger(&path).unwrap().len(), 12 + 4);
}

#[test]
fn csv_output() {
    let out = run(&["search", "--n", "2", "--a", "1", "--pmax", "13", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, CSV_HEADER);
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 6);
    let p3 = &rows[1];
    assert_eq!(&p3[3], "-3,-1,1");
    assert_eq!(p3[4].parse::<BigInt>().unwrap(), BigInt::from(13));
    // (1 + sqrt(13)) / 2
    assert_eq!(&p3[10], "2.30277563773");
    assert_eq!(&rows[0][10], "");
}

#[test]
fn verify_command() {
    let out = run(&["verify", "--nmax", "4", "--amax", "3", "--pmax", "50"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("PASS 135 points"));
    let out = run(&["verify", "--nmax", "3", "--amax", "2", "--pmax", "20", "--inject-fault"]);
    assert_eq!(code(&out), 3);
    let text = stdout(&out);
    assert!(text.contains("FAIL (n=2, a=1, p=3): discriminant"));
    assert_eq!(code(&run(&["verify", "--nmax", "1"])), 2);
}
