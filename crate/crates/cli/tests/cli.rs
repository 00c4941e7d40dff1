//! End-to-end tests against the compiled binary: output conventions,
//! exit codes, config layering, cache behavior, and report round-trips.

use std::path::Path;
use std::process::Command;

use nrlab_core::arith::{is_prime, OddPrime};
use nrlab_core::experiments::{BoundRecord, DensityRecord, MeanScaledRecord};
use nrlab_core::residues::nonresidue_table;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_nrlab"));
    // isolate from ambient configuration
    c.env_remove("NRLAB_CONFIG");
    c.env_remove("NRLAB_CACHE");
    c
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn symbol_examples() {
    let (code, stdout, _) = run(&["symbol", "--p", "7", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "-1\n");
    let (code, stdout, _) = run(&["symbol", "--p", "7", "--n", "21"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "0\n");
    let (code, stdout, _) = run(&["symbol", "--p", "7", "--n", "-5"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "1\n");
}

#[test]
fn usage_errors_exit_1() {
    let (code, _, _) = run(&["no-such-command"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["symbol", "--p", "7"]);
    assert_eq!(code, 1);
    let (code, _, stderr) = run(&["symbol", "--p", "8", "--n", "3"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("odd prime"));
    // --help is not an error
    let (code, stdout, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("sweep-t1"));
}

#[test]
fn constants_print_at_least_8_digits() {
    let (code, stdout, _) = run(&["constants"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("lambda\t0.5217244833"));
    assert!(stdout.contains("eta\t0.0908450569"));
    assert!(stdout.contains("xi\t0.0434489665"));
    assert!(stdout.contains("delta1\t-0.6569990"));
    assert!(stdout.contains("|xi - eta(1-lambda)|"));
}

#[test]
fn sigma_writes_tsv_and_reports_min() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sigma.tsv");
    let (code, stdout, _) = run(&[
        "sigma",
        "--kernel",
        "extremal",
        "--U",
        "5",
        "--h",
        "0.001",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("min sigma -0.65699"));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "u\tsigma");
    assert_eq!(lines.len(), 5002);
    assert!(lines[1].starts_with("0\t1"));
}

#[test]
fn sandwich_ordered_for_extremal() {
    let (code, stdout, _) = run(&["sandwich", "--kernel", "extremal", "--u", "2.5"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("ordered\ttrue"));
}

#[test]
fn check_counting_exit_codes() {
    let (code, stdout, _) = run(&["check-counting", "--p", "7", "--x", "26"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("ok\ttrue"));
    // precondition violation is a usage error
    let (code, _, stderr) = run(&["check-counting", "--p", "7", "--x", "27"]);
    assert_eq!(code, 1);
    assert!(stderr.contains("uniqueness"));
}

#[test]
fn decompose_output() {
    let (code, stdout, _) = run(&["decompose", "--p", "7", "--n", "6"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "3\t2\n");
}

#[test]
fn budget_exhaustion_exits_3() {
    let (code, _, stderr) = run(&["sum", "--p", "101", "--M", "0", "--N", "50", "--work-budget", "10"]);
    assert_eq!(code, 3);
    assert!(stderr.contains("budget"));
    let (code, _, _) = run(&[
        "sweep-t2", "--lo", "17", "--hi", "100", "--eps", "0.04", "--c", "1.0",
        "--work-budget", "3",
    ]);
    assert_eq!(code, 3);
}

#[test]
fn config_file_layering() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("nrlab.conf");
    std::fs::write(&conf, "work_budget = 10\n").unwrap();

    // file applies via NRLAB_CONFIG
    let out = bin()
        .env("NRLAB_CONFIG", conf.to_str().unwrap())
        .env_remove("NRLAB_CACHE")
        .args(["sum", "--p", "101", "--M", "0", "--N", "50"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    // flag beats file
    let out = bin()
        .env("NRLAB_CONFIG", conf.to_str().unwrap())
        .args(["sum", "--p", "101", "--M", "0", "--N", "50", "--work-budget", "1000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn cache_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .env("NRLAB_CACHE", dir.path().to_str().unwrap())
        .args(["table", "--p", "11", "--limit", "30"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("table_p11_limit30.txt").exists());
}

#[test]
fn cached_tables_reload_equal_to_fresh_for_50_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let primes: Vec<u64> = (3..2000).filter(|&v| v % 2 == 1 && is_prime(v)).collect();

    // deterministic pseudo-random pair selection
    let mut state = 0x243F_6A88_85A3_08D3u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for _ in 0..50 {
        let p = primes[(next() % primes.len() as u64) as usize];
        let limit = 1 + next() % 3000;

        let first = run_table(cache, p, limit);
        assert!(first.contains("cached=false"), "{first}");
        let second = run_table(cache, p, limit);
        assert!(second.contains("cached=true"), "{second}");
        // identical counts through the decode path
        assert_eq!(
            first.replace("cached=false", "cached=?"),
            second.replace("cached=true", "cached=?")
        );

        // the cache file must decode to exactly the fresh computation
        let text =
            std::fs::read_to_string(dir.path().join(format!("table_p{p}_limit{limit}.txt")))
                .unwrap();
        let fresh = nonresidue_table(&OddPrime::new(p).unwrap(), limit);
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert_eq!(
            header,
            format!("nrlab-table 1 {p} {limit} {}", fresh.nonresidues.len())
        );
        let entries: Vec<u64> = lines.map(|l| l.parse().unwrap()).collect();
        assert_eq!(entries, fresh.nonresidues);
    }
}

fn run_table(cache: &str, p: u64, limit: u64) -> String {
    let out = bin()
        .args([
            "table",
            "--p",
            &p.to_string(),
            "--limit",
            &limit.to_string(),
            "--cache-dir",
            cache,
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    String::from_utf8(out.stdout).unwrap()
}

fn read_csv<T: serde::de::DeserializeOwned>(path: &Path) -> Vec<T> {
    csv::Reader::from_path(path)
        .unwrap()
        .deserialize()
        .collect::<Result<Vec<T>, _>>()
        .unwrap()
}

#[test]
fn sweep_csv_round_trips_into_identical_records() {
    let dir = tempfile::tempdir().unwrap();

    let t1 = dir.path().join("t1.csv");
    let (code, _, _) = run(&[
        "sweep-t1", "--lo", "3", "--hi", "300", "--k", "2",
        "--csv", t1.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let parsed: Vec<BoundRecord> = read_csv(&t1);
    let range = nrlab_core::arith::primes_in(3, 300).unwrap();
    let fresh = nrlab_core::experiments::sweep_nk_ratios(
        &range,
        nrlab_core::experiments::KPolicy::Fixed(2),
        u64::MAX,
    );
    assert_eq!(parsed, fresh.records);

    let t2 = dir.path().join("t2.csv");
    let (code, _, _) = run(&[
        "sweep-t2", "--lo", "17", "--hi", "300", "--eps", "0.043", "--c", "1.0",
        "--csv", t2.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let parsed: Vec<DensityRecord> = read_csv(&t2);
    let range = nrlab_core::arith::primes_in(17, 300).unwrap();
    let fresh =
        nrlab_core::experiments::sweep_density(&range, 0.043, 1.0, 100_000_000).unwrap();
    assert_eq!(parsed, fresh.records);

    let mc = dir.path().join("mchin.csv");
    let (code, _, _) = run(&[
        "sweep-mchin", "--lo", "17", "--hi", "300", "--c", "0.8",
        "--csv", mc.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let parsed: Vec<MeanScaledRecord> = read_csv(&mc);
    let fresh =
        nrlab_core::experiments::sweep_mean_scaled(&range, 0.8, 100_000_000).unwrap();
    assert_eq!(parsed, fresh.records);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let ja = dir.path().join("a.json");
    let jb = dir.path().join("b.json");
    for (csv, json) in [(&a, &ja), (&b, &jb)] {
        let (code, _, _) = run(&[
            "sweep-t1", "--lo", "3", "--hi", "500", "--kmax", "--cap", "10",
            "--csv", csv.to_str().unwrap(),
            "--json", json.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(std::fs::read(&ja).unwrap(), std::fs::read(&jb).unwrap());
}

#[test]
fn lock_verifies_then_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let lock = dir.path().join("t1.lock");
    let args = [
        "sweep-t1", "--lo", "17", "--hi", "400", "--k", "1",
        "--lock", lock.to_str().unwrap(),
    ];
    let (code, stdout, _) = run(&args);
    assert_eq!(code, 0);
    assert!(stdout.contains("lock created"));

    let (code, stdout, _) = run(&args);
    assert_eq!(code, 0);
    assert!(stdout.contains("lock verified"));

    std::fs::write(&lock, "t1_max_ratio\t9.99999999999e9\n").unwrap();
    let (code, _, stderr) = run(&args);
    assert_eq!(code, 2);
    assert!(stderr.contains("lock mismatch"));
}

#[test]
fn json_matches_csv_headers() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("t2.csv");
    let json_path = dir.path().join("t2.json");
    let (code, _, _) = run(&[
        "sweep-t2", "--lo", "17", "--hi", "60", "--eps", "0.04", "--c", "1.0",
        "--csv", csv_path.to_str().unwrap(),
        "--json", json_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let header = std::fs::read_to_string(&csv_path)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string();
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let obj = json.as_array().unwrap()[0].as_object().unwrap();
    for key in header.split(',') {
        assert!(obj.contains_key(key), "JSON missing CSV column {key}");
    }
}
