use std::process::{Command, Output};

fn ksq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ksq")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn classify_exit_codes() {
    let o = ksq(&["classify", "phi:0.6,0.5,0.0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("kadison-schwarz      holds (exact)"), "{text}");
    assert!(text.contains("completely-positive  fails"), "{text}");

    assert_eq!(ksq(&["classify", "phi:2,0,0"]).status.code(), Some(2));
    assert_eq!(ksq(&["classify", "tdiag:0.1,0.1"]).status.code(), Some(2));
    assert_eq!(ksq(&["classify", "nope:1"]).status.code(), Some(2));
}

#[test]
fn classify_json_lines() {
    let o = ksq(&["classify", "tlm:0.5,0.5", "--format", "json-lines"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["descriptor"], "tlm:0.5,0.5");
    assert_eq!(v["verdict"]["completely_positive"]["status"], "HoldsExact");
}

#[test]
fn oracle_examples() {
    let o = ksq(&["oracle", "phi:1,-1,1", "--samples", "1000", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(1));
    let line = stdout(&o);
    let (coords, violation) = line.trim().strip_prefix("witness ").unwrap().split_once(" violation=").unwrap();
    let x: Vec<f64> = coords.split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(x.len(), 8);
    assert!(violation.parse::<f64>().unwrap() < -1e-8);

    assert_eq!(ksq(&["oracle", "phi:1,1,1", "--samples", "1000", "--seed", "7"]).status.code(), Some(0));
    assert_eq!(ksq(&["oracle", "tlm:0.25,0.25", "--samples", "100000", "--seed", "7"]).status.code(), Some(0));
    assert_eq!(ksq(&["oracle", "phi:1,1"]).status.code(), Some(2));
}

#[test]
fn seed_from_environment_and_flag_precedence() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_ksq"));
        c.args(["oracle", "phi:1,-1,1", "--samples", "200", "--format", "json-lines"]);
        if let Some(s) = flag {
            c.args(["--seed", s]);
        }
        match env {
            Some(s) => c.env("KSQ_SEED", s),
            None => c.env_remove("KSQ_SEED"),
        };
        let o = c.output().unwrap();
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 7);
    assert_eq!(run(Some("11"), None), 11);
    assert_eq!(run(Some("11"), Some("13")), 13);
}

#[test]
fn scan_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    for name in ["a", "b"] {
        let csv = dir.path().join(format!("{name}.csv"));
        let pgm = dir.path().join(format!("{name}.pgm"));
        let o = ksq(&[
            "scan", "--figure", "fig2", "--grid", "64", "--out", csv.to_str().unwrap(), "--pgm",
            pgm.to_str().unwrap(), "--verify-choi", "50",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(read("a.csv"), read("b.csv"));
    assert_eq!(read("a.pgm"), read("b.pgm"));

    let csv = String::from_utf8(read("a.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("x,y,cp,ks_sufficient,ks_scalar_components"));
    assert_eq!(csv.lines().count(), 1 + 64 * 64);
    assert!(read("a.pgm").starts_with(b"P5\n"));
}

#[test]
fn scan_errors() {
    let o = ksq(&["scan", "--figure", "fig1", "--grid", "8", "--out", "/nonexistent/x.csv"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(ksq(&["scan", "--figure", "fig1", "--grid", "1", "--out", "/tmp/x.csv"]).status.code(), Some(2));
}

#[test]
fn harness_examples() {
    for (family, grid) in [("tlm", "21"), ("phi", "11"), ("tdiag", "11")] {
        let o = ksq(&["harness", "--family", family, "--grid", grid, "--samples", "1000"]);
        assert_eq!(o.status.code(), Some(0), "{family}: {}", stdout(&o));
        assert!(stdout(&o).contains("discrepancies       0"));
    }
    assert_eq!(ksq(&["harness", "--family", "tmat", "--grid", "3", "--samples", "10"]).status.code(), Some(2));
}
