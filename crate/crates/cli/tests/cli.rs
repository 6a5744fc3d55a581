use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_fuzzy-potts");

const CONFIG: &str = r#"q = 2.0
r = 0.5
family = "A"
tau = "RB"
ladder = [[1, 2], [1, 4], [2, 4]]
chains = 2
samples_per_chain = 5
burn_in = 3
seed = 9
"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with("# generated="))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn theory_table_lists_both_settings() {
    let o = run(&["theory", "--q", "2", "--r", "0.5", "--tau", "RB"]);
    assert!(o.status.success());
    let s = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "q,r,tau,setting,I,Iplus,exponent");
    assert_eq!(rows.len(), 3);
    let plane: Vec<&str> = rows[1].split(',').collect();
    assert_eq!(&plane[..6], &["2", "0.5", "RB", "plane", "2", "2"]);
    assert!((plane[6].parse::<f64>().unwrap() - 0.625).abs() < 1e-9);
    let half: Vec<&str> = rows[2].split(',').collect();
    assert!((half[6].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["arms"]).status.code(), Some(2));
    assert_eq!(run(&["theory", "--q", "9"]).status.code(), Some(2));
    assert_eq!(run(&["theory", "--tau", "RXB"]).status.code(), Some(2));
    let bad = write_config(dir.path(), &CONFIG.replace("[1, 2]", "[3, 2]"));
    assert_eq!(run(&["--config", &bad, "arms"]).status.code(), Some(2));
    let missing = dir.path().join("nope.toml").display().to_string();
    assert_eq!(
        run(&["--config", &missing, "report"]).status.code(),
        Some(2)
    );
    let cfg = write_config(dir.path(), CONFIG);
    assert_eq!(
        run(&["--config", &cfg, "qmult", "--triples", "1,2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn table_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let sa = a.display().to_string();
    let sb = b.display().to_string();
    assert!(run(&["--config", &cfg, "--out", &sa, "arms", "--table"])
        .status
        .success());
    assert!(run(&[
        "--config",
        &cfg,
        "--out",
        &sb,
        "--threads",
        "2",
        "arms",
        "--table"
    ])
    .status
    .success());
    let (ta, tb) = (
        fs::read_to_string(&a).unwrap(),
        fs::read_to_string(&b).unwrap(),
    );
    assert!(ta.starts_with("# schema=fuzzy-potts/estimate-v1"));
    assert_eq!(body(&ta), body(&tb));
    assert!(
        run(&["--config", &cfg, "--out", &sb, "--seed", "10", "arms", "--table"])
            .status
            .success()
    );
    assert_ne!(body(&ta), body(&fs::read_to_string(&b).unwrap()));
}

#[test]
fn event_stream_has_one_row_per_sample_and_rung() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let o = run(&["--config", &cfg, "arms"]);
    assert!(o.status.success());
    let s = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        rows[0],
        "family,q,r,variant,tau,m,n,occurs,reduced_only,seed,chain"
    );
    assert_eq!(rows.len(), 1 + 2 * 5 * 3);
}

#[test]
fn sample_and_loops_exports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let s = String::from_utf8(run(&["--config", &cfg, "sample"]).stdout).unwrap();
    assert_eq!(s.lines().filter(|l| l.starts_with("sample ")).count(), 5);
    assert_eq!(s.lines().filter(|l| l.starts_with("bonds ")).count(), 5);
    assert_eq!(s.lines().filter(|l| l.starts_with("colors ")).count(), 5);
    let o = run(&["--config", &cfg, "loops"]);
    assert!(o.status.success());
    let s = String::from_utf8(o.stdout).unwrap();
    let diag = s
        .lines()
        .find_map(|l| l.strip_prefix("# d_plus_minus_over_2n_eps="))
        .unwrap();
    assert!(diag.parse::<f64>().unwrap() >= 0.0);
    let headers: Vec<&str> = s.lines().filter(|l| l.starts_with("loop ")).collect();
    assert!(headers.iter().any(|h| h.contains("tag=OuterBond level=1")));
    for line in s
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("loop "))
    {
        for pair in line.split(' ') {
            let (x, y) = pair.split_once(',').unwrap();
            x.parse::<i64>().unwrap();
            y.parse::<i64>().unwrap();
        }
    }
}

#[test]
fn qmult_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), CONFIG);
    let o = run(&["--config", &cfg, "qmult", "--triples", "1,2,4;2,2,2"]);
    assert!(o.status.success());
    let s = String::from_utf8(o.stdout).unwrap();
    assert_eq!(s.lines().filter(|l| !l.starts_with('#')).count(), 3);
    assert!(s.contains("Degenerate"));
    let o = run(&["--config", &cfg, "report"]);
    assert!(o.status.success());
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["config", "rows", "fitted", "theory", "flags"] {
        assert!(j.get(key).is_some(), "{key}");
    }
    assert_eq!(j["rows"].as_array().unwrap().len(), 3);
}
