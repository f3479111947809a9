use std::io::Write;
use std::process::{Command, Output, Stdio};

use exotic_core::census::CensusResult;
use exotic_core::{CharacterTable, CheckReport, ExoticPair, SpringerTable};

fn exotic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exotic")).args(args).output().unwrap()
}

fn exotic_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_exotic"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Orbit dimension and `d` straight from the label text.
fn dims_from_text(label: &str, n: usize) -> (usize, usize) {
    let parse = |s: &str| -> Vec<usize> {
        if s == "-" {
            vec![]
        } else {
            s.split(',').map(|x| x.parse().unwrap()).collect()
        }
    };
    let (a, b) = label.split_once('|').unwrap();
    let (a, b) = (parse(a), parse(b));
    let nu: Vec<usize> = (0..a.len().max(b.len()))
        .map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0))
        .collect();
    let n_nu: usize = nu.iter().enumerate().map(|(i, v)| i * v).sum();
    let dim = 2 * n * n - 2 * n - 4 * n_nu + 2 * a.iter().sum::<usize>();
    (dim, n * n - dim / 2)
}

#[test]
fn orbits_tsv_rank_two() {
    let o = exotic(&["orbits", "--n", "2", "--format", "tsv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("label\tdim\td"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    let labels: Vec<&str> = rows.iter().map(|r| r.split('\t').next().unwrap()).collect();
    assert_eq!(labels, ["2|-", "1|1", "1,1|-", "-|2", "-|1,1"]);
    for r in rows {
        let f: Vec<&str> = r.split('\t').collect();
        let (dim, d) = dims_from_text(f[0], 2);
        assert_eq!((f[1].parse::<usize>().unwrap(), f[2].parse::<usize>().unwrap()), (dim, d), "{r}");
    }
}

#[test]
fn orbits_json_agrees_with_tsv_at_rank_four() {
    let o = exotic(&["orbits", "--n", "4", "--format", "json"]);
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.len(), 20);
    for r in rows {
        let (dim, d) = dims_from_text(r["label"].as_str().unwrap(), 4);
        assert_eq!(r["dim"], dim);
        assert_eq!(r["d"], d);
    }
}

#[test]
fn repr_round_trips_through_classify() {
    for p in ["3", "5"] {
        let orbits = exotic(&["orbits", "--n", "2", "--format", "tsv"]);
        for line in stdout(&orbits).lines().skip(1) {
            let label = line.split('\t').next().unwrap();
            for flavor in ["group", "lie"] {
                let pair = exotic(&["repr", "--n", "2", "--p", p, "--label", label, "--flavor", flavor]);
                assert!(pair.status.success());
                let parsed: ExoticPair = serde_json::from_slice(&pair.stdout).unwrap();
                assert_eq!(parsed.space().p(), p.parse::<u32>().unwrap());
                let c = exotic_stdin(&["classify"], &stdout(&pair));
                assert!(c.status.success(), "{}", String::from_utf8_lossy(&c.stderr));
                let v: serde_json::Value = serde_json::from_slice(&c.stdout).unwrap();
                assert_eq!(v["label"], label);
                let (dim, d) = dims_from_text(label, 2);
                assert_eq!(v["dim_orbit"], dim);
                assert_eq!(v["d"], d);
                assert_eq!(v["stab_dim"], 10 - dim);
            }
        }
    }
}

#[test]
fn classify_reads_files_and_rejects_bad_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.json");
    let pair = exotic(&["repr", "--n", "3", "--p", "7", "--label", "2|1"]);
    std::fs::write(&path, &pair.stdout).unwrap();
    let c = exotic(&["classify", "--input", path.to_str().unwrap()]);
    assert!(c.status.success());
    assert!(stdout(&c).contains("\"2|1\""));
    // identity is self-adjoint but not nilpotent
    let bad = r#"{"p":3,"n":1,"flavor":"lie","x":{"p":3,"rows":2,"cols":2,"entries":[1,0,0,1]},"v":[0,0]}"#;
    let c = exotic_stdin(&["classify"], bad);
    assert_eq!(c.status.code(), Some(2));
    let c = exotic(&["classify", "--input", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(c.status.code(), Some(2));
}

#[test]
fn sum_squares_suite() {
    let o = exotic(&["verify", "--suite", "sum-squares", "--n", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let r: CheckReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r.passed());
}

#[test]
fn table_suites_pass() {
    for (suite, n) in [("restriction", "5"), ("d-diff", "6"), ("determine", "5")] {
        let o = exotic(&["verify", "--suite", suite, "--n", n]);
        assert_eq!(o.status.code(), Some(0), "{suite}");
        let r: CheckReport = serde_json::from_slice(&o.stdout).unwrap();
        assert!(r.instances > 0);
    }
}

#[test]
fn injected_mismatch_flips_exit_status() {
    let o = exotic(&["verify", "--suite", "sum-squares", "--n", "4", "--inject-mismatch"]);
    assert_eq!(o.status.code(), Some(1));
    let r: CheckReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.mismatches.len(), 1);
    assert_eq!(r.mismatches[0].instance, "injected");
    // census suites put the report on stderr
    let o = exotic(&["verify", "--suite", "census", "--n", "1", "--p", "3", "--inject-mismatch"]);
    assert_eq!(o.status.code(), Some(1));
    let r: CheckReport = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(r.mismatches.len(), 1);
}

#[test]
fn line_stabilizer_suite_reports_off_domain_cases() {
    let o = exotic(&["verify", "--suite", "parabolic", "--n", "2", "--p", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let r: CheckReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(r.mismatches.iter().all(|m| m.instance.ends_with("INode")));
    let o = exotic(&["verify", "--suite", "parabolic", "--n", "3", "--p", "5", "--domain-only"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn census_suite_with_checkpoint_and_seed() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("ck.json");
    let args = ["verify", "--suite", "census", "--n", "2", "--p", "3", "--jobs", "2"];
    let mut with_ck = args.to_vec();
    with_ck.extend(["--checkpoint", ck.to_str().unwrap()]);
    let a = exotic(&with_ck);
    assert_eq!(a.status.code(), Some(0));
    assert!(ck.exists());
    // resuming from a finished checkpoint gives the same output
    let b = exotic(&with_ck);
    assert_eq!(a.stdout, b.stdout);
    let mut seeded = args.to_vec();
    seeded.extend(["--seed", "11"]);
    let c = exotic(&seeded);
    assert_eq!(c.status.code(), Some(0));
    let ra: CensusResult = serde_json::from_slice(&a.stdout).unwrap();
    let rc: CensusResult = serde_json::from_slice(&c.stdout).unwrap();
    assert_eq!(ra.labels, rc.labels);
    assert_eq!(ra.total_points, 6561);
}

#[test]
fn group_side_suites() {
    for suite in ["klyachko", "log"] {
        let o = exotic(&["verify", "--suite", suite, "--n", "2", "--p", "3"]);
        assert_eq!(o.status.code(), Some(0), "{suite}");
    }
    let o = exotic(&["verify", "--suite", "census", "--n", "3", "--p", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_tables_round_trip_and_are_deterministic() {
    let a = exotic(&["chartable", "--n", "4", "--format", "json"]);
    let b = exotic(&["chartable", "--n", "4", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let t: CharacterTable = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(t, CharacterTable::build(4));
    assert_eq!(serde_json::to_string_pretty(&t).unwrap() + "\n", stdout(&a));

    let s = exotic(&["springer", "--n", "3", "--format", "json"]);
    let table: SpringerTable = serde_json::from_slice(&s.stdout).unwrap();
    assert_eq!(table.rows.len(), 10);
    assert!(table.rows.iter().all(|r| r.label == r.irrep));
    assert_eq!(serde_json::to_string_pretty(&table).unwrap() + "\n", stdout(&s));

    let tsv = exotic(&["chartable", "--n", "2", "--format", "tsv"]);
    assert_eq!(stdout(&tsv).lines().count(), 6);
}

#[test]
fn hasse_dot_and_branching() {
    let o = exotic(&["hasse", "--n", "3", "--format", "dot"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    for l in ["\"3|-\"", "\"-|1,1,1\"", "\"1|1,1\""] {
        assert!(dot.contains(l), "{l}");
    }
    let edges = dot.lines().filter(|l| l.contains("->")).count();
    let tsv = exotic(&["hasse", "--n", "3", "--format", "tsv"]);
    assert_eq!(stdout(&tsv).lines().count(), edges + 1);

    let b = exotic(&["branch", "--n", "3"]);
    let text = stdout(&b);
    // every irrep of rank 3 has at least one removable node
    for line in text.lines().skip(1) {
        let ones = line.split('\t').skip(1).filter(|c| *c == "1").count();
        assert!(ones >= 1, "{line}");
        assert!(line.split('\t').skip(1).all(|c| c == "0" || c == "1"));
    }
}

#[test]
fn usage_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["repr", "--n", "2", "--p", "4", "--label", "2|-"],
        &["repr", "--n", "2", "--p", "9", "--label", "2|-"],
        &["repr", "--n", "2", "--p", "3", "--label", "2|"],
        &["repr", "--n", "2", "--p", "3", "--label", "1|1|1"],
        &["repr", "--n", "3", "--p", "3", "--label", "2|-"],
        &["orbits", "--n", "0"],
        &["orbits", "--n", "2", "--bogus"],
        &["orbits", "--n", "2", "--format", "dot"],
        &["verify", "--suite", "nope", "--n", "2"],
        &["verify", "--suite", "census", "--n", "2", "--jobs", "0"],
        &["branch", "--n", "1"],
        &[],
    ];
    for args in cases {
        let o = exotic(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}
