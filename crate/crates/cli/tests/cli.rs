use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use geamlab::coherence::IdentityReport;
use geamlab::entangle::{DetectionReport, Verdict};
use geamlab::linalg::ComplexMatrix;
use serde_json::Value;

fn geamlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geamlab"))
        .args(args)
        .env_remove("GEAMLAB_THREADS")
        .output()
        .expect("spawn geamlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn detection(args: &[&str]) -> DetectionReport {
    let o = geamlab(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(stdout(&o).trim()).unwrap()
}

fn sweep_rows(path: &Path) -> Vec<(f64, f64, f64, String)> {
    let mut r = csv::Reader::from_path(path).unwrap();
    assert_eq!(r.headers().unwrap(), vec!["param", "value", "threshold", "verdict"]);
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            let num = |i: usize| rec[i].parse::<f64>().unwrap();
            (num(0), num(1), num(2), rec[3].to_string())
        })
        .collect()
}

fn first_change(rows: &[(f64, f64, f64, String)]) -> f64 {
    let i = rows.windows(2).position(|w| w[0].3 != w[1].3).expect("a verdict change");
    (rows[i].0 + rows[i + 1].0) / 2.0
}

#[test]
fn verify_emits_passing_reports_that_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.jsonl");
    let o = geamlab(&[
        "verify", "--d", "2,3", "--f", "sld,wyd:0.3", "--preset", "mub,gsic:0.7", "--states", "2", "--samples", "2000",
        "--output", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let reports: Vec<IdentityReport> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(reports.len(), 2 * 2 * 2 * 2 * 9);
    assert!(reports.iter().all(|r| r.pass));
    for (line, r) in text.lines().zip(&reports) {
        assert_eq!(serde_json::to_string(r).unwrap(), line);
    }
    assert!(String::from_utf8_lossy(&o.stderr).contains("all passed"));
}

#[test]
fn verify_fails_with_exit_one_on_an_impossible_tolerance() {
    let o = geamlab(&["verify", "--tolerance", "1e-30", "--states", "1", "--samples", "500"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_csv_has_one_row_per_report() {
    let o = geamlab(&["verify", "--states", "1", "--samples", "500", "--format", "csv", "--f", "gwyd:0.2,0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let rows: Vec<_> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 9);
    for row in &rows {
        let spec: Value = serde_json::from_str(&row[10]).unwrap();
        assert_eq!(spec["preset"], "mub");
        assert_eq!(&row[2], "gwyd:0.2,0.5");
    }
}

#[test]
fn bad_configuration_exits_two() {
    for args in [
        &["verify", "--d", "3", "--preset", "nm:5,2"][..],
        &["verify", "--f", "nonsense"][..],
        &["detect", "--family", "isotropic", "--d", "2"][..],
        &["detect", "--family", "werner", "--d", "3", "--q", "0.5"][..],
        &["sweep", "--family", "werner", "--d", "3", "--from", "1", "--to", "0"][..],
        &["sweep", "--family", "isotropic", "--d", "3", "--step", "0"][..],
        &["geam-check", "--preset", "sic"][..],
        &["detect", "--family", "werner", "--state", "x.json"][..],
        &["verify", "--threads", "0"][..],
    ] {
        let o = geamlab(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn detect_reference_states() {
    let r = detection(&["detect", "--family", "isotropic", "--d", "2", "--q", "0.6", "--criterion", "F", "--preset", "mub"]);
    assert_eq!(r.verdict, Verdict::Entangled);
    assert_eq!(r.family, "isotropic");
    assert_eq!(r.param, Some(0.6));
    assert!(r.value > r.threshold);

    let r = detection(&["detect", "--family", "werner", "--d", "3", "--x", "0.5", "--criterion", "G", "--preset", "sic"]);
    assert_eq!(r.verdict, Verdict::Inconclusive);
    assert!(r.f.is_none());

    let r = detection(&["detect", "--family", "werner-qubit", "--d", "2", "--p", "0.9", "--criterion", "G"]);
    assert_eq!(r.verdict, Verdict::Entangled);
}

#[test]
fn detect_state_files() {
    let dir = tempfile::tempdir().unwrap();
    // |0><0| (x) (I/2) written by hand as a 4x4 matrix.
    let mut rows = vec![vec![[0.0, 0.0]; 4]; 4];
    rows[0][0] = [0.5, 0.0];
    rows[1][1] = [0.5, 0.0];
    let product = dir.path().join("product.json");
    fs::write(&product, serde_json::to_string(&rows).unwrap()).unwrap();
    for c in ["F", "G", "F-scaled", "G-scaled"] {
        let r = detection(&["detect", "--state", product.to_str().unwrap(), "--criterion", c]);
        assert_eq!(r.verdict, Verdict::Inconclusive, "{c}");
        assert_eq!(r.d, 2);
        assert_eq!(r.param, None);
        assert!(r.family.starts_with("file:"));
    }

    // Bell state (|00> + |11>)/sqrt(2).
    let mut bell = vec![vec![[0.0, 0.0]; 4]; 4];
    for i in [0, 3] {
        for j in [0, 3] {
            bell[i][j] = [0.5, 0.0];
        }
    }
    let bell_path = dir.path().join("bell.json");
    fs::write(&bell_path, serde_json::to_string(&bell).unwrap()).unwrap();
    let r = detection(&["detect", "--state", bell_path.to_str().unwrap(), "--criterion", "G"]);
    assert_eq!(r.verdict, Verdict::Entangled);

    let mut bad = rows.clone();
    bad[0][0] = [1.5, 0.0];
    bad[1][1] = [-0.5, 0.0];
    let bad_path = dir.path().join("bad.json");
    fs::write(&bad_path, serde_json::to_string(&bad).unwrap()).unwrap();
    let o = geamlab(&["detect", "--state", bad_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let m: ComplexMatrix = serde_json::from_str(&fs::read_to_string(&product).unwrap()).unwrap();
    assert_eq!(m.rows(), 4);
}

#[test]
fn sweeps_cross_at_the_known_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let q_star = |d: f64| {
        let a = d * d - 2.0;
        (a + (a * a + 16.0 * d * (d + 1.0)).sqrt()) / (4.0 * d * (d + 1.0))
    };
    let cases: [(&[&str], f64); 4] = [
        (&["--family", "isotropic", "--d", "2"], q_star(2.0)),
        (&["--family", "isotropic", "--d", "3"], q_star(3.0)),
        (&["--family", "werner", "--d", "3"], 2.0 / 3.0 - 1.0),
        (&["--family", "werner-qubit", "--d", "2", "--from", "-0.3"], 1.0 / 3.0),
    ];
    for (i, (args, expect)) in cases.iter().enumerate() {
        let out = dir.path().join(format!("s{i}.csv"));
        let mut full = vec!["sweep", "--output", out.to_str().unwrap()];
        full.extend_from_slice(args);
        let o = geamlab(&full);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let rows = sweep_rows(&out);
        let found = first_change(&rows);
        assert!((found - expect).abs() <= 1e-3, "{args:?}: {found} vs {expect}");
        for (_, value, threshold, verdict) in &rows {
            assert_eq!(verdict == "entangled", value > threshold);
        }
    }
}

#[test]
fn sweeps_are_byte_identical_across_thread_counts() {
    let run = |threads: &str| {
        let o = geamlab(&["sweep", "--family", "isotropic", "--d", "3", "--step", "0.01", "--threads", threads]);
        assert_eq!(o.status.code(), Some(0));
        o.stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("1"));
}

#[test]
fn geam_check_reports_validation_and_feasibility() {
    let o = geamlab(&["geam-check", "--preset", "sic", "--d", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["N"], 1);
    assert_eq!(v["validation"]["checks"].as_array().unwrap().len(), 7);
    let cap = v["cap"].as_f64().unwrap();
    assert!((v["max_feasible_s"].as_f64().unwrap() - cap).abs() < 1e-9);

    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(&spec, r#"{"d":2,"N":3,"M":[2,2,2],"gamma":[0.5,0.25,0.25],"S":[0.05,0.05,0.03],"signs":[1,-1,1]}"#).unwrap();
    let o = geamlab(&["geam-check", "--spec", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["signs"], serde_json::json!([1, -1, 1]));

    let o = geamlab(&["geam-check", "--spec", spec.to_str().unwrap(), "--tolerance", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn printed_configuration_replays_identically() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["detect", "--family", "werner", "--d", "3", "--x", "-0.6", "--criterion", "G", "--preset", "sic"];
    let direct = geamlab(&args);
    let mut with_print = args.to_vec();
    with_print.push("--print-config");
    let cfg = geamlab(&with_print);
    assert_eq!(cfg.status.code(), Some(0));
    let path = dir.path().join("run.json");
    fs::write(&path, &cfg.stdout).unwrap();
    let replay = geamlab(&["replay", path.to_str().unwrap()]);
    assert_eq!(replay.status.code(), Some(0));
    assert_eq!(direct.stdout, replay.stdout);
}
