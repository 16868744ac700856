use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;

fn plastsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plastsym")).args(args).output().expect("binary runs")
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("plastsym-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn eval_rigid_motion() {
    let o = plastsym(&["eval", "--family", "RIGID", "--params", "b1=1,b2=0,b3=0,sigma0=0,theta0=0", "--at", "2,3"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["u"], 3.0);
    assert_eq!(v["v"], -2.0);
    assert_eq!(v["residual"], 0.0);
}

#[test]
fn eval_accepts_negative_coordinates_and_hints() {
    let o = plastsym(&["eval", "--family", "B1_IMPLICIT", "--params", "c1=5", "--at", "-0.5,-0.35", "--hint", "1.9528"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let (u, w) = (v["u"].as_f64().unwrap(), v["v"].as_f64().unwrap());
    assert!((u.hypot(w) - 5.0).abs() < 1e-10);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["eval", "--family", "NOPE", "--at", "1,1"][..],
        &["eval", "--family", "RIGID", "--params", "b1=1", "--at", "1"],
        &["eval", "--family", "RIGID", "--params", "b1=1", "--at", "1,1", "--frobnicate"],
        &["verify", "algebra", "--table", "Q"],
        &["verify", "solutions", "--family", "RIGID,NOPE"],
        &["figure", "6", "--out", "x"],
        &["trace", "limit", "--family", "RIGID", "--params", "b1=1", "--start", "1,0", "--out", "x.csv"],
        &["dance"],
    ] {
        assert_eq!(plastsym(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_with_one() {
    let o = plastsym(&["eval", "--family", "K_PIS", "--params", "c2=1,c3=1", "--at", "0,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("outside"));
}

#[test]
fn algebra_report_covers_every_cell() {
    let dir = scratch("algebra");
    let out = dir.join("l.json");
    let o = plastsym(&["verify", "algebra", "--table", "L", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v = json(&out);
    let cells: Vec<&Value> = v["checks"].as_array().unwrap().iter().filter(|c| c["id"].as_str().unwrap().starts_with("algebra.L.[")).collect();
    assert_eq!(cells.len(), 196);
    assert!(cells.iter().all(|c| c["status"] == "PASS" && c["tol"] == 1e-8));
    let misprint = cells.iter().find(|c| c["id"] == "algebra.L.[D2,P2]").unwrap();
    assert_eq!(misprint["ref"], "table-d2-p2");
    let errata = std::fs::read_to_string(dir.join("ERRATA.md")).unwrap();
    assert!(errata.contains("## table-d2-p2"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn identical_runs_write_identical_csv() {
    let dir = scratch("determinism");
    let run = |name: &str, seed: &str| {
        let out = dir.join(name);
        let o = plastsym(&["--seed", seed, "verify", "solutions", "--family", "K_PIS,SIM_C1NZ_ADD_A", "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
        std::fs::read(out.with_extension("csv")).unwrap()
    };
    let (a, b, c) = (run("a.json", "42"), run("b.json", "42"), run("c.json", "7"));
    assert_eq!(a, b);
    assert_ne!(a, c, "the seed reaches the sampling");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn figure_five_files_exist_and_parse() {
    let dir = scratch("fig5");
    let o = plastsym(&["figure", "5", "--out", dir.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let names: Vec<String> =
        std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    for stem in ["all", "inner", "outer", "entry", "exit"] {
        for ext in ["csv", "svg"] {
            assert!(names.contains(&format!("figure5_{stem}.{ext}")), "{stem}.{ext} in {names:?}");
        }
    }
    for n in names.iter().filter(|n| n.ends_with(".csv") && n.starts_with("figure5_") && !n.contains("report")) {
        let text = std::fs::read_to_string(dir.join(n)).unwrap();
        assert!(!diegeom::parse_csv(&text).unwrap().is_empty(), "{n}");
    }
    let report = json(&dir.join("figure5_report.json"));
    let quoted = &report["figures"][0]["quoted"];
    assert!(quoted.as_array().unwrap().iter().any(|q| q[0] == "H(eta)" && q[1] == "2 exp(-0.1 eta)"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn trace_writes_csv_or_svg() {
    let dir = scratch("trace");
    let csv = dir.join("flow.csv");
    let o = plastsym(&[
        "trace", "flow", "--family", "RIGID", "--params", "b1=1", "--start", "1,0", "--ds", "1e-2", "--steps", "100",
        "--out", csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let curves = diegeom::parse_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(curves[0].len(), 101);
    let svg = dir.join("slip.svg");
    let o = plastsym(&[
        "trace", "slip", "--family", "K_PIS", "--params", "c2=-1,c3=-2", "--start", "0.6,0.3", "--branch", "b",
        "--steps", "200", "--out", svg.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&svg).unwrap().contains("sliplineB"));
    let o = plastsym(&[
        "trace", "limit", "--family", "RIGID", "--params", "b1=0", "--start", "0,0", "--feed", "1,1", "--steps", "50",
        "--out", dir.join("limit.csv").to_str().unwrap(),
    ]);
    assert!(o.status.success());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn catalog_file_with_a_broken_row_fails() {
    let dir = scratch("catalog");
    let good = dir.join("good.txt");
    std::fs::write(&good, "X_2,1 = { B1 ; D2 }\n").unwrap();
    assert_eq!(plastsym(&["verify", "catalog", "--file", good.to_str().unwrap()]).status.code(), Some(0));
    let bad = dir.join("bad.txt");
    // A printed row known not to close, under a label with no correction.
    std::fs::write(&bad, "X_2,11 = { B1 ; B3 + a*P2 + eps*P4 } | a:real, eps:pm1\n").unwrap();
    let o = plastsym(&["verify", "catalog", "--file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL catalog.X_2,11"));
    std::fs::remove_dir_all(&dir).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Exit status is 1 exactly when some gated check fails.
    #[test]
    fn exit_code_tracks_failures(exp in -20.0f64..-6.0) {
        let dir = scratch(&format!("exit{}", exp.to_bits()));
        let out = dir.join("r.json");
        let tol = format!("{:e}", 10f64.powf(exp));
        let code = cli::run(["plastsym", "verify", "algebra", "--table", "S", "--samples", "20", "--tol", &tol, "--out", out.to_str().unwrap()]);
        let v = json(&out);
        let failing = v["checks"].as_array().unwrap().iter().any(|c| c["status"] == "FAIL");
        prop_assert_eq!(code, if failing { 1 } else { 0 });
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
