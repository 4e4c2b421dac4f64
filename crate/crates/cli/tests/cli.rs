use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use d4lab_core::{Branch, ChartPoint, Sheet, Sign, SolverOptions, UnfoldingSpec};
use serde_json::Value;
use tempfile::TempDir;

fn d4lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_d4lab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write_spec(dir: &TempDir, name: &str, spec: &UnfoldingSpec) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, spec.to_json()).unwrap();
    path
}

fn spec1() -> UnfoldingSpec {
    UnfoldingSpec::canonical(Sign::Minus).with(1, 0, 0, 2, 1.0).with(2, 0, 0, 2, 1.0)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write_spec(&dir, "canonical.json", &UnfoldingSpec::canonical(Sign::Minus));
    let out = d4lab(&["validate", "--spec", s(&good)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["is_normal"], true);

    let bad = write_spec(&dir, "neg.json", &UnfoldingSpec::canonical(Sign::Minus).with(3, 0, 0, 1, -1.0));
    let out = d4lab(&["validate", "--spec", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["is_normal"], false);
    assert!(report["violated_conditions"].as_array().unwrap().iter().any(|v| v == "g_{3,001}>0"), "{report}");

    let malformed = dir.path().join("bad.json");
    fs::write(&malformed, "{\"epsilon1\": -1, \"coeffs\": [").unwrap();
    assert_eq!(d4lab(&["validate", "--spec", s(&malformed)]).status.code(), Some(2));
    assert_eq!(d4lab(&["validate", "--spec", "/nonexistent/spec.json"]).status.code(), Some(2));
}

#[test]
fn run_config_invariants() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "spec.json", &spec1());
    for args in [["--theta-steps", "7"], ["--z-steps", "1"], ["--z-max", "0.6"], ["--z-max", "0"]] {
        let out = d4lab(&["classify", "--spec", s(&spec), args[0], args[1]]);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
    assert_eq!(d4lab(&["classify"]).status.code(), Some(1));
    assert_eq!(d4lab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn mesh_grid_counts() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "spec.json", &UnfoldingSpec::canonical(Sign::Minus));
    let out_dir = dir.path().join("mesh");
    let out = d4lab(&["mesh", "--spec", s(&spec), "--theta-steps", "8", "--z-steps", "2", "--out", s(&out_dir)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["eps2_plus", "eps2_minus"] {
        let obj = fs::read_to_string(out_dir.join(format!("sheet_{name}.obj"))).unwrap();
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 16);
        // 8 periodic columns by one row of quads.
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 8);
    }
    let report: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("mesh.json")).unwrap()).unwrap();
    assert_eq!(report["sheets"][0]["vertices"], 16);
}

#[test]
fn mesh_csv_round_trip() {
    let dir = TempDir::new().unwrap();
    let spec = spec1();
    let path = write_spec(&dir, "spec1.json", &spec);
    let run = |sub: &str| {
        let out_dir = dir.path().join(sub);
        let out = d4lab(&["mesh", "--spec", s(&path), "--theta-steps", "12", "--z-steps", "5", "--out", s(&out_dir)]);
        assert_eq!(out.status.code(), Some(0));
        out_dir
    };
    let (a, b) = (run("a"), run("b"));
    for branch in Branch::sheets(Sign::Minus) {
        let name = if branch.epsilon2 == Sign::Plus { "eps2_plus" } else { "eps2_minus" };
        let csv = fs::read_to_string(a.join(format!("samples_{name}.csv"))).unwrap();
        assert_eq!(csv, fs::read_to_string(b.join(format!("samples_{name}.csv"))).unwrap(), "deterministic output");
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "theta,z,x,y,zpos,E,F,G,L,M,N,K,H,kappa1,kappa2,lambda");

        let options = SolverOptions { z_max: 0.1, ..SolverOptions::default() };
        let sheet = Sheet::with_options(&spec, branch, options).unwrap();
        let mut rows = 0;
        let mut singular = 0;
        for line in lines {
            let f: Vec<&str> = line.split(',').collect();
            assert_eq!(f.len(), 16);
            let num = |i: usize| f[i].parse::<f64>().unwrap();
            let smp = sheet.sample(ChartPoint::new(num(0), num(1)), None).unwrap();
            assert_eq!((smp.position[0], smp.position[1]), (num(2), num(3)), "bit-identical position");
            assert_eq!(smp.forms.n, num(10));
            let dot = |v: [f64; 3]| v[0] * smp.nu[0] + v[1] * smp.nu[1] + v[2] * smp.nu[2];
            assert!(dot(smp.b_theta).abs() <= 1e-8 && dot(smp.b_z).abs() <= 1e-8);
            let is_singular = num(1) == 0.0 || num(15).abs() <= 1e-12;
            assert_eq!(f[11] == "singular", is_singular, "{line}");
            if is_singular {
                singular += 1;
                assert!(f[11..15].iter().all(|v| *v == "singular"));
            } else {
                let kappa1 = num(13);
                assert_eq!(kappa1, smp.curvatures.unwrap().kappa1);
            }
            rows += 1;
        }
        assert_eq!(rows, 60);
        // z = 0 row plus the singular directions nπ/3 on the 12-step grid.
        assert!(singular >= 12, "{singular}");
    }
}

#[test]
fn classify_reports() {
    let dir = TempDir::new().unwrap();
    let out = d4lab(&["classify", "--spec", s(&write_spec(&dir, "spec1.json", &spec1()))]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["case_name"], "I-1");
    assert_eq!(r["discriminant"], 12.0);
    assert_eq!(r["regions"], "(223|122)");
    assert_eq!(r["oracle_agrees"], true);
    assert_eq!(r["parabolic_directions"].as_array().unwrap().len(), 6);

    let out = d4lab(&["classify", "--spec", s(&write_spec(&dir, "c.json", &UnfoldingSpec::canonical(Sign::Minus)))]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), serde_json::json!({ "status": "degenerate", "reason": "xi=0" }));

    let hyp = UnfoldingSpec::canonical(Sign::Plus).with(2, 0, 0, 2, 1.0).with(1, 0, 0, 2, 0.5);
    let r = json(&d4lab(&["classify", "--spec", s(&write_spec(&dir, "h.json", &hyp))]));
    assert_eq!(r["case_name"], "I-2-1");
    assert_eq!(r["regions"], "(1|3)");
}

#[test]
fn classify_writes_to_out_dir() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("r");
    let out = d4lab(&["classify", "--spec", s(&write_spec(&dir, "spec1.json", &spec1())), "--out", s(&out_dir)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("classify.json")).unwrap()).unwrap();
    assert_eq!(r["case_name"], "I-1");
}

#[test]
fn curves_edge_predicate_vanishes() {
    let dir = TempDir::new().unwrap();
    let spec = UnfoldingSpec::canonical(Sign::Minus).with(1, 0, 0, 2, 1.0).with(1, 2, 0, 0, 0.3).with(2, 0, 1, 1, 0.7);
    let out_dir = dir.path().join("c");
    let out = d4lab(&["curves", "--spec", s(&write_spec(&dir, "s.json", &spec)), "--out", s(&out_dir)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_str(&fs::read_to_string(out_dir.join("curves.json")).unwrap()).unwrap();
    let at_zero = r["edge_predicates"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["epsilon2"] == 1 && e["theta0"] == 0.0)
        .unwrap();
    assert_eq!(at_zero["kappa_n"], "vanishes", "{at_zero}");
    let counts = r["counts"].as_array().unwrap();
    let unbounded = counts.iter().find(|c| c["kind"] == "subparabolic_unbounded").unwrap();
    assert_eq!(unbounded["total"], 0);
    let csv = fs::read_to_string(out_dir.join("curves.csv")).unwrap();
    assert!(csv.starts_with("epsilon2,kind,theta,residual,derivative,transverse\n"));
}

#[test]
fn curves_seed_sweep_bounds() {
    for seed in 0..200 {
        let out = d4lab(&["curves", "--seed", &seed.to_string()]);
        assert_eq!(out.status.code(), Some(0), "seed {seed}: {}", String::from_utf8_lossy(&out.stderr));
        let r = json(&out);
        assert_eq!(r["bounds_ok"], true, "seed {seed}");
        assert!(r["counts"].as_array().unwrap().iter().all(|c| c["bound_ok"] == true));
    }
}
