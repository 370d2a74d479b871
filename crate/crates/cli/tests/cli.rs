use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nspgap_core::certify::{nsp_constant, NspOptions};
use nspgap_core::gap::{build_gap_matrix, build_inner_matrix};
use serde_json::Value;

fn nspgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nspgap")).args(args).env_remove("NSPGAP_THREADS").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gap_threshold_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let run = nspgap(&["gap-threshold", "--delta", "0.1", "--gamma", "0.9", "--out", s(&out)]);
    assert_eq!(code(&run), 0);
    assert_eq!(String::from_utf8(run.stdout).unwrap().lines().count(), 1);
    let r = report(&out);
    assert_eq!(r["schema_version"], "1");
    assert!((r["s_min"].as_f64().unwrap() - 1297.1).abs() < 0.5);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let run = nspgap(&[
            "gap-build",
            "--N",
            "22",
            "--s",
            "1",
            "--gamma",
            "0.9",
            "--seed",
            "3",
            "--out-dir",
            s(&dir.path().join("g")),
            "--out",
            s(p),
        ]);
        assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn certify_rip_on_orthonormal_columns() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("q.csv");
    fs::write(&m, "1,0,0\n0,1,0\n0,0,1\n0,0,0\n").unwrap();
    let out = dir.path().join("r.json");
    let run = nspgap(&["certify-rip", "--matrix", s(&m), "--k", "2", "--out", s(&out)]);
    assert_eq!(code(&run), 0);
    let r = report(&out);
    assert_eq!(r["certificate"]["constant"].as_f64().unwrap(), 0.0);
    assert_eq!(r["certificate"]["kind"], "rip");
}

#[test]
fn gap_build_round_trips_through_certify_nsp() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    let run = nspgap(&[
        "gap-build",
        "--N",
        "22",
        "--s",
        "1",
        "--gamma",
        "0.9",
        "--seed",
        "0",
        "--out-dir",
        s(&g),
        "--out",
        s(&dir.path().join("b.json")),
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    for f in ["A.csv", "Phi.csv", "d.csv", "phi1.csv", "params.json"] {
        assert!(g.join(f).is_file(), "{f}");
    }
    let out = dir.path().join("c.json");
    let run = nspgap(&["certify-nsp", "--matrix", s(&g.join("Phi.csv")), "--s", "1", "--gamma", "0.9", "--out", s(&out)]);
    assert_eq!(code(&run), 0);
    let from_disk = report(&out)["certificate"]["constant"].as_f64().unwrap();

    let opts = NspOptions::default();
    let inner = build_inner_matrix(14, 21, 1, 0.3, 0, 32, &opts).unwrap();
    let gc = build_gap_matrix(22, 1, 0.9, inner.a, Some(inner.seed)).unwrap();
    let in_memory = nsp_constant(&gc.kernel, 1, &opts).unwrap().gamma;
    assert!((from_disk - in_memory).abs() <= 1e-9, "{from_disk} vs {in_memory}");
    assert_eq!(report(&out)["holds"], true);
}

#[test]
fn solve_and_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("phi.csv");
    fs::write(&m, "1,0,1,2\n0,1,1,-1\n").unwrap();
    let y = dir.path().join("y.csv");
    fs::write(&y, "2\n2\n").unwrap();
    let xhat = dir.path().join("xhat.csv");
    let out = dir.path().join("s.json");
    let run = nspgap(&["solve", "--matrix", s(&m), "--y", s(&y), "--eps", "0", "--xhat-out", s(&xhat), "--out", s(&out)]);
    assert_eq!(code(&run), 0);
    let r = report(&out);
    assert_eq!(r["status"], "optimal");
    assert!((r["l1_value"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!(xhat.is_file());

    let out = dir.path().join("e.json");
    let run = nspgap(&["experiment", "--matrix", s(&m), "--s", "1", "--eps", "0.01", "--trials", "3", "--certify", "--out", s(&out)]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(report(&out)["records"].as_array().unwrap().len(), 3);
}

#[test]
fn bounds_validate_exactly_their_parameters() {
    let ok = nspgap(&["bounds", "--name", "cai_zhang_l2", "--delta", "0.1", "--s", "4", "--eps", "0.1", "--sigma", "0"]);
    assert_eq!(code(&ok), 0);
    let stdout = String::from_utf8(ok.stdout).unwrap();
    assert!(stdout.contains("\"name\": \"cai_zhang_l2\""));
    let extra =
        nspgap(&["bounds", "--name", "cai_zhang_l2", "--delta", "0.1", "--s", "4", "--eps", "0.1", "--sigma", "0", "--gamma", "0.5"]);
    assert_eq!(code(&extra), 1);
    let missing = nspgap(&["bounds", "--name", "nsp_l1", "--gamma", "0.5"]);
    assert_eq!(code(&missing), 1);
    let domain = nspgap(&["bounds", "--name", "cai_zhang_l2", "--delta", "0.8", "--s", "4", "--eps", "0.1", "--sigma", "0"]);
    assert_eq!(code(&domain), 1);
}

#[test]
fn exit_statuses() {
    assert_eq!(code(&nspgap(&["certify-nsp", "--bogus"])), 1);
    assert_eq!(code(&nspgap(&["gap-threshold", "--delta", "0.1", "--gamma", "1.5"])), 1);
    assert_eq!(code(&nspgap(&["--help"])), 0);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "1,2,3\n4,oops,6\n").unwrap();
    let run = nspgap(&["certify-nsp", "--matrix", s(&bad), "--s", "1"]);
    assert_eq!(code(&run), 1);
    let err = String::from_utf8(run.stderr).unwrap();
    assert!(err.contains("bad.csv:2"), "{err}");

    let m = dir.path().join("m.csv");
    fs::write(&m, "1,1,1,1,1,1,1,1\n1,-1,1,-1,1,-1,1,-1\n").unwrap();
    assert_eq!(code(&nspgap(&["certify-nsp", "--matrix", s(&m), "--s", "3", "--cap", "10"])), 2);

    let threads = Command::new(env!("CARGO_BIN_EXE_nspgap"))
        .args(["gap-threshold", "--delta", "0.1", "--gamma", "0.9"])
        .env("NSPGAP_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&threads), 1);
}

#[test]
fn gap_demo_reference_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let run = nspgap(&[
        "gap-demo",
        "--N",
        "64",
        "--s",
        "2",
        "--gamma",
        "0.8",
        "--seed",
        "1",
        "--out-dir",
        s(&dir.path().join("g")),
        "--out",
        s(&out),
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let r = report(&out);
    assert_eq!(r["kernel_nsp"]["holds"], true);
    assert!(r["kernel_nsp"]["certificate"]["constant"].as_f64().unwrap() <= 0.8);
    assert_eq!(r["disproof"]["regime"], "matrix");
    assert_eq!(r["disproof"]["report"]["disproven"], false);
    assert_eq!(r["contradiction"]["regime"], "formula");
    assert_eq!(r["contradiction"]["report"]["contradiction"], true);
    assert!(dir.path().join("g").join("instance.json").is_file());
    assert!(r["instance"]["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}
