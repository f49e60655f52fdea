use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn model(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models").join(name)
}

fn levylab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levylab")).args(args).output().expect("binary runs")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn catalog_lists_six_families() {
    let dir = tempfile::tempdir().unwrap();
    let out = levylab(&["catalog", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let printed: Value = serde_json::from_slice(&out.stdout).unwrap();
    let families = printed["families"].as_array().unwrap();
    assert_eq!(families.len(), 6);
    assert!(families.iter().all(|f| f["params"].as_array().is_some_and(|p| !p.is_empty())));
    assert_eq!(read_json(&dir.path().join("catalog.json")), printed);
    assert!(printed["schema_version"].is_string());
}

#[test]
fn cauchy_density_csv_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let m = model("cauchy.json");
    let out = levylab(&[
        "density",
        "--model",
        m.to_str().unwrap(),
        "--t",
        "1",
        "--N",
        "262144",
        "--L",
        "200",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("density_000.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("y,p"));
    let mut worst: f64 = 0.0;
    let mut rows = 0;
    for line in lines {
        let (y, p) = line.split_once(',').unwrap();
        let (y, p): (f64, f64) = (y.parse().unwrap(), p.parse().unwrap());
        rows += 1;
        if y.abs() <= 20.0 {
            worst = worst.max((p - 1.0 / (PI * (1.0 + y * y))).abs());
        }
    }
    assert_eq!(rows, 262_144);
    assert!(worst <= 1e-6, "max error {worst:e}");

    let report = read_json(&dir.path().join("density.json"));
    assert_eq!(report["config"]["grid"]["N"], 262_144);
    assert!(report["gates"].as_array().unwrap().iter().all(|g| g["passed"] == true));
    let side = read_json(&dir.path().join("density_000.bin.json"));
    assert_eq!(side["N"], 262_144);
    let bytes = std::fs::metadata(dir.path().join("density_000.bin")).unwrap().len();
    assert_eq!(bytes, 8 * 262_144);
}

#[test]
fn stable_tv_rate_slope_is_minus_one() {
    let dir = tempfile::tempdir().unwrap();
    let m = model("stable_a1.json");
    let out = levylab(&[
        "tv-rate",
        "--model",
        m.to_str().unwrap(),
        "--t",
        "10:10000:24",
        "--shift",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let fit = read_json(&dir.path().join("tv_fit.json"));
    let slope = fit["result"]["fit_summary"]["slope"].as_f64().unwrap();
    assert!((slope + 1.0).abs() < 0.01, "slope {slope}");
    let result = &fit["result"];
    for key in ["hypothesis_report", "baseline_compare", "t_window", "direction_margin", "grids"] {
        assert!(!result[key].is_null(), "missing {key}");
    }
    assert_eq!(result["baseline_compare"].as_array().unwrap().len(), 24);
    let csv = std::fs::read_to_string(dir.path().join("tv_series.csv")).unwrap();
    assert!(csv.starts_with("t,quantity,value,law_value,ratio\n"));
    assert_eq!(csv.lines().count(), 25);
}

#[test]
fn bad_inputs_exit_two_with_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim": 1, "family": "stable", "alpha": 2.5, "spectral": {"atoms": [[1.0, 1.0]]}}"#).unwrap();
    let out = levylab(&["density", "--model", bad.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("alpha"), "{}", stderr(&out));

    std::fs::write(&bad, "{\"dim\": 1,\n \"family\": }").unwrap();
    let out = levylab(&["density", "--model", bad.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let m = model("stable_a1.json");
    let out = levylab(&["tv-rate", "--model", m.to_str().unwrap(), "--t", "10:100:4", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`t`"), "{}", stderr(&out));

    let out = levylab(&["density", "--model", m.to_str().unwrap(), "--dim", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`dim`"));

    let out = levylab(&["density", "--model", m.to_str().unwrap(), "--t", "5:1:3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_gates_exit_one_and_name_the_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let m = model("stable_a1.json");
    // A tiny lattice: the image correction keeps the mass near 1, but not
    // within the 1e-4 gate.
    let out = levylab(&["density", "--model", m.to_str().unwrap(), "--N", "64", "--L", "0.5", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    assert!(stderr(&out).contains("`mass`"), "{}", stderr(&out));
    let report = read_json(&dir.path().join("density.json"));
    assert_eq!(report["gates"][0]["passed"], false);

    // The same run under a looser mass tolerance passes.
    let loose = ["density", "--model", m.to_str().unwrap(), "--N", "64", "--L", "0.5", "--tol", "mass=1e-2"];
    let out = levylab(&[&loose[..], &["--out", dir.path().to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = levylab(&["density", "--model", m.to_str().unwrap(), "--tol", "mass:1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`tol`"));

    // Compound Poisson is not absolutely continuous at any t.
    let cp = dir.path().join("cp.json");
    std::fs::write(&cp, r#"{"dim": 1, "explicit": {"kind": "compound_poisson", "rate": 1.0, "jump": [1.0]}}"#).unwrap();
    let out = levylab(&["density", "--model", cp.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let m = model("layered.json");
    let m = m.to_str().unwrap();
    let runs: [&[&str]; 3] = [
        &["density", "--model", m, "--t", "0.5:2:3", "--N", "4096", "--out", d],
        &["grad-rate", "--model", m, "--t", "10:1000:8", "--N", "8192", "--out", d],
        &["mc-check", "--model", m, "--paths", "5000", "--epsilon", "0.05", "--seed", "9", "--out", d],
    ];
    let files = ["density.json", "density_001.csv", "density_002.bin", "grad_fit.json", "grad_series.csv", "mc_check.json"];
    let snapshot = || -> Vec<Vec<u8>> { files.iter().map(|f| std::fs::read(dir.path().join(f)).unwrap()).collect() };
    for args in runs {
        let out = levylab(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
    }
    let first = snapshot();
    for args in runs {
        assert_eq!(levylab(args).status.code(), Some(0));
    }
    assert_eq!(first, snapshot());
    let report = read_json(&dir.path().join("mc_check.json"));
    assert_eq!(report["config"]["seed"], 9);
    assert_eq!(report["config"]["model"]["family"], "layered");
}
