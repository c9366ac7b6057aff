use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mawtc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mawtc"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr_kind(o: &Output) -> String {
    let v: Value = serde_json::from_slice(&o.stderr).expect("error output is JSON");
    v["error"]["kind"].as_str().unwrap().to_string()
}

#[test]
fn region_writes_csv_json_and_manifest() {
    let t = tempfile::tempdir().unwrap();
    let o = mawtc(t.path(), &["--out", "r", "region", "--alpha", "0,0.5", "--budget", "30"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let dir = t.path().join("r");
    let csv = std::fs::read_to_string(dir.join("region.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with('#')));
    let reports = json(&dir.join("region.json"));
    assert_eq!(reports.as_array().unwrap().len(), 2);
    let m = json(&dir.join("manifest.json"));
    let files: Vec<&str> = m["outputs"].as_array().unwrap().iter().map(|f| f["file"].as_str().unwrap()).collect();
    assert!(files.contains(&"region.csv") && files.contains(&"region.json"));
}

#[test]
fn sim_lists_every_strategy() {
    let t = tempfile::tempdir().unwrap();
    let o = mawtc(
        t.path(),
        &["--out", "s", "sim", "--model", "model1", "--n", "4", "--mu", "2", "--trials", "200"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(t.path().join("s/leakage.csv")).unwrap();
    let rows = csv.lines().filter(|l| !l.starts_with('#')).count();
    // header plus C(4, 2) 2^2 strategies
    assert_eq!(rows, 1 + 24);
    let sim = json(&t.path().join("s/sim.json"));
    assert!(sim.to_string().contains("error"));
}

#[test]
fn every_verify_check_runs() {
    let t = tempfile::tempdir().unwrap();
    let checks: [&[&str]; 7] = [
        &["lemma1", "--n", "6", "--draws", "50"],
        &["lemma2", "--n", "4", "--draws", "10"],
        &["chernoff", "--trials", "5000"],
        &["entropy", "--n", "3", "--strategy", "1,3", "--model", "model3"],
        &["rates"],
        &["decomposition", "--n", "3", "--draws", "5"],
        &["decay", "--ns", "4,6,8"],
    ];
    for (k, c) in checks.iter().enumerate() {
        let out = format!("v{k}");
        let mut args = vec!["--out", out.as_str(), "verify"];
        args.extend_from_slice(c);
        let o = mawtc(t.path(), &args);
        assert!(o.status.success(), "{c:?}: {}", String::from_utf8_lossy(&o.stderr));
        let file = t.path().join(&out).join(format!("verify-{}.json", c[0]));
        let v = json(&file);
        assert_eq!(v["check"], c[0]);
        assert!(v["report"].is_object() || v["report"].is_array());
    }
}

#[test]
fn replay_reproduces_across_job_counts() {
    let t = tempfile::tempdir().unwrap();
    let o = mawtc(
        t.path(),
        &["--jobs", "1", "--out", "a", "sweep", "--n", "2,3", "--alpha", "0.5", "--trials", "300", "--seed", "5"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = mawtc(t.path(), &["--jobs", "3", "--out", "b", "replay", "a/manifest.json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["identical"], true);
    for f in ["sweep.csv", "point-0001/sim.json", "point-0001/leakage.csv", "manifest.json"] {
        assert_eq!(
            std::fs::read(t.path().join("a").join(f)).unwrap(),
            std::fs::read(t.path().join("b").join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn replay_reports_a_tampered_manifest() {
    let t = tempfile::tempdir().unwrap();
    assert!(mawtc(t.path(), &["--out", "a", "region", "--alpha", "0.25", "--budget", "10"]).status.success());
    let path = t.path().join("a/manifest.json");
    let mut m = json(&path);
    m["outputs"][0]["sha256"] = Value::String("0".repeat(64));
    std::fs::write(&path, serde_json::to_string_pretty(&m).unwrap()).unwrap();
    let o = mawtc(t.path(), &["--out", "b", "replay", "a/manifest.json"]);
    assert_eq!(o.status.code(), Some(3));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["identical"], false);
    assert_eq!(r["mismatched"].as_array().unwrap().len(), 1);
    // refusing to overwrite the recorded run
    let o = mawtc(t.path(), &["--out", "a", "replay", "a/manifest.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_kind(&o), "invalid_parameter");
}

#[test]
fn errors_are_structured() {
    let t = tempfile::tempdir().unwrap();
    let o = mawtc(t.path(), &["region", "--alpha", ""]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_kind(&o), "usage");
    let o = mawtc(t.path(), &["region", "--alpha", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mawtc(t.path(), &["region", "--spec", "missing.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.json"));
    let o = Command::new(env!("CARGO_BIN_EXE_mawtc"))
        .current_dir(t.path())
        .env("MAWTC_MAX_STRATEGIES", "3")
        .args(["sim", "--n", "4", "--trials", "10"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_kind(&o), "cap_exceeded");
}

#[test]
fn specs_load_from_files_and_builtins() {
    let t = tempfile::tempdir().unwrap();
    let spec = r#"{"model":"model2","alpha":0.5,"alphabets":{"x1":2,"x2":2,"y":3},
                   "main":[[[1,0,0],[0,1,0]],[[0,1,0],[0,0,1]]]}"#;
    std::fs::write(t.path().join("adder.json"), spec).unwrap();
    let o = mawtc(t.path(), &["--out", "f", "region", "--spec", "adder.json", "--budget", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = mawtc(t.path(), &["--out", "g", "region", "--builtin", "noiseless-adder", "--budget", "5"]);
    assert!(o.status.success());
    assert_eq!(
        std::fs::read(t.path().join("f/region.json")).unwrap(),
        std::fs::read(t.path().join("g/region.json")).unwrap()
    );
    let o = mawtc(t.path(), &["region", "--builtin", "nope"]);
    assert_ne!(o.status.code(), Some(0));
}
