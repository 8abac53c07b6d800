use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const QUADRATIC: &str = r#"{"kind":"polynomial","n":2,"coefficients":[{"powers":[2,0],"coef":1},{"powers":[0,2],"coef":1}]}"#;

fn amvlab(dir: &Path, args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_amvlab"));
    cmd.current_dir(dir).args(args).env_remove("AMVLAB_THREADS");
    if let Some(t) = threads {
        cmd.env("AMVLAB_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    fs::write(dir.join(name), body).unwrap();
    name.to_string()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn point_amv_of_squared_norm() {
    let t = TempDir::new().unwrap();
    let cfg = write(
        t.path(),
        "sq.json",
        &format!(r#"{{"task":"point","space":{{"distance":{{"kind":"norm","n":2}}}},"field":{QUADRATIC},"x":[0,0],"r":0.1}}"#),
    );
    let o = amvlab(t.path(), &["run", &cfg, "--out-dir", "out"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let b = read_json(&t.path().join("out/sq.json"));
    let est = &b["estimate"];
    assert!((est["value"].as_f64().unwrap() - 0.5).abs() <= 1e-12);
    assert!(est.get("error_bound").is_some() && est.get("scheme").is_some());
}

#[test]
fn verify_exponential_weight_passes_and_writes_csv() {
    let t = TempDir::new().unwrap();
    let cfg = write(
        t.path(),
        "exp.json",
        r#"{"task":"verify","space":{"distance":{"kind":"norm","n":2},"weight":{"kind":"exp_linear","a":[1,0]}},
            "field":{"kind":"polynomial","n":2,"coefficients":[{"powers":[1,0],"coef":1}]},"x":[0,0],"radii":{"r0":0.2,"count":8}}"#,
    );
    let o = amvlab(t.path(), &["verify", &cfg, "--out-dir", "out"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let b = read_json(&t.path().join("out/exp.json"));
    let cmp = &b["comparison"];
    assert!(cmp["pass"].as_bool().unwrap());
    assert!(cmp["abs_gap"].as_f64().unwrap() < 1e-3);
    assert_eq!(b["verdict"]["status"], "converged");
    for key in ["status", "limit", "uncertainty", "order"] {
        assert!(b["verdict"].get(key).is_some(), "{key}");
    }
    for key in ["quantity", "value", "citation"] {
        assert!(b["prediction"].get(key).is_some(), "{key}");
    }
    assert!((b["prediction"]["value"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    let csv = fs::read_to_string(t.path().join("out/exp.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("r,value,error_bound"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first.len(), 3);
    // 17 significant digits: one before the point, sixteen after
    let mantissa = first[1].split('e').next().unwrap();
    assert_eq!(mantissa.trim_start_matches('-').len(), 18, "{mantissa}");
    assert_eq!(first[1].parse::<f64>().unwrap().to_bits(), b["profile"]["rows"][0]["value"].as_f64().unwrap().to_bits());
}

#[test]
fn tight_tolerance_fails_verification_with_exit_one() {
    let t = TempDir::new().unwrap();
    // QMC noise cannot meet a 1e-12 gap
    let cfg = write(
        t.path(),
        "tight.json",
        r#"{"task":"verify","scheme":{"kind":"qmc","count":512},"space":{"distance":{"kind":"norm","n":2},"weight":{"kind":"exp_linear","a":[1,0.5]}},
            "field":{"kind":"weight","weight":{"kind":"exp_linear","a":[0.3,1]}},"x":[0.1,0.1],"radii":{"r0":0.2,"count":5}}"#,
    );
    let o = amvlab(t.path(), &["verify", &cfg, "--tolerance", "1e-12", "--out-dir", "out"], None);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let b = read_json(&t.path().join("out/tight.json"));
    assert_eq!(b["comparison"]["pass"], false);
    assert_eq!(b["comparison"]["tolerance"], 1e-12);
}

#[test]
fn negative_radius_is_a_config_error_with_its_path() {
    let t = TempDir::new().unwrap();
    let cfg = write(
        t.path(),
        "neg.json",
        &format!(r#"{{"task":"sweep","space":{{"distance":{{"kind":"norm","n":2}}}},"field":{QUADRATIC},"x":[0,0],"radii":{{"r0":-0.2}}}}"#),
    );
    let o = amvlab(t.path(), &["run", &cfg], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("radii.r0"), "{}", stderr(&o));
    assert!(!t.path().join("out").exists());
}

#[test]
fn unknown_keys_are_rejected() {
    let t = TempDir::new().unwrap();
    let cfg = write(
        t.path(),
        "typo.json",
        &format!(r#"{{"task":"point","space":{{"distance":{{"kind":"norm","n":2,"pp":2}}}},"field":{QUADRATIC},"x":[0,0],"r":0.1}}"#),
    );
    let o = amvlab(t.path(), &["run", &cfg], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("space.distance"), "{}", stderr(&o));
    let top = write(t.path(), "top.json", r#"{"task":"point","radius":0.1}"#);
    let o = amvlab(t.path(), &["run", &top], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("radius"), "{}", stderr(&o));
}

#[test]
fn batch_entries_inherit_and_override() {
    let t = TempDir::new().unwrap();
    let cfg = write(
        t.path(),
        "b.json",
        &format!(
            r#"{{"task":"point","space":{{"distance":{{"kind":"norm","n":2}}}},"field":{QUADRATIC},"x":[0,0],"r":0.1,
                "batch":[{{}},{{"operator":"samv"}},{{"name":"wide","r":0.5,"space":{{"distance":{{"kind":"norm","n":2,"p":"inf"}}}}}}]}}"#
        ),
    );
    let o = amvlab(t.path(), &["run", &cfg, "--out-dir", "out"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = t.path().join("out");
    let a = read_json(&out.join("b-000.json"));
    let s = read_json(&out.join("b-001.json"));
    let w = read_json(&out.join("wide.json"));
    assert_eq!(a["config"]["operator"], "amv");
    assert_eq!(s["config"]["operator"], "samv");
    // Lebesgue measure has no distortion, so SAMV equals AMV
    assert_eq!(a["estimate"]["value"], s["estimate"]["value"]);
    assert_eq!(w["r"], 0.5);
    let stdout = String::from_utf8(o.stdout).unwrap();
    let names: Vec<&str> = stdout.lines().map(|l| l.split(':').next().unwrap()).collect();
    assert_eq!(names, ["b-000", "b-001", "wide"]);

    let dup = write(t.path(), "dup.json", r#"{"task":"point","batch":[{"name":"a"},{"name":"a"}]}"#);
    let o = amvlab(t.path(), &["run", &dup], None);
    assert_eq!(o.status.code(), Some(2));
    let nested = write(t.path(), "bad.json", &format!(r#"{{"task":"point","field":{QUADRATIC},"x":[0,0],"batch":[{{"r":0.1,"space":{{"distance":{{"kind":"norm","n":3}}}}}}]}}"#));
    let o = amvlab(t.path(), &["run", &nested], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("batch[0]"), "{}", stderr(&o));
}

fn mixed_batch(dir: &Path) -> String {
    write(
        dir,
        "mixed.json",
        &format!(
            r#"{{"radii":{{"r0":0.2,"count":5}},"batch":[
              {{"task":"sweep","scheme":{{"kind":"mc","count":2000}},"space":{{"distance":{{"kind":"norm","n":2}},"weight":{{"kind":"exp_linear","a":[1,0]}}}},"field":{QUADRATIC},"x":[0.1,0]}},
              {{"task":"distortion","space":{{"distance":{{"kind":"norm","n":1}},"weight":{{"kind":"exp_linear","a":[1]}}}},"x":[0.3],"budget":32}},
              {{"task":"graph","graph":{{"source":{{"kind":"circle_spokes","n":3}},"points":[{{"kind":"vertex","index":0}},{{"kind":"edge","index":1,"t":0.1}}],"values":[0,1,2,3,4],"comparability":true}}}},
              {{"task":"moments","space":{{"distance":{{"kind":"norm","n":2}},"weight":{{"kind":"power_alpha","alpha":2}}}},"x":[0,0]}}
            ]}}"#
        ),
    )
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files.into_iter().map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())).collect()
}

#[test]
fn bundles_are_byte_identical_across_runs_and_thread_counts() {
    let t = TempDir::new().unwrap();
    let cfg = mixed_batch(t.path());
    let mut snaps = vec![];
    for (dir, threads) in [("a", Some("1")), ("b", Some("1")), ("c", Some("5")), ("d", None)] {
        let o = amvlab(t.path(), &["run", &cfg, "--seed", "42", "--out-dir", dir], threads);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        snaps.push(snapshot(&t.path().join(dir)));
    }
    assert!(snaps[0].len() >= 6);
    for s in &snaps[1..] {
        assert_eq!(s, &snaps[0]);
    }
    let o = amvlab(t.path(), &["run", &cfg, "--seed", "43", "--out-dir", "e"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_ne!(snapshot(&t.path().join("e")), snaps[0]);
}

#[test]
fn bad_thread_count_is_a_config_error() {
    let t = TempDir::new().unwrap();
    let cfg = mixed_batch(t.path());
    for bad in ["0", "many"] {
        let o = amvlab(t.path(), &["run", &cfg], Some(bad));
        assert_eq!(o.status.code(), Some(2));
        assert!(stderr(&o).contains("AMVLAB_THREADS"));
    }
}

#[test]
fn verify_without_verify_tasks_is_a_config_error() {
    let t = TempDir::new().unwrap();
    let cfg = mixed_batch(t.path());
    assert_eq!(amvlab(t.path(), &["verify", &cfg], None).status.code(), Some(2));
    assert_eq!(amvlab(t.path(), &["run", "missing.json"], None).status.code(), Some(2));
}

#[test]
fn runtime_failures_exit_three() {
    let t = TempDir::new().unwrap();
    // the exponential weight underflows far out on the line, so every radius fails
    let cfg = write(
        t.path(),
        "under.json",
        r#"{"task":"sweep","space":{"distance":{"kind":"norm","n":1},"weight":{"kind":"exp_linear","a":[1]}},"field":{"kind":"polynomial","n":1,"coefficients":[{"powers":[2],"coef":1}]},"x":[-800],"radii":{"r0":0.1,"count":4}}"#,
    );
    let o = amvlab(t.path(), &["run", &cfg], None);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn catalog_lists_presets() {
    let t = TempDir::new().unwrap();
    let o = amvlab(t.path(), &["catalog"], None);
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8(o.stdout).unwrap();
    for word in ["power_alpha", "circle_spokes", "alpha_warped", "three_point_line", "qmc"] {
        assert!(s.contains(word), "{word}");
    }
    assert_eq!(s, String::from_utf8(amvlab(t.path(), &["catalog"], None).stdout).unwrap());
}

#[test]
fn graph_bundle_round_trips_the_graph() {
    let t = TempDir::new().unwrap();
    let graph = r#"{"vertices":[{"id":0,"atom":1.0},{"id":1},{"id":2,"atom":0.1}],"edges":[{"u":0,"v":1,"len":0.30000000000000004},{"u":1,"v":2,"len":1e-3}],"rays":[{"v":2}]}"#;
    let cfg = write(
        t.path(),
        "g.json",
        &format!(r#"{{"task":"graph","radii":[0.5,0.25],"graph":{{"source":{{"kind":"inline","graph":{graph}}},"points":[{{"kind":"vertex","index":1}}],"values":[1,0,2]}}}}"#),
    );
    let o = amvlab(t.path(), &["run", &cfg, "--out-dir", "out"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let b = read_json(&t.path().join("out/g.json"));
    let spec: amvlab::graph::GraphSpec = serde_json::from_value(b["graph"].clone()).unwrap();
    assert_eq!(spec, serde_json::from_str(graph).unwrap());
    assert_eq!(b["graph"]["edges"][0]["len"].as_f64().unwrap().to_bits(), 0.30000000000000004f64.to_bits());
    assert_eq!(b["rows"].as_array().unwrap().len(), 2);
}
