use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadfourier"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("quadfourier-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn verify_passes_and_reports_summary() {
    let out = run(&["--p", "3", "--n", "2", "verify", "--lemma", "gauss,shrink", "--trials", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["summary"]["records"], 8);
    assert_eq!(v["suites"].as_array().unwrap().len(), 2);
}

#[test]
fn exhaustive_gauss_covers_every_form() {
    let out = run(&["--p", "2", "--n", "2", "verify", "--lemma", "gauss", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["suites"][0]["exhaustive"], true);
}

#[test]
fn unknown_lemma_is_a_usage_error() {
    let out = run(&["verify", "--lemma", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
}

#[test]
fn csv_goes_to_out_file() {
    let dir = scratch("csv");
    let path = dir.join("count.csv");
    let out = run(&[
        "--p", "5", "--n", "2", "--format", "csv", "--out", path.to_str().unwrap(),
        "count", "--system", "3ap", "--set", "full",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "system,set,p,n,density,u2,u3,average,expected,deviation");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    // every configuration lies in the full space
    assert_eq!(row[7].parse::<f64>().unwrap(), 1.0);
    fs::remove_dir_all(dir).ok();
}

#[test]
fn system_catalog_file() {
    let dir = scratch("catalog");
    let path = dir.join("systems.json");
    fs::write(
        &path,
        r#"[{"name": "pair", "p": 3, "coeffs": [[1, 0], [0, 1]]},
            {"name": "ap3", "p": 3, "coeffs": [[1, 0], [1, 1], [1, 2]], "declared_cs_complexity": 1}]"#,
    )
    .unwrap();
    let spec = format!("file:{}", path.display());
    let out = run(&["--p", "3", "--n", "1", "count", "--system", &spec, "--set", "random:0.5", "--trials", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    // two independent variables: the average is density squared
    let density = rows[0]["density"].as_f64().unwrap();
    assert!((rows[0]["average"].as_f64().unwrap() - density * density).abs() < 1e-12);
    fs::remove_dir_all(dir).ok();
}

#[test]
fn catalog_complexity_mismatch_is_rejected() {
    let dir = scratch("mismatch");
    let path = dir.join("systems.json");
    fs::write(&path, r#"[{"name": "ap4", "p": 5, "coeffs": [[1, 0], [1, 1], [1, 2], [1, 3]], "declared_cs_complexity": 1}]"#).unwrap();
    let spec = format!("file:{}", path.display());
    let out = run(&["--p", "5", "--n", "1", "count", "--system", &spec]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ap4"));
    fs::remove_dir_all(dir).ok();
}

#[test]
fn decompose_recovers_a_phase() {
    let dir = scratch("decompose");
    let path = dir.join("f.json");
    // omega^{x0^2} on F_3^2
    let w = std::f64::consts::TAU / 3.0;
    let (mut re, mut im) = (Vec::new(), Vec::new());
    for i in 0..9 {
        let x0 = (i % 3) as f64;
        let k = (x0 * x0) % 3.0;
        re.push((w * k).cos());
        im.push((w * k).sin());
    }
    fs::write(&path, serde_json::json!({"p": 3, "n": 2, "re": re, "im": im}).to_string()).unwrap();
    let out = run(&["--p", "3", "--n", "2", "decompose", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let atoms = v["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 1);
    assert!((atoms[0]["lambda"][0].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(atoms[0]["rank"], 1);
    assert_eq!(v["verified"]["pass"], true);
    fs::remove_dir_all(dir).ok();
}

#[test]
fn decompose_rejects_a_malformed_table() {
    let dir = scratch("malformed");
    let path = dir.join("bad.json");
    fs::write(&path, r#"{"p": 3, "n": 2, "re": [1.0], "im": [0.0]}"#).unwrap();
    let out = run(&["decompose", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    fs::remove_dir_all(dir).ok();
}

#[test]
fn impbound_with_zero_dimension_is_empty() {
    let out = run(&["--p", "5", "--n", "0", "--format", "csv", "experiment-impbound"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 1);
}
