use std::process::Command;

fn potts() -> Command {
    Command::new(env!("CARGO_BIN_EXE_potts"))
}

#[test]
fn criterion_12_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let status = potts()
            .args([
                "verify", "--N", "3", "--L", "3", "--kprime", "0.3", "--samples", "5", "--seed",
                "42", "--out",
            ])
            .arg(path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, bytes_b, "reports differ between identical runs");
    println!("acceptance 12 determinism: PASS ({} bytes, identical)", bytes_a.len());
}

#[test]
fn verify_exits_zero_and_matches_patterns() {
    let out = potts()
        .args([
            "verify", "--N", "3", "--L", "3", "--kprime", "0.3", "--samples", "2", "--seed", "7",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // 4 patterns per sample, 2 samples
    assert_eq!(report["spectrum"].as_array().unwrap().len(), 8);
    assert_eq!(report["drinfeld"]["lambda"], serde_json::json!([1, 7, 1]));
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] != "fail"));
    // top-level key order as serialized
    let raw = String::from_utf8_lossy(&out.stdout);
    let positions: Vec<usize> = [
        "\"config\"",
        "\"drinfeld\"",
        "\"checks\"",
        "\"spectrum\"",
        "\"timing\"",
        "\"version\"",
        "\"seed\"",
    ]
    .iter()
    .map(|k| raw.find(k).unwrap_or_else(|| panic!("missing key {k}")))
    .collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{positions:?}");
}

#[test]
fn drinfeld_prints_lambda() {
    let out = potts()
        .args(["drinfeld", "--N", "3", "--L", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("Lambda = [1, 7, 1]"), "{stdout}");
}

#[test]
fn invalid_shape_exits_two() {
    let out = potts()
        .args(["verify", "--N", "3", "--L", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_coupling_exits_two() {
    let out = potts()
        .args(["verify", "--N", "3", "--L", "3", "--kprime", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_csv_format() {
    let out = potts()
        .args([
            "spectrum", "--N", "4", "--L", "4", "--kprime", "0.5", "--seed", "7", "--samples",
            "1", "--format", "csv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let mut lines = stdout.lines();
    assert!(lines.next().unwrap().starts_with("sample,lambda_q_re"));
    // 8 patterns at r = 3
    assert_eq!(stdout.lines().count(), 1 + 8);
}

#[test]
fn elements_q1_runs_vanishing_checks() {
    let out = potts()
        .args([
            "elements", "--N", "3", "--L", "6", "--Q", "1", "--samples", "1", "--seed", "3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert!(checks
        .iter()
        .any(|c| c["name"] == "charged_entry_vanishing" && c["status"] == "pass"));
}

#[test]
fn dumps_write_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let mat = dir.path().join("t.csv");
    let vecs = dir.path().join("vectors.csv");
    let status = potts()
        .args([
            "spectrum", "--N", "3", "--L", "3", "--samples", "1", "--dump-matrix",
        ])
        .arg(&mat)
        .arg("--dump-vectors")
        .arg(&vecs)
        .arg("--out")
        .arg(dir.path().join("r.json"))
        .status()
        .unwrap();
    assert!(status.success());
    let matrix = std::fs::read_to_string(&mat).unwrap();
    assert!(matrix.starts_with("row,col,re,im"));
    assert_eq!(matrix.lines().count(), 1 + 81); // 9x9 entries
    let header = std::fs::read_to_string(mat.with_extension("header")).unwrap();
    assert!(header.contains("N=3 L=3"));
    assert!(header.contains("ordering=lexicographic"));
    let vectors = std::fs::read_to_string(&vecs).unwrap();
    assert_eq!(vectors.matches("# pattern=").count(), 4);
    assert!(vectors.contains("\"000\""));
}
