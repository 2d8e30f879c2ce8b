//! End-to-end checks of the command-line interface: exit codes, CSV schema,
//! config handling.

use std::process::Command;

fn kml() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kml"))
}

#[test]
fn theory_table_csv_schema_and_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("table");
    let out = kml()
        .args(["theory-table", "--N", "1", "--p", "3", "--a", "1", "--b", "1"])
        .args(["--c-geom", "1:64:7", "--output"])
        .arg(&base)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(base.with_extension("csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# kml-csv v1 experiment=theory_table"));
    assert_eq!(lines.next(), Some("c,m_c,i0,mu_c,at_threshold"));
    assert_eq!(lines.count(), 7, "7-point sweep produces 7 rows");

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(base.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(json["passed"], serde_json::Value::Bool(true));
}

#[test]
fn usage_errors_exit_two() {
    let out = kml().args(["theory-table", "--p", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "missing --N must exit 2");

    let out = kml().args(["no-such-command"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // regime errors from a valid config are runtime failures, not usage
    let out = kml()
        .args(["blowup", "--N", "1", "--p", "3", "--c", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.json");
    std::fs::write(
        &cfg_path,
        r#"{
            "experiment": "theory-table",
            "params": {"a": 1.0, "b": 1.0, "p": 3.0, "N": 1},
            "c": [1.0, 2.0]
        }"#,
    )
    .unwrap();
    let base = dir.path().join("out");
    let out = kml()
        .arg("theory-table")
        .arg("--config")
        .arg(&cfg_path)
        .args(["--c", "1,2,4", "--output"])
        .arg(&base)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(base.with_extension("csv")).unwrap();
    assert_eq!(csv.lines().count(), 5, "comment + header + 3 rows after override");

    // subcommand/config experiment mismatch is a usage error
    let out = kml().arg("minimize").arg("--config").arg(&cfg_path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_fast_passes_and_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = kml()
        .args(["verify", "--N", "1", "--p", "3", "--count", "40", "--cache-dir"])
        .arg(&cache)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "verify failed:\n{}\n{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );

    // corrupt the cached profile; verify must now fail with a nonzero exit
    let entry = std::fs::read_dir(&cache).unwrap().next().unwrap().unwrap().path();
    let text = std::fs::read_to_string(&entry).unwrap();
    std::fs::write(&entry, text.replace("checksum=", "checksum=ff")).unwrap();
    let out = kml()
        .args(["verify", "--N", "1", "--p", "3", "--count", "40", "--cache-dir"])
        .arg(&cache)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "tampered cache must fail verify");
}

#[test]
fn gn_check_is_deterministic_under_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for base in [&a, &b] {
        let out = kml()
            .args(["gn-check", "--N", "1", "--p", "3", "--count", "25", "--seed", "7", "--output"])
            .arg(base)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let csv_a = std::fs::read(a.with_extension("csv")).unwrap();
    let csv_b = std::fs::read(b.with_extension("csv")).unwrap();
    assert_eq!(csv_a, csv_b, "seeded runs must be byte-identical");
}

#[test]
fn ground_state_uses_cache_on_second_run() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let base = dir.path().join("gs");
    for _ in 0..2 {
        let out = kml()
            .args(["ground-state", "--N", "1", "--p", "3", "--cache-dir"])
            .arg(&cache)
            .arg("--output")
            .arg(&base)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
}
