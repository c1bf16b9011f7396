//! End-to-end tests of the binary: spawn it the way a user would.

use std::process::{Command, Output};

fn repdens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repdens"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn density_gl3_m2() {
    let out = repdens(&["density", "--algebra", "gl:3", "--m", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("3/8"), "{}", stdout(&out));
}

#[test]
fn density_gl2_m7() {
    let out = repdens(&["density", "--algebra", "gl:2", "--m", "7"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("6/7"));
}

#[test]
fn density_gl1_m5_is_one() {
    let out = repdens(&["density", "--algebra", "gl:1", "--m", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("m=5: 1 "));
}

#[test]
fn parse_error_exits_nonzero() {
    let out = repdens(&["density", "--algebra", "so:4", "--m", "2"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn budget_error_exits_nonzero() {
    let out = repdens(&[
        "density",
        "--algebra",
        "gl:5",
        "--m",
        "2",
        "--budget-points",
        "10",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn table_matches_published_fractions() {
    let out = repdens(&["table", "--nmax", "4", "--m", "2,3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("| 2 | 1 | 1/2 | 3/8 | 3/32 |"), "{text}");
    assert!(text.contains("| 3 | 1 | 2/3 | 2/9 | 8/27 |"), "{text}");
}

#[test]
fn table_is_deterministic_across_runs_and_workers() {
    let a = repdens(&["table", "--nmax", "5", "--m", "2,3", "--format", "csv"]);
    let b = repdens(&["table", "--nmax", "5", "--m", "2,3", "--format", "csv"]);
    let c = repdens(&[
        "table", "--nmax", "5", "--m", "2,3", "--format", "csv", "--workers", "1",
    ]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b), "same invocation must be byte-identical");
    assert_eq!(stdout(&a), stdout(&c), "worker count must not change output");
    assert!(stdout(&a).starts_with("family,rank,m,numerator,denominator,decimal\n"));
}

#[test]
fn empty_moduli_yields_header_only_table() {
    let out = repdens(&["table", "--nmax", "3", "--m", "", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "family,rank,m,numerator,denominator,decimal\n");
}

#[test]
fn json_output_roundtrips_through_cache_records() {
    let out = repdens(&[
        "table", "--nmax", "3", "--m", "2", "--format", "json",
    ]);
    assert!(out.status.success());
    let records: Vec<repdens::engine::CacheRecord> =
        serde_json::from_str(&stdout(&out)).expect("valid cache records");
    assert_eq!(records.len(), 3);
    assert_eq!(records[2].variant, "gl3");
    assert_eq!(records[2].numerator, "3");
    assert_eq!(records[2].denominator, "8");
    // and a density query in json emits the same record shape
    let out = repdens(&["density", "--algebra", "gl:3", "--m", "2", "--format", "json"]);
    let records: Vec<repdens::engine::CacheRecord> =
        serde_json::from_str(&stdout(&out)).expect("valid cache records");
    assert_eq!(records[0].variant, "gl3");
    assert_eq!(records[0].denominator, "8");
}

#[test]
fn verify_fray_passes() {
    let out = repdens(&["verify", "fray"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("suite fray: PASS"));
}

#[test]
fn verify_counterexample_radius_flag() {
    let out = repdens(&["verify", "counterexample", "--r", "500"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("suite counterexample: PASS"), "{text}");
}

#[test]
fn verify_unknown_suite_fails() {
    let out = repdens(&["verify", "nonsense"]);
    assert!(!out.status.success());
}

#[test]
fn bounds_gl8_m2() {
    let out = repdens(&["bounds", "--algebra", "gl:8", "--m", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("315/131072"), "{text}");
    assert!(text.contains("satisfied:     yes"), "{text}");
}

#[test]
fn bounds_m1_vacuous() {
    let out = repdens(&["bounds", "--algebra", "gl:3", "--m", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("exact density: 0"));
}

#[test]
fn cache_dir_round_trip() {
    let dir = std::env::temp_dir().join(format!("repdens-cli-cache-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let d = dir.to_str().unwrap();
    let a = repdens(&["density", "--algebra", "gl:4", "--m", "6", "--cache-dir", d]);
    assert!(a.status.success());
    let cache_path = dir.join("densities.jsonl");
    let cache_text = std::fs::read_to_string(&cache_path).unwrap();
    assert!(cache_text.contains("\"variant\":\"gl4\""), "{cache_text}");
    let b = repdens(&["density", "--algebra", "gl:4", "--m", "6", "--cache-dir", d]);
    assert!(b.status.success());
    // second run is served from the cache: same value, no per-prime lines
    assert!(stdout(&a).contains("q="));
    assert!(!stdout(&b).contains("q="));
    assert!(stdout(&b).contains("m=6"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cache_env_var_is_honored() {
    let dir = std::env::temp_dir().join(format!("repdens-env-cache-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let out = Command::new(env!("CARGO_BIN_EXE_repdens"))
        .args(["density", "--algebra", "gl:2", "--m", "9"])
        .env("REPDENS_CACHE_DIR", &dir)
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let cache = std::fs::read_to_string(dir.join("densities.jsonl")).unwrap();
    assert!(cache.contains("\"variant\":\"gl2\""), "{cache}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn selfdual_and_group_variants_run() {
    let out = repdens(&["density", "--algebra", "sd:sl:4", "--m", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("1/4"));

    let out = repdens(&["density", "--algebra", "group:pgl:2", "--m", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("m=2: 1 "));

    let out = repdens(&["density", "--algebra", "orth:sl:2", "--m", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("m=2: 1 "));
}
