//! End-to-end tests of the `swr` binary: command output files, determinism,
//! and the registry flag.

use std::path::Path;
use std::process::{Command, Output};
use swr_cli::registry::{builtin_registry, registry_to_json};

fn swr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swr"))
        .args(args)
        .env_remove("RUST_BACKTRACE")
        .output()
        .expect("running the swr binary")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&read(path)).expect("valid JSON")
}

#[test]
fn optimize_case1_reports_the_reference_root() {
    let dir = tempfile::tempdir().unwrap();
    let out = swr(&["optimize", "--case", "1", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&dir.path().join("optimize.json"));
    assert_eq!(doc["case"], 1);
    let alpha = doc["roots"][0]["alpha"].as_f64().unwrap();
    assert!((alpha - 1.76848).abs() < 1e-3, "alpha {alpha}");
    let manifest = json(&dir.path().join("manifest.json"));
    assert_eq!(manifest["command"], "optimize");
    assert_eq!(manifest["resolved"]["T"], 5.0);
}

#[test]
fn robin2_surface_is_identically_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = swr(&[
        "surface", "--case", "2", "--kind", "robin2", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = read(&dir.path().join("surface.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("omega,sigma,abs_rho"));
    let mut rows = 0;
    for line in lines {
        assert!(line.ends_with(",1"), "unexpected row {line}");
        rows += 1;
    }
    assert_eq!(rows, 201 * 51);
}

#[test]
fn compare_shows_the_optimized_speedup() {
    let dir = tempfile::tempdir().unwrap();
    let out = swr(&["compare", "--case", "1", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    for file in ["trace_dirichlet.csv", "trace_optimized.csv", "compare.csv", "manifest.json"] {
        assert!(dir.path().join(file).exists(), "missing {file}");
    }
    let doc = json(&dir.path().join("compare.json"));
    let dirichlet = doc["dirichlet_iterations"].as_u64().unwrap();
    let optimized = doc["optimized_iterations"].as_u64().unwrap();
    assert!(optimized < dirichlet, "optimized {optimized} vs dirichlet {dirichlet}");
}

#[test]
fn solve_writes_trace_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let out = swr(&[
        "solve", "--case", "2", "--kind", "dirichlet", "--tol", "1e-5", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let trace = read(&dir.path().join("trace.csv"));
    assert!(trace.starts_with("iteration,residual,error_vs_reference\n"));
    assert!(trace.lines().count() > 10);
    // Every row parses back through the documented schema.
    for (index, line) in trace.lines().skip(1).enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3, "row {line}");
        assert_eq!(fields[0].parse::<usize>().unwrap(), index + 1);
        assert!(fields[1].parse::<f64>().unwrap() >= 0.0);
        assert!(fields[2].parse::<f64>().unwrap() >= 0.0);
    }
    let snapshots = read(&dir.path().join("snapshots.csv"));
    assert!(snapshots.starts_with("x,t,value,subdomain,iteration_tag\n"));
    for tag in ["iter1", "iter10", "final", "converged"] {
        assert!(snapshots.contains(tag), "snapshots missing tag {tag}");
    }
    let manifest = json(&dir.path().join("manifest.json"));
    assert_eq!(manifest["overrides"]["tol"], 1e-5);
    assert_eq!(manifest["resolved"]["tolerance"], 1e-5);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let args =
        ["surface", "--case", "1", "--kind", "combined3", "--out", path];
    assert!(swr(&args).status.success());
    let first_surface = read(&dir.path().join("surface.csv"));
    let first_manifest = read(&dir.path().join("manifest.json"));
    assert!(swr(&args).status.success());
    assert_eq!(first_surface, read(&dir.path().join("surface.csv")));
    assert_eq!(first_manifest, read(&dir.path().join("manifest.json")));
}

#[test]
fn registry_file_matches_the_builtin_cases() {
    let dir = tempfile::tempdir().unwrap();
    let registry_path = dir.path().join("cases.json");
    std::fs::write(&registry_path, registry_to_json(&builtin_registry()).unwrap()).unwrap();

    let builtin_dir = dir.path().join("builtin");
    let custom_dir = dir.path().join("custom");
    assert!(swr(&["optimize", "--case", "2", "--out", builtin_dir.to_str().unwrap()])
        .status
        .success());
    assert!(swr(&[
        "optimize", "--case", "2", "--registry", registry_path.to_str().unwrap(), "--out",
        custom_dir.to_str().unwrap(),
    ])
    .status
    .success());
    assert_eq!(
        read(&builtin_dir.join("optimize.json")),
        read(&custom_dir.join("optimize.json"))
    );
}

#[test]
fn unknown_case_fails_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let out = swr(&["optimize", "--case", "42", "--out", dir.path().to_str().unwrap()]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("case"), "stderr: {stderr}");
}

#[test]
fn misaligned_dx_override_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = swr(&[
        "solve", "--case", "1", "--kind", "dirichlet", "--dx", "0.04", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("dx"), "stderr: {stderr}");
}

#[test]
fn alpha_on_plain_kind_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = swr(&[
        "solve", "--case", "1", "--kind", "dirichlet", "--alpha", "1.0", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());
}

#[test]
fn horizon_override_moves_the_band() {
    let dir = tempfile::tempdir().unwrap();
    let out = swr(&[
        "optimize", "--case", "1", "--T", "2.5", "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&dir.path().join("optimize.json"));
    let omega_min = doc["omega_min"].as_f64().unwrap();
    assert!((omega_min - std::f64::consts::PI / 2.5).abs() < 1e-12);
}
