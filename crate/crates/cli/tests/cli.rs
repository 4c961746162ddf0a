//! End-to-end checks of the batch front end: artifact round trips, stamped
//! outputs, and the documented exit codes.

use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ccpoly")).args(args).output().expect("binary runs")
}

fn tempdir(tag: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("ccpoly-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

#[test]
fn generate_writes_stamped_system_and_bounds() {
    let out = tempdir("generate");
    let status = run(&[
        "generate",
        "--n",
        "2",
        "--k",
        "4",
        "--scheme",
        "ccsd",
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());

    let system = read(&out.join("system.json"));
    let doc: serde_json::Value = serde_json::from_str(&system).unwrap();
    assert!(doc["version"].is_string());
    assert!(doc["config_hash"].is_string());
    assert_eq!(doc["seed"], 7);
    let payload = &doc["payload"];
    assert_eq!(payload["equations"].as_array().unwrap().len(), 5);

    let bounds = read(&out.join("bounds.csv"));
    assert!(bounds.contains("# seed=7"));
    assert!(bounds.contains("naive,refined,quadratic"));
    assert!(bounds.contains("1.024"));
    assert!(bounds.contains("3.24"));
    assert!(bounds.contains("6.4"));
}

#[test]
fn generated_system_round_trips() {
    use ccpoly::poly::PolynomialSystem;
    let out = tempdir("roundtrip");
    let status =
        run(&["generate", "--n", "2", "--k", "4", "--seed", "5", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&read(&out.join("system.json"))).unwrap();
    let parsed = PolynomialSystem::from_json(&doc["payload"].to_string()).unwrap();
    assert_eq!(parsed.nvars(), 5);
    assert_eq!(parsed.equations.len(), 5);
    // Term sets survive the round trip: re-serialize and compare.
    let again = PolynomialSystem::from_json(&parsed.to_json()).unwrap();
    for (a, b) in parsed.equations.iter().zip(&again.equations) {
        assert_eq!(a.support(), b.support());
    }
}

#[test]
fn solve_reports_six_classified_roots() {
    let out = tempdir("solve");
    let status =
        run(&["solve", "--n", "2", "--k", "4", "--seed", "3", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    let roots = read(&out.join("roots.csv"));
    let rows: Vec<&str> =
        roots.lines().filter(|l| !l.starts_with('#') && !l.starts_with("root")).collect();
    assert_eq!(rows.len(), 6);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["generate", "--n", "5", "--k", "4"]).status.code(), Some(1));
    assert_eq!(run(&["generate", "--scheme", "cepa"]).status.code(), Some(1));
    let bogus = run(&["experiment", "bogus"]);
    assert_eq!(bogus.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&bogus.stderr);
    assert!(stderr.contains("ccs-trajectory"));
    assert!(stderr.contains("newton-perturb"));
    assert!(stderr.contains("homotopy-census"));
}

#[test]
fn large_sector_polytope_emits_surrogates_and_skips_mixed_volume() {
    let out = tempdir("polytope36");
    let result =
        run(&["polytope", "--n", "3", "--k", "6", "--seed", "1", "--out", out.to_str().unwrap()]);
    assert!(result.status.success());
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.contains("mixed volume skipped"));
    let doc: serde_json::Value =
        serde_json::from_str(&read(&out.join("surrogates.json"))).unwrap();
    assert!(!doc["payload"]["singles_generators"].as_array().unwrap().is_empty());
    assert!(!doc["payload"]["doubles_generators"].as_array().unwrap().is_empty());
}

#[test]
fn identical_seeds_give_identical_reports() {
    let a = tempdir("det-a");
    let b = tempdir("det-b");
    for out in [&a, &b] {
        let status =
            run(&["solve", "--n", "2", "--k", "4", "--seed", "9", "--out", out.to_str().unwrap()]);
        assert!(status.status.success());
    }
    assert_eq!(read(&a.join("roots.csv")), read(&b.join("roots.csv")));
    assert_eq!(read(&a.join("roots.json")), read(&b.join("roots.json")));
}

#[test]
fn matrix_file_input_is_honored() {
    let out = tempdir("matrix");
    std::fs::create_dir_all(&out).unwrap();
    let d = 6;
    let mut entries = vec![0.0f64; d * d];
    for i in 0..d {
        entries[i * d + i] = (i + 1) as f64;
    }
    let file = serde_json::json!({"K": 4, "N": 2, "entries": entries});
    let path = out.join("h.json");
    std::fs::write(&path, file.to_string()).unwrap();
    let status = run(&[
        "generate",
        "--n",
        "2",
        "--k",
        "4",
        "--hamiltonian",
        path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    // Mismatched sector is a usage error.
    let bad = run(&["generate", "--n", "3", "--k", "6", "--hamiltonian", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
}
