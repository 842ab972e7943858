//! Runs every example binary and checks its exit status.

use std::path::PathBuf;
use std::process::Command;

const EXAMPLES: [&str; 8] = [
    "exact_numbers",
    "polynomial_identity",
    "orthogonal_polys",
    "verify_theorem",
    "remarks",
    "golden_ratio",
    "monte_carlo",
    "grid_report",
];

/// `target/<profile>/examples/<name>`, next to this test's own `deps` dir.
fn built(name: &str) -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let p = exe.parent()?.parent()?.join("examples").join(format!("{name}{}", std::env::consts::EXE_SUFFIX));
    p.exists().then_some(p)
}

fn run(name: &str) -> std::process::Output {
    match built(name) {
        Some(p) => Command::new(p).output().unwrap(),
        None => Command::new(env!("CARGO"))
            .args(["run", "--quiet", "--example", name])
            .current_dir(env!("CARGO_MANIFEST_DIR"))
            .output()
            .unwrap(),
    }
}

#[test]
fn every_example_runs() {
    for name in EXAMPLES {
        let out = run(name);
        assert!(
            out.status.success(),
            "{name} failed:\n{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stdout.is_empty(), "{name} printed nothing");
    }
}

#[test]
fn examples_directory_matches_the_list() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples");
    let mut found: Vec<String> = std::fs::read_dir(dir)
        .unwrap()
        .filter_map(|e| e.ok()?.path().file_stem()?.to_str().map(String::from))
        .collect();
    found.sort();
    let mut want: Vec<String> = EXAMPLES.iter().map(|s| s.to_string()).collect();
    want.sort();
    assert_eq!(found, want);
}
