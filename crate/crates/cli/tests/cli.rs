//! End-to-end checks of the command-line surface: exit codes, file formats,
//! and byte-level reproducibility.

use std::path::Path;
use std::process::Command;

fn hypersim(args: &[&str], dir: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hypersim"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn gen_writes_header_and_meta() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypersim(
        &["gen", "--kind", "uniform", "--n", "10", "--r", "3", "--p", "0.5", "--seed", "1", "--out", "h.txt"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("h.txt")).unwrap();
    assert!(text.starts_with("10 "));
    assert!(text.contains("# generator: uniform n=10 r=3 p=0.5 seed=1"));
}

#[test]
fn gen_full_density_has_all_edges() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypersim(
        &["gen", "--kind", "uniform", "--n", "6", "--r", "2", "--p", "1", "--seed", "9"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("6 15\n"), "C(6,2) = 15 edges: {text}");
}

#[test]
fn gen_sparse_within_size_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypersim(
        &["gen", "--kind", "sparse", "--n", "256", "--eps", "0.5", "--seed", "2"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let total: usize = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split_whitespace().count())
        .sum();
    // r (n')^r + n' + n with r = 4, n' = 4
    assert!(total <= 4 * 256 + 4 + 256, "total membership {total}");
}

#[test]
fn run_then_verify_bounded_degree_on_triangle() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("tri.txt"), "3 3\n0 1\n1 2\n0 2\n").unwrap();
    let out = hypersim(
        &["run", "--algorithm", "bounded-degree", "--in", "tri.txt", "--out", "l.txt"],
        dir.path(),
    );
    assert!(out.status.success());
    let listing = std::fs::read_to_string(dir.path().join("l.txt")).unwrap();
    assert_eq!(listing.lines().count(), 1, "one listed triangle: {listing}");
    let out = hypersim(
        &["verify", "--algorithm", "bounded-degree", "--in", "tri.txt", "--listing", "l.txt"],
        dir.path(),
    );
    assert!(out.status.success());
}

#[test]
fn illegal_model_pairing_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypersim(
        &["run", "--algorithm", "clique", "--model", "EB", "--kind", "uniform", "--n", "6", "--r", "2", "--p", "0.5", "--seed", "0"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn round_budget_exhaustion_is_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypersim(
        &[
            "run", "--algorithm", "density", "--kind", "uniform", "--n", "8", "--r", "3",
            "--p", "0.8", "--seed", "0", "--max-rounds", "2",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn mutated_listing_fails_verification_with_the_duplicate_named() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("tri.txt"), "3 3\n0 1\n1 2\n0 2\n").unwrap();
    hypersim(
        &["run", "--algorithm", "density", "--in", "tri.txt", "--out", "l.txt"],
        dir.path(),
    );
    let mut listing = std::fs::read_to_string(dir.path().join("l.txt")).unwrap();
    let first = listing.lines().next().unwrap().to_string();
    listing.push_str(&first);
    listing.push('\n');
    std::fs::write(dir.path().join("bad.txt"), listing).unwrap();
    let out = hypersim(
        &["verify", "--algorithm", "density", "--in", "tri.txt", "--listing", "bad.txt"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(4));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("duplicate"), "{err}");
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "run", "--algorithm", "density", "--kind", "uniform", "--n", "10", "--r", "3",
        "--p", "0.5", "--seed", "5", "--out", "OUT", "--metrics-out", "MET",
    ];
    for (listing, metrics) in [("a.txt", "am.csv"), ("b.txt", "bm.csv")] {
        let mut a: Vec<&str> = args.to_vec();
        a[14] = listing;
        a[16] = metrics;
        let out = hypersim(&a, dir.path());
        assert!(out.status.success(), "{:?}", String::from_utf8(out.stderr));
    }
    let a = std::fs::read(dir.path().join("a.txt")).unwrap();
    let b = std::fs::read(dir.path().join("b.txt")).unwrap();
    assert_eq!(a, b, "listing files differ between reruns");
    let am = std::fs::read(dir.path().join("am.csv")).unwrap();
    let bm = std::fs::read(dir.path().join("bm.csv")).unwrap();
    assert_eq!(am, bm, "metrics rows differ between reruns");
}

#[test]
fn sweep_single_cell_reduces_to_run_plus_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypersim(
        &[
            "sweep", "--algorithms", "density", "--n-list", "8", "--r-list", "2",
            "--p", "0.5", "--seeds", "1", "--out", "s.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 1);
    let fields: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(fields[0], "density");
    assert_eq!(fields[16], "1", "verified column set: {}", rows[0]);
}

#[test]
fn bounds_from_file_and_peel_report() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("tri.txt"), "3 3\n0 1\n1 2\n0 2\n").unwrap();
    let out = hypersim(&["bounds", "--in", "tri.txt"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("3,2,3,1,1,6,6,1,1,1"), "{text}");

    let out = hypersim(
        &["run", "--algorithm", "peel", "--alpha", "3/2", "--in", "tri.txt"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // every vertex has degree 2 <= 2 * 3/2: all peel in round 1
    for v in 0..3 {
        assert!(text.contains(&format!("{v} 1 inactive")), "{text}");
    }
}
