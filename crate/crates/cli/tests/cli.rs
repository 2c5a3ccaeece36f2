//! End-to-end behaviour of the `slabcy` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn slabcy(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slabcy"))
        .args(args)
        .env("SLABCY_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

#[test]
fn info_reports_fan() {
    let cache = tempfile::tempdir().unwrap();
    let o = slabcy(
        &["info", "--format", "json", &path("kp2.txt")],
        cache.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["m"], 4);
    assert_eq!(v["curve_basis"], serde_json::json!([[1, 1, -3, 1]]));
    assert_eq!(v["pairing"], serde_json::json!([[1], [1], [-3], [1]]));
    assert_eq!(v["walls"], serde_json::json!([[1], [1], [1]]));
    assert_eq!(v["grading"], serde_json::json!([1]));
}

#[test]
fn g_and_mirror_map_text() {
    let cache = tempfile::tempdir().unwrap();
    let o = slabcy(
        &["g", "--j", "2", "--order", "4", &path("kp1.txt")],
        cache.path(),
    );
    assert_eq!(
        stdout(&o),
        "g_2 = Q + 3/2*Q^2 + 10/3*Q^3 + 35/4*Q^4\n1/1 q^[1]\n3/2 q^[2]\n10/3 q^[3]\n35/4 q^[4]\n"
    );
    let o = slabcy(
        &["mirror-map", "--inverse", "--order", "4", &path("kp1.txt")],
        cache.path(),
    );
    assert!(stdout(&o).starts_with("Q = q - 2*q^2 + 3*q^3 - 4*q^4\n"));
    let o = slabcy(
        &["mirror-map", "--order", "3", &path("kp2.txt")],
        cache.path(),
    );
    assert!(stdout(&o).starts_with("q = Q - 6*Q^2 + 63*Q^3\n"));
}

#[test]
fn slab_display_and_methods() {
    let cache = tempfile::tempdir().unwrap();
    for method in ["gs", "omt"] {
        let o = slabcy(
            &[
                "slab",
                "--j",
                "3",
                "--method",
                method,
                "--order",
                "3",
                &path("kp2.txt"),
            ],
            cache.path(),
        );
        assert_eq!(o.status.code(), Some(0));
        let first = stdout(&o).lines().next().unwrap().to_string();
        assert_eq!(
            first,
            format!("[{method}] f_3 = (1 - 2*q + 5*q^2 - 32*q^3) + x + y + q*x^-1*y^-1")
        );
    }
    let o = slabcy(
        &["slab", "--j", "2", "--order", "4", &path("kp1.txt")],
        cache.path(),
    );
    assert!(stdout(&o).ends_with("diff: none\n"));
}

#[test]
fn verify_exit_codes() {
    let cache = tempfile::tempdir().unwrap();
    for name in ["square.txt", "a2_chain.txt", "f0.txt"] {
        let o = slabcy(&["verify", "--order", "4", &path(name)], cache.path());
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(stdout(&o).contains("checks passed"));
    }
    let o = slabcy(
        &[
            "verify",
            "--order",
            "3",
            "--format",
            "json",
            &path("kp1.txt"),
        ],
        cache.path(),
    );
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn input_errors_exit_2() {
    let cache = tempfile::tempdir().unwrap();
    let o = slabcy(&["info", &path("nonunimodular.txt")], cache.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not unimodular"));

    let o = slabcy(&["ogw", "--i", "5", &path("kp2.txt")], cache.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("out of range 1..=4"));

    let o = slabcy(
        &["info", "--grading", "1,1", &path("a2_chain.txt")],
        cache.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("wall class"));

    let o = slabcy(&["info", &path("missing.txt")], cache.path());
    assert_eq!(o.status.code(), Some(2));

    let o = slabcy(
        &["ogw", "--i", "1", "--order", "0", &path("kp2.txt")],
        cache.path(),
    );
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "dim = 1\npoints = [[0],[1]\n").unwrap();
    let o = slabcy(&["info", bad.to_str().unwrap()], cache.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn grading_override_and_default() {
    let cache = tempfile::tempdir().unwrap();
    let o = slabcy(
        &["info", "--format", "json", &path("a2_chain.txt")],
        cache.path(),
    );
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["grading"], serde_json::json!([1, 3]));
    let o = slabcy(
        &[
            "info",
            "--format",
            "json",
            "--grading",
            "2,5",
            &path("a2_chain.txt"),
        ],
        cache.path(),
    );
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["grading"], serde_json::json!([2, 5]));
}

#[test]
fn cache_hits_are_byte_identical() {
    let cache = tempfile::tempdir().unwrap();
    let args = ["ogw", "--i", "3", "--order", "5", &path("kp2.txt")];
    let cold = slabcy(&args, cache.path());
    let entries = std::fs::read_dir(cache.path()).unwrap().count();
    assert_eq!(entries, 1);
    let warm = slabcy(&args, cache.path());
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.status.code(), warm.status.code());

    let mut nocache = args.to_vec();
    nocache.push("--no-cache");
    let fresh = slabcy(&nocache, cache.path());
    assert_eq!(fresh.stdout, cold.stdout);

    // a different order is a different key
    slabcy(
        &["ogw", "--i", "3", "--order", "4", &path("kp2.txt")],
        cache.path(),
    );
    assert_eq!(std::fs::read_dir(cache.path()).unwrap().count(), 2);

    // the cache is safe to delete
    std::fs::remove_dir_all(cache.path()).unwrap();
    assert_eq!(slabcy(&args, cache.path()).stdout, cold.stdout);
}

#[test]
fn cache_beside_input_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("kp1.txt");
    std::fs::copy(data("kp1.txt"), &input).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_slabcy"))
        .args(["ogw", "--i", "2", input.to_str().unwrap()])
        .env_remove("SLABCY_CACHE")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join(".slabcy-cache").is_dir());
}

#[test]
fn output_is_deterministic() {
    let cache = tempfile::tempdir().unwrap();
    let args = [
        "slab",
        "--j",
        "1",
        "--order",
        "4",
        "--format",
        "json",
        "--no-cache",
        &path("f0.txt"),
    ];
    let a = slabcy(&args, cache.path());
    let b = slabcy(&args, cache.path());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
}
