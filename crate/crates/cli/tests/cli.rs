use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn spincm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spincm"))
        .args(args)
        .current_dir(dir)
        .env_remove("SPINCM_SEED")
        .output()
        .expect("spawn spincm")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn re(v: &Value) -> f64 {
    v[0].as_f64().unwrap()
}

/// Value of a `name: value` summary line.
fn summary(out: &str, name: &str) -> f64 {
    let line = out
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{name}: ")))
        .unwrap_or_else(|| panic!("no '{name}' in\n{out}"));
    line.trim().parse().unwrap()
}

#[test]
fn check_rational_sl3_all_roots_passes() {
    let dir = TempDir::new().unwrap();
    let out = spincm(
        dir.path(),
        &[
            "check",
            "--suite",
            "rmatrix",
            "--algebra",
            "A2",
            "--family",
            "rational",
            "--delta-prime",
            "all",
            "--samples",
            "10",
        ],
    );
    assert_eq!(code(&out), 0, "{}{}", stdout(&out), stderr(&out));
    let report = read_json(&dir.path().join("spincm-report.json"));
    assert_eq!(report["pass"], true);
    let checks = report["reports"][0]["checks"].as_array().unwrap();
    let names: Vec<&str> = checks.iter().map(|c| c["check"].as_str().unwrap()).collect();
    for name in ["zero_weight", "unitarity", "residue", "cdybe"] {
        assert!(names.contains(&name), "{names:?}");
    }
    assert_eq!(report["config"]["algebra"], "A2");
    assert_eq!(report["config"]["check"]["samples"], 10);
}

#[test]
fn check_elliptic_bracket_suite_with_lattice_flags() {
    let dir = TempDir::new().unwrap();
    let out = spincm(
        dir.path(),
        &[
            "check", "--suite", "fpb", "--family", "elliptic", "--omega1", "1", "--omega2", "0+1i",
        ],
    );
    assert_eq!(code(&out), 0, "{}{}", stdout(&out), stderr(&out));
    assert!(stdout(&out).contains("fpb suite: PASS"));
}

#[test]
fn non_closed_subset_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let out = spincm(dir.path(), &["check", "--suite", "rmatrix", "--delta-prime", "a1"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("not closed"), "{}", stderr(&out));
    assert!(!dir.path().join("spincm-report.json").exists());
}

#[test]
fn negative_control_fails_with_exit_two() {
    let dir = TempDir::new().unwrap();
    let out = spincm(
        dir.path(),
        &[
            "check",
            "--suite",
            "rmatrix",
            "--algebra",
            "A1",
            "--family",
            "rational",
            "--samples",
            "3",
            "--negative-control",
        ],
    );
    assert_eq!(code(&out), 2, "{}", stdout(&out));
    let report = read_json(&dir.path().join("spincm-report.json"));
    let failing: Vec<&Value> = report["reports"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .collect();
    assert!(!failing.is_empty());
    for c in failing {
        assert_eq!(c["check"], "cdybe");
        assert!(!c["failures"].as_array().unwrap().is_empty());
    }
}

#[test]
fn check_reports_are_byte_identical_on_rerun() {
    let dir = TempDir::new().unwrap();
    let args = [
        "check",
        "--suite",
        "rmatrix,energy",
        "--algebra",
        "A1",
        "--samples",
        "1",
        "--seed",
        "11",
        "--output",
        "r.json",
    ];
    let mut runs = Vec::new();
    for _ in 0..2 {
        assert_eq!(code(&spincm(dir.path(), &args)), 0);
        runs.push(std::fs::read(dir.path().join("r.json")).unwrap());
    }
    assert!(runs[0] == runs[1]);
}

#[test]
fn seed_precedence_flag_config_env() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("run.toml"), "seed = 5\n").unwrap();
    let seed_of = |extra: &[&str], env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_spincm"));
        cmd.args([
            "check",
            "--suite",
            "energy",
            "--algebra",
            "A1",
            "--family",
            "rational",
            "--samples",
            "1",
        ])
        .args(extra)
        .current_dir(dir.path())
        .env_remove("SPINCM_SEED");
        if let Some(v) = env {
            cmd.env("SPINCM_SEED", v);
        }
        assert!(cmd.status().unwrap().success());
        read_json(&dir.path().join("spincm-report.json"))["reports"][0]["seed"]
            .as_u64()
            .unwrap()
    };
    assert_eq!(seed_of(&[], None), 20_240_517);
    assert_eq!(seed_of(&[], Some("9")), 9);
    assert_eq!(seed_of(&["--config", "run.toml"], Some("9")), 5);
    assert_eq!(seed_of(&["--config", "run.toml", "--seed", "3"], Some("9")), 3);
}

#[test]
fn flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "algebra = \"A2\"\nfamily = \"rational\"\n[initial]\nq = [0.9, 1.2]\n[eval]\nwhat = [\"h\"]\n",
    )
    .unwrap();
    let out = spincm(dir.path(), &["eval", "--config", "run.toml"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["system"].as_str().unwrap().contains("A2"));

    let out = spincm(
        dir.path(),
        &["eval", "--config", "run.toml", "--algebra", "A1", "--q", "0.9"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["system"].as_str().unwrap().contains("A1"));
    assert_eq!(v["config"]["algebra"], "A1");
}

#[test]
fn config_errors_name_the_line() {
    let dir = TempDir::new().unwrap();
    std::fs::write(
        dir.path().join("bad.toml"),
        "algebra = \"A1\"\n\n[integrate]\nstep = 0.1\n",
    )
    .unwrap();
    let out = spincm(dir.path(), &["simulate", "--config", "bad.toml", "--q", "1"]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("bad.toml") && err.contains("line 4"), "{err}");
}

#[test]
fn usage_errors_and_help() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&spincm(dir.path(), &["--help"])), 0);
    assert_eq!(code(&spincm(dir.path(), &["frobnicate"])), 1);
    assert_eq!(code(&spincm(dir.path(), &["check", "--suite", "nonsense"])), 1);
    assert_eq!(code(&spincm(dir.path(), &["eval", "--q", "1+"])), 1);
    assert_eq!(code(&spincm(dir.path(), &["eval", "--q", "1,2"])), 1);
}

#[test]
fn free_motion_is_linear() {
    let dir = TempDir::new().unwrap();
    let out = spincm(
        dir.path(),
        &[
            "simulate",
            "--algebra",
            "A2",
            "--q",
            "0.9,1.2",
            "--p",
            "0.1,-0.05",
            "--t-end",
            "2",
            "--record-every",
            "250",
            "--output",
            "free.json",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let traj = read_json(&dir.path().join("free.json"));
    let t = traj["t"].as_array().unwrap();
    assert_eq!(t.len(), 9);
    for (i, ti) in t.iter().enumerate() {
        let ti = ti.as_f64().unwrap();
        let q = &traj["q"][i];
        let p = &traj["p"][i];
        assert!((re(&p[0]) - 0.1).abs() < 1e-15 && (re(&p[1]) + 0.05).abs() < 1e-15);
        assert!((re(&q[0]) - (0.9 + 0.1 * ti)).abs() < 1e-12);
        assert!((re(&q[1]) - (1.2 - 0.05 * ti)).abs() < 1e-12);
    }
    assert_eq!(traj["config"]["output"]["path"], "free.json");
}

#[test]
fn on_sigma_trigonometric_run_keeps_spectral_invariants() {
    let dir = TempDir::new().unwrap();
    // (α,q) = 1.3 with α = √2 e₁, ξ on root vectors only
    let q = format!("{}", 1.3 / 2f64.sqrt());
    let out = spincm(
        dir.path(),
        &[
            "simulate",
            "--family",
            "trigonometric",
            "--pi-prime",
            "a1",
            "--q",
            &q,
            "--p",
            "0.4",
            "--xi",
            "0,0.5,-0.6",
            "--output",
            "trig.csv",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let s = stdout(&out);
    assert_eq!(summary(&s, "initial distance from sigma"), 0.0);
    assert!(summary(&s, "spectral drift k=2") <= 1e-5, "{s}");
    assert!(summary(&s, "spectral drift k=3") <= 1e-5, "{s}");
    assert!(summary(&s, "energy drift") <= 1e-6, "{s}");
    assert!(summary(&s, "sigma excursion") <= 1e-6, "{s}");
    let csv = std::fs::read_to_string(dir.path().join("trig.csv")).unwrap();
    assert!(csv.starts_with("# config: {"));
    assert_eq!(csv.lines().count(), 2 + 1001);
}

#[test]
fn random_point_projected_onto_sigma() {
    let dir = TempDir::new().unwrap();
    let out = spincm(
        dir.path(),
        &[
            "simulate", "--family", "elliptic", "--random", "--sigma", "--t-end", "0.5", "--output", "e.csv",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(summary(&stdout(&out), "initial distance from sigma"), 0.0);
}

#[test]
fn zero_step_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = spincm(dir.path(), &["simulate", "--q", "1", "--dt", "0"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("dt"));
}

#[test]
fn collision_writes_partial_trajectory_and_exits_three() {
    let dir = TempDir::new().unwrap();
    let out = spincm(
        dir.path(),
        &[
            "simulate", "--q", "0.5", "--p", "-1", "--t-end", "2", "--output", "c.json",
        ],
    );
    assert_eq!(code(&out), 3);
    assert!(stdout(&out).contains("aborted at t = 0.5"), "{}", stdout(&out));
    let traj = read_json(&dir.path().join("c.json"));
    let last = traj["t"].as_array().unwrap().last().unwrap().as_f64().unwrap();
    assert!(last < 0.5);
}

#[test]
fn simulate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let mut runs = Vec::new();
    for _ in 0..2 {
        let out = spincm(
            dir.path(),
            &[
                "simulate",
                "--algebra",
                "A2",
                "--random",
                "--t-end",
                "0.3",
                "--output",
                "a.csv",
            ],
        );
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        runs.push(std::fs::read(dir.path().join("a.csv")).unwrap());
    }
    assert!(runs[0] == runs[1]);
}

#[test]
fn eval_hamiltonian_at_reference_point() {
    let dir = TempDir::new().unwrap();
    // (α,q) = 2, p = 1, ξ_α = ξ_{-α} = 1: H = ½ - ½·(1/4 + 1/4)
    let q = format!("{}", 2f64.sqrt());
    let out = spincm(
        dir.path(),
        &["eval", "--q", &q, "--p", "1", "--xi", "0,1,1", "--what", "h"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((re(&v["h"]) - 0.25).abs() < 1e-14);
    assert!(v.get("lax").is_none());
}

#[test]
fn eval_residue_table_approaches_casimir() {
    let dir = TempDir::new().unwrap();
    for family in ["rational", "trigonometric", "elliptic"] {
        let out = spincm(
            dir.path(),
            &[
                "eval",
                "--algebra",
                "A2",
                "--family",
                family,
                "--q",
                "0.4,0.9",
                "--z",
                "1e-7",
                "--what",
                "r",
            ],
        );
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
        let res = &v["r"]["residue"];
        assert!((re(&res["cartan"]) - 1.0).abs() < 1e-5, "{family}: {res}");
        let roots = res["roots"].as_object().unwrap();
        assert_eq!(roots.len(), 6);
        for (label, c) in roots {
            assert!((re(c) - 1.0).abs() < 1e-5, "{family} {label}: {c}");
        }
    }
}

#[test]
fn eval_lax_and_spectral() {
    let dir = TempDir::new().unwrap();
    let out = spincm(
        dir.path(),
        &[
            "eval",
            "--q",
            "0.7",
            "--p",
            "0.3",
            "--xi",
            "0.2,0.5,-0.4",
            "--kmax",
            "2",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let l = v["lax"].as_array().unwrap();
    assert_eq!(l.len(), 2);
    let trace = re(&l[0][0]) + re(&l[1][1]);
    assert!(trace.abs() < 1e-14);
    let s = v["spectral"].as_array().unwrap();
    assert_eq!(s.len(), 2);
    let tr2: f64 = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .map(|(i, j)| re(&l[i][j]) * re(&l[j][i]))
        .sum();
    assert!((re(&s[1]) - tr2).abs() < 1e-12);
}

#[test]
fn eval_on_the_singular_set_names_the_root() {
    let dir = TempDir::new().unwrap();
    let out = spincm(dir.path(), &["eval", "--algebra", "A2", "--q", "0,0.5"]);
    assert_eq!(code(&out), 3);
    let err = stderr(&out);
    assert!(err.contains("a1"), "{err}");
    // trigonometric: (α,q) ∈ πZ
    let q = format!("{}", std::f64::consts::PI / 2f64.sqrt());
    let out = spincm(dir.path(), &["eval", "--family", "trigonometric", "--q", &q]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("a1"));
}
