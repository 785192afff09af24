mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use motifgrow::export::{parse_edge_list, parse_trace_csv};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_motifgrow"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn setup() -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("triangle_path4.toml");
    fs::write(&cfg, common::BASE_TOML).unwrap();
    (dir, cfg)
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn grow_base_writes_all_files() {
    let (dir, _) = setup();
    let out = run_in(dir.path(), &["grow", "--config", "triangle_path4.toml", "--steps", "1", "--out", "g"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let g = dir.path().join("g");
    let edges = parse_edge_list(&fs::read_to_string(g.join("edges.txt")).unwrap()).unwrap();
    assert_eq!(edges.len(), 36);
    assert_eq!(fs::read_to_string(g.join("bound_edges.txt")).unwrap().lines().count(), 12);
    let prov = fs::read_to_string(g.join("provenance.csv")).unwrap();
    assert_eq!(prov.lines().count(), 1 + 15);
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(g.join("manifest.json")).unwrap()).unwrap();
    let files: Vec<&str> = manifest["files"].as_array().unwrap().iter().map(|f| f.as_str().unwrap()).collect();
    assert_eq!(files, ["edges.txt", "bound_edges.txt", "trace.csv", "provenance.csv", "manifest.json"]);
    for f in files {
        assert!(g.join(f).exists(), "{f} listed but missing");
    }
    assert_eq!(manifest["predicted"]["n_e"], "36");
}

#[test]
fn grow_randomized_churn_counts() {
    let (dir, _) = setup();
    let args = [
        "grow", "--config", "triangle_path4.toml", "--mode", "randomized", "--pr", "0.5", "--pa", "0.5", "--steps", "2",
        "--rng-seed", "7", "--out", "g",
    ];
    let out = run_in(dir.path(), &args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let trace = parse_trace_csv(&fs::read_to_string(dir.path().join("g/trace.csv")).unwrap()).unwrap();
    let row = trace.row(2).unwrap();
    assert_eq!((row.removed, row.added, row.n_e), (18, 9, 159));
}

#[test]
fn grow_zero_steps_is_the_initial_graph() {
    let (dir, _) = setup();
    let out = run_in(dir.path(), &["grow", "--config", "triangle_path4.toml", "--steps", "0", "--out", "g"]);
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read_to_string(dir.path().join("g/edges.txt")).unwrap(), "0 1\n0 2\n1 2\n");
}

#[test]
fn grow_sweep_fans_out() {
    let (dir, _) = setup();
    let out = run_in(
        dir.path(),
        &["grow", "--config", "triangle_path4.toml", "--steps", "3", "--sweep-pr", "0.2,0.4", "--sweep-pa", "0.5", "--out", "s"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("s/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["runs"].as_array().unwrap().len(), 2);
    for sub in ["pr0.2_pa0.5", "pr0.4_pa0.5"] {
        assert!(dir.path().join("s").join(sub).join("trace.csv").exists());
    }
}

#[test]
fn stats_on_base_and_triangle() {
    let (dir, _) = setup();
    assert_eq!(code(&run_in(dir.path(), &["grow", "--config", "triangle_path4.toml", "--out", "g1"])), 0);
    let out = run_in(dir.path(), &["stats", "--run", "g1", "--out", "s1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let census = fs::read_to_string(dir.path().join("s1/census.csv")).unwrap();
    let handshake: u64 = census
        .lines()
        .skip(1)
        .map(|l| {
            let (d, c) = l.split_once(',').unwrap();
            d.parse::<u64>().unwrap() * c.parse::<u64>().unwrap()
        })
        .sum();
    assert_eq!(handshake, 72);

    assert_eq!(code(&run_in(dir.path(), &["grow", "--config", "triangle_path4.toml", "--steps", "0", "--out", "g0"])), 0);
    assert_eq!(code(&run_in(dir.path(), &["stats", "--run", "g0", "--out", "s0"])), 0);
    assert_eq!(fs::read_to_string(dir.path().join("s0/census.csv")).unwrap(), "degree,count\n2,3\n");
    assert_eq!(fs::read_to_string(dir.path().join("s0/diameter.txt")).unwrap(), "1\n");
}

#[test]
fn stats_ecum_has_t_minus_one_rows() {
    let (dir, _) = setup();
    assert_eq!(code(&run_in(dir.path(), &["grow", "--config", "triangle_path4.toml", "--steps", "6", "--out", "g"])), 0);
    let out = run_in(dir.path(), &["stats", "--run", "g", "--out", "s", "--no-diameter"]);
    assert_eq!(code(&out), 0);
    let ecum = fs::read_to_string(dir.path().join("s/ecum.csv")).unwrap();
    assert_eq!(ecum.lines().count(), 1 + 5);

    let out = run_in(dir.path(), &["stats", "--run", "g", "--out", "j", "--format", "json", "--no-diameter"]);
    assert_eq!(code(&out), 0);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("j/stats.json")).unwrap()).unwrap();
    assert_eq!(json["ecum"].as_array().unwrap().len(), 5);
    assert_eq!(json["n_e"], 3 + 33 * (4u64.pow(6) - 1) / 3);
}

#[test]
fn malformed_input_reports_line() {
    let (dir, _) = setup();
    assert_eq!(code(&run_in(dir.path(), &["grow", "--config", "triangle_path4.toml", "--out", "g"])), 0);
    fs::write(dir.path().join("bad.txt"), "0 1\n1 2\nnot an edge\n").unwrap();
    let out = run_in(
        dir.path(),
        &["stats", "--edges", "bad.txt", "--provenance", "g/provenance.csv", "--out", "s"],
    );
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn verify_exit_codes() {
    let (dir, _) = setup();
    let out = run_in(dir.path(), &["verify", "--config", "triangle_path4.toml", "--steps", "4", "--out", "v"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(dir.path().join("v/report.txt").exists());
    assert!(dir.path().join("v/report.json").exists());

    let out = run_in(
        dir.path(),
        &["verify", "--config", "triangle_path4.toml", "--steps", "3", "--negative-control", "--out", "n"],
    );
    assert_eq!(code(&out), 1);
    let report = fs::read_to_string(dir.path().join("n/report.txt")).unwrap();
    let failing: Vec<&str> = report
        .lines()
        .filter(|l| l.split('\t').nth(4) == Some("fail"))
        .map(|l| l.split('\t').next().unwrap())
        .collect();
    assert_eq!(failing, ["n_e[2]", "n_e[3]"]);
}

#[test]
fn verify_base_at_six_steps_fails_only_asymptotic_entries() {
    let (dir, _) = setup();
    let out = run_in(dir.path(), &["verify", "--config", "triangle_path4.toml", "--steps", "6", "--out", "v", "--format", "json"]);
    assert_eq!(code(&out), 1);
    let json: serde_json::Value = serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
    let failing: Vec<String> = json["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["gating"] == true && e["verdict"] == "fail")
        .map(|e| e["name"].as_str().unwrap().to_owned())
        .collect();
    assert!(!failing.is_empty());
    for name in &failing {
        assert!(
            name.starts_with("e_k(") || name.starts_with("ecum ratio spread"),
            "unexpected failure {name}"
        );
    }
}

#[test]
fn verify_randomized_two_seeds() {
    let (dir, _) = setup();
    for seed in ["1", "2"] {
        let out = run_in(
            dir.path(),
            &[
                "verify", "--config", "triangle_path4.toml", "--mode", "randomized", "--pr", "0.5", "--pa", "0.5", "--steps", "8",
                "--rng-seed", seed, "--out", seed,
            ],
        );
        assert_eq!(code(&out), 0, "seed {seed}: {}", stderr(&out));
        let report = fs::read_to_string(dir.path().join(seed).join("report.txt")).unwrap();
        assert!(report.contains("ecum slope run 1 vs run 0"));
    }
}

#[test]
fn reruns_are_byte_identical() {
    let (dir, _) = setup();
    for out in ["a", "b"] {
        let args = [
            "grow", "--config", "triangle_path4.toml", "--mode", "rewire", "--pw", "0.3", "--steps", "3", "--rng-seed", "11",
            "--out", out,
        ];
        assert_eq!(code(&run_in(dir.path(), &args)), 0);
    }
    for f in ["edges.txt", "bound_edges.txt", "trace.csv", "provenance.csv"] {
        let a = fs::read(dir.path().join("a").join(f)).unwrap();
        let b = fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f} differs");
    }
}

#[test]
fn config_and_usage_errors_exit_2() {
    let (dir, _) = setup();
    let out = run_in(dir.path(), &["grow", "--config", "missing.toml", "--out", "g"]);
    assert_eq!(code(&out), 2);
    fs::write(dir.path().join("typo.toml"), format!("stepz = 3\n{}", common::BASE_TOML)).unwrap();
    let out = run_in(dir.path(), &["grow", "--config", "typo.toml", "--out", "g"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("stepz"), "{}", stderr(&out));
    let out = run_in(dir.path(), &["grow", "--config", "triangle_path4.toml", "--mode", "randomized", "--out", "g"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("p_r"));
    let out = run_in(dir.path(), &["grow", "--config", "triangle_path4.toml", "--steps", "40", "--out", "g"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--allow-big"));
    assert_eq!(code(&run_in(dir.path(), &["frobnicate"])), 2);
    assert_eq!(code(&run_in(dir.path(), &["--help"])), 0);
}

#[test]
fn saturation_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    // K2 initial with a triangle seed is K5 after one step: no room to add.
    let cfg = "r = 1\nmode = \"randomized\"\np_r = 0.3333333333333333\np_a = 0.6666666666666666\nsteps = 2\n\
               [initial]\nm_v = 2\nedges = [[0, 1]]\n\
               [[seeds]]\nm_v = 3\nedges = [[0, 1], [1, 2], [0, 2]]\n";
    fs::write(dir.path().join("k2.toml"), cfg).unwrap();
    let out = run_in(dir.path(), &["grow", "--config", "k2.toml", "--out", "g"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("non-adjacent"));
}
