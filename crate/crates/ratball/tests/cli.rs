use std::path::Path;
use std::process::{Command, Output};

use ratball::formats::{TreeFile, WitnessFile};
use ratball_core::lattice::verify_embedding;
use ratball_core::plumbing::{gram_matrix, WeightedTree};

fn ratball(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratball"))
        .args(args)
        .env_remove("RATBALL_OUT_DIR")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_chain(dir: &Path, k: usize) -> String {
    let path = dir.join(format!("chain{}.json", k));
    let f = TreeFile::from_tree(&WeightedTree::path(&vec![-2; k]));
    std::fs::write(&path, serde_json::to_string(&f).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn contfrac_examples() {
    assert_eq!(stdout(&ratball(&["contfrac", "7/2"])), "[4,2]\n");
    assert_eq!(stdout(&ratball(&["contfrac", "7/2", "--dual"])), "[2,2,3]\n");
    assert_eq!(stdout(&ratball(&["contfrac", "7/3", "--reverse"])), "[2,2,3]\n");
    assert_eq!(stdout(&ratball(&["contfrac", "--eval", "2,2,2"])), "4/3\n");
    let j: serde_json::Value = serde_json::from_slice(&ratball(&["contfrac", "17/5", "--json"]).stdout).unwrap();
    assert_eq!(j["coefficients"], serde_json::json!(["4", "2", "3"]));
    assert_eq!(j["value"], "17/5");
    for bad in [&["contfrac", "7/x"][..], &["contfrac", "2/3"], &["contfrac", "--eval", "2,1"], &["contfrac"]] {
        assert_eq!(code(&ratball(bad)), 1, "{:?}", bad);
    }
}

#[test]
fn graph_examples() {
    let o = ratball(&["graph", "--pairs", "2,3,2,17", "--n", "36", "--reduced", "--json"]);
    assert_eq!(code(&o), 0);
    let f: TreeFile = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(f.vertices.len(), 8);
    assert!(String::from_utf8_lossy(&o.stderr).lines().any(|l| l == "det 36"));
    // round trip through the parser, roles included
    let p = f.to_plumbing().unwrap().unwrap();
    assert_eq!(TreeFile::from_plumbing(&p), f);

    assert_eq!(code(&ratball(&["graph", "--pairs", "2,3,2,11", "--n", "30"])), 1);
    assert_eq!(code(&ratball(&["graph", "--pairs", "2,3,2,17", "--n", "33", "--reduced"])), 2);
    assert_eq!(code(&ratball(&["graph", "--pairs", "2,3,2,17", "--n", "33", "--raw"])), 0);

    let raw = stdout(&ratball(&["graph", "--pairs", "2,3,2,17", "--n", "36", "--raw"]));
    assert!(raw.contains("det 36\nnegative definite no\ninertia +2"));
    let closed = ratball(&["graph", "--pairs", "2,3,2,17", "--n", "36", "--closed-form", "--dot"]);
    let dot = stdout(&closed);
    assert!(dot.starts_with("graph plumbing {"));
    assert!(dot.contains("role=\"node2\""));
    assert_eq!(dot.matches(" -- ").count(), 7);
}

#[test]
fn embed_examples() {
    let dir = tempfile::tempdir().unwrap();
    let chain4 = write_chain(dir.path(), 4);
    assert_eq!(code(&ratball(&["embed", &chain4, "--rank", "4"])), 3);
    assert_eq!(code(&ratball(&["embed", &chain4, "--rank", "5"])), 0);

    let chain3 = write_chain(dir.path(), 3);
    let o = ratball(&["embed", &chain3, "--rank", "3", "--enumerate"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("classes 1\n"));

    let w = dir.path().join("w.json");
    let o = ratball(&["embed", "--pairs", "2,3,2,17", "--n", "36", "--out", w.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let m: WitnessFile = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(m.rank, 8);
    let t = ratball_core::cabling::reduced_plumbing(
        &ratball::formats::SpecFile { pairs: vec![[2, 3], [2, 17]], n: 36 }.to_spec().unwrap(),
    )
    .unwrap();
    assert_eq!(verify_embedding(&gram_matrix(&t.plumbing.tree), &m.to_matrix().unwrap()), Ok(true));

    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, r#"{"pairs":[[2,3],[2,13]],"n":28}"#).unwrap();
    assert_eq!(code(&ratball(&["embed", spec.to_str().unwrap()])), 3);

    let o = ratball(&["embed", "--pairs", "2,7,2,31", "--n", "64", "--budget", "1", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 4);

    let indefinite = dir.path().join("bad.json");
    std::fs::write(&indefinite, r#"{"vertices":[{"id":0,"weight":-1},{"id":1,"weight":-1}],"edges":[[0,1]]}"#).unwrap();
    assert_eq!(code(&ratball(&["embed", indefinite.to_str().unwrap()])), 1);
}

#[test]
fn env_sets_default_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_ratball"))
        .args(["embed", "--pairs", "2,3,2,17", "--n", "36"])
        .env("RATBALL_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("witness.json").exists());
}

#[test]
fn audit_exit_codes_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let d = |s: &str| dir.path().join(s).to_str().unwrap().to_string();
    let derived = ratball(&["audit", "--family-form", "derived", "--workers", "8", "--out-dir", &d("a")]);
    assert_eq!(code(&derived), 0, "{}", String::from_utf8_lossy(&derived.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a/audit.json")).unwrap()).unwrap();
    assert_eq!(report["disagreements"], serde_json::json!([]));
    assert_eq!(report["passes"].as_array().unwrap().len(), 6);

    let printed = ratball(&["audit", "--family-form", "printed", "--workers", "1", "--out-dir", &d("b")]);
    assert_ne!(code(&printed), 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("b/audit.json")).unwrap()).unwrap();
    assert!(!report["disagreements"].as_array().unwrap().is_empty());

    let a = std::fs::read(dir.path().join("a/sweep.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/sweep.csv")).unwrap();
    assert_eq!(a, b);

    let w: WitnessFile =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a/witnesses/w_2_7_2_31_64.json")).unwrap())
            .unwrap();
    assert_eq!(w.rank, 9);
}

#[test]
fn sweep_ranges_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&ratball(&["sweep", "--k2", "5-2", "--out-dir", out])), 1);
    assert_eq!(code(&ratball(&["sweep", "--p1", "1", "--out-dir", out])), 1);
    assert_eq!(code(&ratball(&["sweep", "--workers", "0", "--out-dir", out])), 1);

    let empty = ratball(&["audit", "--k2", "", "--out-dir", out]);
    assert_eq!(code(&empty), 0);
    assert_eq!(std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap(), "");

    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# small box\np1 = 2\nk1 = 1\np2 = 2\nk2 = 7-8\nN = 2-3\nworkers = 2\n").unwrap();
    let csv = dir.path().join("x.csv");
    let o = ratball(&["sweep", "--config", cfg.to_str().unwrap(), "--N", "2", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 1, "unknown flag --N is a usage error");
    let o = ratball(&["sweep", "--config", cfg.to_str().unwrap(), "--big-n", "2", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3, "{}", text);
    assert!(text.contains("2,3,2,17,36,2,8,passes,witnesses/w_2_3_2_17_36.json,"));

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(code(&ratball(&["sweep", "--config", cfg.to_str().unwrap(), "--out-dir", out])), 1);
}

#[test]
fn desk_sweep_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("desk.csv");
    let o = ratball(&["sweep", "--workers", "3", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let golden = include_str!("golden/desk_sweep.csv");
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), golden);
}
