use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cvdecomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvdecomp")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn compile_writes_sequence_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = cvdecomp(&["compile", "--hamiltonian", "(X0^2+P0^2)^2", "--t", "0.1", "--budget", "1e-3", "--out", out]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["total"], 94);
    assert_eq!(report["fourier_count"], 48);
    let lines = fs::read_to_string(dir.path().join("sequence.jsonl")).unwrap();
    assert_eq!(lines.lines().filter(|l| l.contains("\"kind\"")).count(), 94);
}

#[test]
fn outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = cvdecomp(&[
            "compile",
            "--hamiltonian",
            "X0^2 P0^2 + P0^2 X0^2 + X0^5",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
    }
    for name in ["sequence.jsonl", "report.json"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    let solve = |seed: &str| {
        cvdecomp(&["solve", "--family", "commutator", "--pairs", "2", "--order", "2", "--paths", "16", "--seed", seed])
            .stdout
    };
    assert_eq!(solve("3"), solve("3"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&cvdecomp(&["compile", "--hamiltonian", "X0^"])), 2);
    assert_eq!(code(&cvdecomp(&["compile", "--hamiltonian", "X0^4", "--t", "1e6", "--budget", "1e-12"])), 3);
    assert_eq!(code(&cvdecomp(&["verify", "--identity", "x2", "--t", "0"])), 0);
    assert_eq!(code(&cvdecomp(&["verify", "--identity", "x2", "--t", "0.3", "--fock-dim", "24"])), 4);
    assert_eq!(code(&cvdecomp(&["solve"])), 1);
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.toml");
    fs::write(&cfg, "command = \"count\"\nhamiltonian = \"(X0^2+P0^2)^2\"\nt = 0.1\nbudget = 1e-3\n").unwrap();
    let from_file = cvdecomp(&["count", "--config", cfg.to_str().unwrap()]);
    let from_flags = cvdecomp(&["count", "--hamiltonian", "(X0^2+P0^2)^2", "--t", "0.1", "--budget", "1e-3"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, from_flags.stdout);
    let overridden = cvdecomp(&["count", "--config", cfg.to_str().unwrap(), "--budget", "1e-5"]);
    assert_ne!(overridden.stdout, from_flags.stdout);
    fs::write(&cfg, "command = \"count\"\nbogus = 1\n").unwrap();
    assert_eq!(code(&cvdecomp(&["count", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn verify_reads_a_compiled_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&cvdecomp(&["compile", "--hamiltonian", "X0^2 P1", "--t", "0.0005", "--out", out])), 0);
    let seq = dir.path().join("sequence.jsonl");
    assert!(Path::new(&seq).exists());
    let o = cvdecomp(&[
        "verify",
        "--sequence",
        seq.to_str().unwrap(),
        "--hamiltonian",
        "X0^2 P1",
        "--t",
        "0.0005",
        "--fock-dim",
        "24",
        "--threshold",
        "1e-4",
    ]);
    assert_eq!(code(&o), 0, "{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr));
}

#[test]
fn tables_lists_every_fixture() {
    let o = cvdecomp(&["tables"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    for name in ["\"I\"", "\"II\"", "\"III\"", "\"IV\"", "\"V\"", "\"VI\""] {
        assert!(text.contains(name), "{name}");
    }
}

#[test]
fn solve_without_pins_recovers_the_fourth_order_table() {
    let o = cvdecomp(&["solve", "--family", "commutator", "--pairs", "5", "--order", "4"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pins"]["c1"], 1.2);
    assert_eq!(v["pins"]["c1'"], -1.0);
    let best = v["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect::<Vec<_>>())
        .min_by(|a, b| {
            let m = |x: &Vec<f64>| x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            m(a).total_cmp(&m(b))
        })
        .unwrap();
    let printed = [1.2, -1.0, -0.090992, 1.350762, -1.715364, -1.710162, -0.610065, 0.275377, 1.216422, 1.084021];
    for (a, b) in best.iter().zip(printed) {
        assert!((a - b).abs() < 1e-4, "{best:?}");
    }
}
