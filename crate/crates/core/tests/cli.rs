use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gatecut(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gatecut"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn barbell(dir: &Path) {
    let o = gatecut(dir, &["generate", "barbell", "k=3", "m=0", "--circuit"]);
    fs::write(dir.join("bb.txt"), stdout(&o)).unwrap();
}

#[test]
fn select_barbell_bridge() {
    let d = tempfile::tempdir().unwrap();
    barbell(d.path());
    let v: serde_json::Value = serde_json::from_str(&stdout(&gatecut(d.path(), &["select", "bb.txt"]))).unwrap();
    assert_eq!(v["edge"], serde_json::json!([2, 3]));
    assert_eq!(v["gate_index"], 3);
    for key in ["edge", "score1", "bc", "dp", "score2"] {
        assert!(v["shortlist"][0].get(key).is_some(), "{key}");
    }
}

#[test]
fn random_selection_repeats() {
    let d = tempfile::tempdir().unwrap();
    barbell(d.path());
    let args = ["select", "bb.txt", "--method", "random", "--seed", "42"];
    assert_eq!(stdout(&gatecut(d.path(), &args)), stdout(&gatecut(d.path(), &args)));
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("bad.txt"), "qubits 2\nh 0\ncx 0 9\n").unwrap();
    let o = gatecut(d.path(), &["select", "bad.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert!(o.stdout.is_empty());

    fs::write(d.path().join("one.txt"), "qubits 2\nh 0\n").unwrap();
    assert_eq!(gatecut(d.path(), &["select", "one.txt"]).status.code(), Some(3));
    assert_eq!(gatecut(d.path(), &["select"]).status.code(), Some(2));
    assert_eq!(gatecut(d.path(), &["select", "missing.txt"]).status.code(), Some(1));
}

#[test]
fn bench_rows_and_determinism() {
    let d = tempfile::tempdir().unwrap();
    fs::write(
        d.path().join("run.toml"),
        "[[sbm_sweep]]\nmus = [0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4]\nseeds = 20\nn_per = 8\ncommunities = 2\np_in = 0.5\n",
    )
    .unwrap();
    let table = stdout(&gatecut(d.path(), &["bench", "--config", "run.toml", "--out", "a.csv"]));
    assert!(table.contains("sbm mu=0.40"));
    let a = fs::read_to_string(d.path().join("a.csv")).unwrap();
    assert_eq!(a.lines().count(), 141);
    stdout(&gatecut(d.path(), &["bench", "--config", "run.toml", "--out", "b.csv"]));
    assert_eq!(a, fs::read_to_string(d.path().join("b.csv")).unwrap());
}

#[test]
fn empty_bench_is_header_only() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("empty.toml"), "").unwrap();
    stdout(&gatecut(d.path(), &["bench", "--config", "empty.toml", "--out", "e.csv"]));
    assert_eq!(fs::read_to_string(d.path().join("e.csv")).unwrap().lines().count(), 1);
}

#[test]
fn breakeven_grid() {
    let d = tempfile::tempdir().unwrap();
    let csv = stdout(&gatecut(d.path(), &["breakeven"]));
    let mut saw = false;
    for line in csv.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        if f[2] == "15" && f[4] == "5" {
            assert!(f[5].parse::<f64>().unwrap() < 1000.0);
            saw = true;
        }
        if f[4] == "0" {
            assert_eq!(f[5], "inf");
        }
    }
    assert!(saw);
}

#[test]
fn failure_sweep_single_cell() {
    let d = tempfile::tempdir().unwrap();
    fs::write(
        d.path().join("f.toml"),
        "[failure]\nns = [4]\ntrotter_steps = [2]\nbudgets = [1000]\nstrategies = [\"shared\"]\nreps = 1\n",
    )
    .unwrap();
    stdout(&gatecut(d.path(), &["failure-sweep", "--config", "f.toml", "--out", "w.csv"]));
    let w = fs::read_to_string(d.path().join("w.csv")).unwrap();
    assert_eq!(w.lines().count(), 2);
    assert!(w.lines().nth(1).unwrap().starts_with("4,2,1000,shared,"));
}

#[test]
fn estimate_and_route() {
    let d = tempfile::tempdir().unwrap();
    let circuit = stdout(&gatecut(d.path(), &["tfim", "--topology", "chain", "--n", "4", "--steps", "1", "--hamiltonian", "h.txt"]));
    fs::write(d.path().join("tf.txt"), circuit).unwrap();
    let direct: serde_json::Value =
        serde_json::from_str(&stdout(&gatecut(d.path(), &["estimate", "tf.txt", "--observable", "h.txt"]))).unwrap();
    let cut: serde_json::Value = serde_json::from_str(&stdout(&gatecut(
        d.path(),
        &["estimate", "tf.txt", "--observable", "h.txt", "--cut", "tw2s"],
    )))
    .unwrap();
    assert!((direct["value"].as_f64().unwrap() - cut["value"].as_f64().unwrap()).abs() < 1e-10);
    assert_eq!(cut["per_branch"].as_array().unwrap().len(), 6);
    assert!(cut.get("shots").is_some());

    let r: serde_json::Value = serde_json::from_str(&stdout(&gatecut(
        d.path(),
        &["route", "tf.txt", "--seeds", "42,7", "--dump-routed", "routed.txt"],
    )))
    .unwrap();
    assert_eq!(r["mean_ecr"], 6.0);
    assert_eq!(r["runs"].as_array().unwrap().len(), 2);
    assert!(fs::read_to_string(d.path().join("routed.txt")).unwrap().starts_with("qubits 127"));
}

#[test]
fn trace_and_interaction() {
    let d = tempfile::tempdir().unwrap();
    barbell(d.path());
    let trace = stdout(&gatecut(d.path(), &["trace", "bb.txt"]));
    assert_eq!(trace.lines().count(), 6);
    let first: serde_json::Value = serde_json::from_str(trace.lines().next().unwrap()).unwrap();
    for key in ["step", "vertex", "bag", "fill_edges"] {
        assert!(first.get(key).is_some());
    }
    let ig = stdout(&gatecut(d.path(), &["interaction", "bb.txt"]));
    assert!(ig.starts_with("6 7\n0 1 1\n"));
}
