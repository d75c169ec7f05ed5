use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_isogeny-lab"));
    c.env_remove("ISOGENY_LAB_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_json(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_vec(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn strip_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn rational_counterexample_verifies() {
    let o = run(&["counterexample", "--paper"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json_out(&o);
    assert_eq!(r["claims"]["counterexample-v2-w1"], "verified");
    assert_eq!(r["tool"], "isogeny-lab");
    assert_eq!(r["counts"]["target_rational_3_torsion_points"], 0);
    assert_eq!(r["violations"], json!([]));
}

#[test]
fn counterexample_abstract_verifies() {
    let o = run(&["counterexample", "--abstract"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json_out(&o)["claims"]["necessity-abstract"], "verified");
    let o = run(&["counterexample", "--paper", "--abstract"]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&run(&["theorem1", "--q", "7"])), 1);
    assert_eq!(code(&run(&["no-such-command"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn theorem1_small_field_is_clean() {
    let o = run(&["theorem1", "--q", "7", "--ell", "3", "--threads", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json_out(&o);
    assert_eq!(r["violations"], json!([]));
    assert_eq!(r["claims"]["thm1-full-torsion"], "verified");
    assert_eq!(r["parameters"]["q"], 7);
    assert_eq!(r["parameters"]["threads"], 2);
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn theorem2_and_lemmas_are_clean() {
    let o = run(&["theorem2", "--q", "13", "--ell", "3", "--n", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json_out(&o)["claims"]["thm2-construction"], "verified");
    let o = run(&["lemmas", "--q", "13", "--ell", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json_out(&o);
    assert_eq!(r["claims"]["lem32-distinct-kernels"], "verified");
    assert_eq!(r["claims"]["lem42-lattice-dims"], "verified");
}

#[test]
fn sweep_text_format() {
    let o = run(&["sweep", "--ell-list", "3,5", "--q-max", "20", "--format", "text"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.starts_with("isogeny-lab "));
    assert!(s.contains("violations: 0"));
    assert!(s.contains("thm1-full-torsion: verified"));
}

#[test]
fn parameter_errors_exit_one() {
    for (args, needle) in [
        (&["theorem1", "--q", "9", "--ell", "3"][..], ""),
        (&["theorem1", "--q", "12", "--ell", "3"][..], ""),
        (&["theorem1", "--q", "11", "--ell", "4"][..], ""),
        (&["theorem1", "--q", "11", "--ell", "11"][..], ""),
        (&["theorem2", "--q", "13", "--ell", "3", "--n", "7"][..], ""),
        (&["theorem1", "--q", "1009", "--ell", "3", "--max-q", "500"][..], "--max-q"),
        (&["theorem1", "--q", "101", "--ell", "5", "--max-curves", "10"][..], "capability"),
        (&["suite", "--kind", "lattice", "--instances", "0"][..], ""),
    ] {
        let o = run(args);
        assert_eq!(code(&o), 1, "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty());
        assert!(stderr(&o).contains(needle), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn proper_prime_power_is_a_capability_error() {
    let o = run(&["theorem1", "--q", "25", "--ell", "3"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("capability"), "{}", stderr(&o));
}

#[test]
fn module_fixed_on_identity_is_full_space() {
    let dir = tempfile::tempdir().unwrap();
    let id = json!({"ell": 3, "dim": 4, "generators": [[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]], "hyperplanes": []});
    let path = write_json(dir.path(), "trivial.json", &id);
    let o = run(&["module", "--input", &path, "--op", "fixed"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let r = json_out(&o);
    assert_eq!(r["result"]["dimension"], 4);
    assert_eq!(r["result"]["basis"], json!([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]));
    let o = run(&["module", "--input", &path, "--op", "semisimple"]);
    assert_eq!(json_out(&o)["result"]["semisimple"], true);
}

#[test]
fn module_order_and_construct() {
    let dir = tempfile::tempdir().unwrap();
    // diag(1, 1, 2, 2) over F_5 with the pointed hyperplanes x₂ = 0 and x₁ = 0
    let cfg = json!({
        "ell": 5, "dim": 4,
        "generators": [[[1,0,0,0],[0,1,0,0],[0,0,2,0],[0,0,0,2]]],
        "hyperplanes": [[0,1,0,0],[1,0,0,0]]
    });
    let path = write_json(dir.path(), "cfg.json", &cfg);
    let o = run(&["module", "--input", &path, "--op", "order"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json_out(&o)["result"]["order"], 2);
    let o = run(&["module", "--input", &path, "--op", "construct"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let vs: Vec<Vec<u64>> = serde_json::from_value(json_out(&o)["result"]["vectors"].clone()).unwrap();
    assert_eq!(vs.len(), 2);
    for v in &vs {
        assert_eq!(v[2] % 5, 0);
        assert_eq!(v[3] % 5, 0);
    }
    assert_ne!(vs[0][0] * vs[1][1] % 5, vs[0][1] * vs[1][0] % 5);

    // a unipotent generator: pointed of order 2, not semisimple
    let bad = json!({
        "ell": 3, "dim": 2,
        "generators": [[[1,0],[1,1]]],
        "hyperplanes": [[1,0]]
    });
    let path = write_json(dir.path(), "bad.json", &bad);
    let o = run(&["module", "--input", &path, "--op", "semisimple"]);
    assert_eq!(json_out(&o)["result"]["semisimple"], false);
    let o = run(&["module", "--input", &path, "--op", "construct"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("not semisimple"));

    let path = write_json(dir.path(), "junk.json", &json!({"ell": 3}));
    assert_eq!(code(&run(&["module", "--input", &path, "--op", "fixed"])), 1);
    assert_eq!(code(&run(&["module", "--input", "/nonexistent.json", "--op", "fixed"])), 1);
}

#[test]
fn replay_exit_codes_mirror_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    // the two "independent" hyperplanes coincide
    let bad = json!({"kind": "lattice", "ell": 3, "dim": 2, "hyperplanes": [[[1, 0]], [[2, 0]]]});
    let path = write_json(dir.path(), "bad.json", &bad);
    let o = run(&["replay", &path]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    let r = json_out(&o);
    assert_eq!(r["outcome"]["claim"], "lem42-lattice-dims");
    assert_eq!(r["outcome"]["status"], "violated");

    let good = json!({"kind": "lattice", "ell": 3, "dim": 2, "hyperplanes": [[[1, 0]], [[0, 1]]]});
    let path = write_json(dir.path(), "good.json", &good);
    assert_eq!(code(&run(&["replay", &path])), 0);

    let path = write_json(dir.path(), "cx.json", &json!({"kind": "counterexample"}));
    assert_eq!(code(&run(&["replay", &path])), 0);

    let path = write_json(dir.path(), "malformed.json", &json!({"kind": "lattice", "ell": 3}));
    assert_eq!(code(&run(&["replay", &path])), 1);
    let path = write_json(dir.path(), "unknown.json", &json!({"kind": "no-such-check"}));
    assert_eq!(code(&run(&["replay", &path])), 1);
}

#[test]
fn violation_round_trips_through_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let witness = json!({"kind": "fixed-dimension", "n": 2, "config": {
        "ell": 3, "dim": 4,
        "generators": [[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]],
        "hyperplanes": []
    }});
    // a report-shaped file whose first violation carries the witness
    let report = json!({
        "tool": "isogeny-lab", "kind": "cyclic-suite",
        "violations": [{"claim": "cyclic-law", "detail": "synthetic", "witness": witness}]
    });
    let path = write_json(dir.path(), "report.json", &report);
    let o = run(&["replay", &path]);
    let r = json_out(&o);
    assert_eq!(r["outcome"]["claim"], "cyclic-law");
    assert_eq!(r["witness"]["kind"], "fixed-dimension");
    assert_eq!(r["witness"]["config"]["generators"], witness["config"]["generators"]);
    // identity generator with no hyperplanes: fixed dim 4 ≥ 2 holds, so the replay is clean
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    // the non-semisimple module has no nonzero fixed vector, so this one must fail
    let module = json_out(&run(&["counterexample", "--abstract"]))["observations"]["module"].clone();
    let necessity = json!({"kind": "fixed-dimension", "n": 2, "config": module});
    let path = write_json(dir.path(), "violation.json", &json!({"claim": "cyclic-law", "witness": necessity}));
    let o = run(&["replay", &path]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    let r = json_out(&o);
    assert_eq!(r["outcome"]["claim"], "cyclic-law");
    // and replaying the replay's own witness gives the same claim and status
    let path = write_json(dir.path(), "again.json", &r["witness"]);
    let again = json_out(&run(&["replay", &path]));
    assert_eq!(again["outcome"], r["outcome"]);
}

#[test]
fn seeded_runs_are_identical_except_timing() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("run{i}.json"));
        let threads = if i == 0 { "1" } else { "3" };
        let o = run(&[
            "suite", "--kind", "construction", "--instances", "40", "--seed", "11", "--threads", threads, "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        assert!(o.stdout.is_empty());
        let mut v = strip_timing(serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap());
        v["parameters"].as_object_mut().unwrap().remove("threads");
        outs.push(serde_json::to_vec(&v).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
    let a = strip_timing(json_out(&run(&["theorem1", "--q", "13", "--ell", "3", "--seed", "4"])));
    let b = strip_timing(json_out(&run(&["theorem1", "--q", "13", "--ell", "3", "--seed", "4"])));
    assert_eq!(serde_json::to_vec(&a).unwrap(), serde_json::to_vec(&b).unwrap());
}

#[test]
fn thread_flag_overrides_environment() {
    let o = bin().args(["counterexample", "--paper"]).env("ISOGENY_LAB_THREADS", "0").output().unwrap();
    assert_eq!(code(&o), 1);
    let o = bin().args(["theorem1", "--q", "7", "--ell", "3"]).env("ISOGENY_LAB_THREADS", "3").output().unwrap();
    assert_eq!(json_out(&o)["parameters"]["threads"], 3);
    let o = bin()
        .args(["theorem1", "--q", "7", "--ell", "3", "--threads", "2"])
        .env("ISOGENY_LAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(json_out(&o)["parameters"]["threads"], 2);
    let o = bin().args(["theorem1", "--q", "7", "--ell", "3"]).env("ISOGENY_LAB_THREADS", "lots").output().unwrap();
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("ISOGENY_LAB_THREADS"));
}
