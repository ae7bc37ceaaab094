use std::fs;
use std::process::{Command, Output};

fn sawset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sawset")).args(args).env_remove("SAWSET_WORKERS").output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn construct_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("l2.txt");
    let p = path.to_str().unwrap();
    assert_eq!(code(&sawset(&["construct", "lightning", "2", "-o", p])), 0);
    assert!(fs::read_to_string(&path).unwrap().starts_with("n=4\n"));

    let out = sawset(&["check", p, "--assert", "t-saw=1", "--assert", "intersecting"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["size"], 7);
    assert_eq!(v["report"]["min_saw_t"], 1);

    assert_eq!(code(&sawset(&["check", p, "--assert", "t-saw=0"])), 1);
    assert_eq!(code(&sawset(&["check", p, "--assert", "sunny"])), 2);
}

#[test]
fn json_construction_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let p = path.to_str().unwrap();
    assert_eq!(code(&sawset(&["construct", "middle-layers", "5", "1", "--format", "json", "-o", p])), 0);
    let out = sawset(&["check", p]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["size"], 20);
    assert_eq!(v["report"]["lym_sum"], "2/1");
    assert_eq!(v["report"]["intersecting"], false);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, "n=2\n1,3\n").unwrap();
    let out = sawset(&["check", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(code(&sawset(&["check", "/nonexistent/family.txt"])), 2);
    assert_eq!(code(&sawset(&["search", "--n", "9", "--t", "1"])), 2);
}

#[test]
fn search_statuses() {
    let out = sawset(&["search", "--n", "4", "--t", "1", "--mode", "exhaustive", "--all-optima"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["optimum"], 10);
    assert_eq!(v["optima"].as_array().unwrap().len(), 2);

    let out = sawset(&["search", "--n", "6", "--t", "1", "--intersecting", "--budget", "100"]);
    assert_eq!(code(&out), 3);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "budget_exhausted");
}

#[test]
fn probe_and_classify() {
    let out = sawset(&["probe", "--k", "2"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "confirmed");
    assert_eq!(v["outcome"]["optimum"], 7);

    let out = sawset(&["classify", "--n", "4", "--t", "1"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["found_count"], 2);
}

#[test]
fn worker_count_does_not_change_output() {
    let verify = |w: &str| sawset(&["--workers", w, "verify", "--no-timing"]);
    let (one, eight) = (verify("1"), verify("8"));
    assert_eq!(code(&one), 0, "{}", String::from_utf8_lossy(&one.stdout));
    assert_eq!(one.stdout, eight.stdout);

    let search = |w: &str| {
        sawset(&[
            "--workers",
            w,
            "search",
            "--n",
            "5",
            "--t",
            "1",
            "--intersecting",
            "--all-optima",
            "--budget",
            "4000",
        ])
    };
    assert_eq!(search("1").stdout, search("8").stdout);
}
