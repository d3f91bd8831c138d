use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sualbp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sualbp"))
        .args(args)
        .env_remove("SUALBP_TIME_LIMIT")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("solve prints JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const ALB: &str = "<number of tasks>\n3\n\n<cycle time>\n12\n\n<task times>\n1 3\n2 4\n3 5\n\n\
<precedence relations>\n1,3\n\n<setup times forward>\n1,2,1\n1,3,1\n2,1,1\n2,3,1\n3,1,1\n3,2,1\n\n\
<setup times backward>\n1,1,1\n1,2,1\n1,3,1\n2,1,1\n2,2,1\n2,3,1\n3,1,1\n3,2,1\n3,3,1\n\n<end>\n";

#[test]
fn solve1_reports_an_optimal_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "small.alb", ALB);
    let out = sualbp(&["solve1", &file]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["status"], "optimal");
    // Σt equals c and any order adds three unit setups: two stations.
    assert_eq!(v["objective"], 2);
    assert_eq!(v["lower_bound"], 2);
}

#[test]
fn solve2_station_count_sources() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "small.alb", ALB);
    let out = sualbp(&["solve2", &file, "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["objective"], 15);
    // Σt = 12 at c = 12: every rounding gives one station.
    for round in ["floor", "half", "ceil"] {
        let out = sualbp(&["solve2", &file, "--round", round, "--local-improve"]);
        assert_eq!(json(&out)["objective"], 15, "{round}");
    }
    let out = sualbp(&["solve2", &file, "--m", "1", "--round", "ceil"]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "conflicting flags are a usage error"
    );
}

#[test]
fn exit_codes_distinguish_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "small.alb", ALB);
    let out = sualbp(&["solve1", &file, "--cycle", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["status"], "infeasible");

    let gen = dir.path().join("big.json");
    let gen = gen.to_str().unwrap();
    assert!(
        sualbp(&["generate", "--seed", "4", "--tasks", "40", "--out", gen])
            .status
            .success()
    );
    let out = sualbp(&["solve1", gen, "--time-limit", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["status"], "timeout-no-solution");

    let out = sualbp(&["solve1", &dir.path().join("missing.alb").to_string_lossy()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn toggles_do_not_change_the_answer() {
    let dir = tempfile::tempdir().unwrap();
    let gen = dir.path().join("g.json");
    let gen = gen.to_str().unwrap();
    sualbp(&["generate", "--seed", "9", "--tasks", "9", "--out", gen]);
    for cmd in ["solve1", "solve2"] {
        let base = json(&sualbp(&[cmd, gen]));
        for flags in [
            &["--no-dual-bounds"][..],
            &["--no-dominance"],
            &["--no-dual-bounds", "--no-dominance"],
        ] {
            let mut args = vec![cmd, gen];
            args.extend_from_slice(flags);
            let v = json(&sualbp(&args));
            assert_eq!(v["objective"], base["objective"], "{cmd} {flags:?}");
            assert_eq!(v["status"], "optimal");
        }
    }
}

#[test]
fn validate_prints_derived_data_and_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "small.alb", ALB);
    let out = sualbp(&["validate", &file, "--oracle"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(
        text.contains("[type-1]") && text.contains("[type-2]"),
        "{text}"
    );
    assert!(text.contains("oracle optimum: 2"), "{text}");

    let cyclic = write(dir.path(), "cyclic.alb", "<number of tasks>\n2\n<cycle time>\n5\n<task times>\n1 1\n2 1\n<precedence relations>\n1,2\n2,1\n<end>\n");
    let out = sualbp(&["validate", &cyclic]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cycle"));
}

#[test]
fn bench_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("set");
    fs::create_dir(&data).unwrap();
    for seed in 0..3 {
        let p = data.join(format!("i{seed}.json"));
        sualbp(&[
            "generate",
            "--seed",
            &seed.to_string(),
            "--tasks",
            "7",
            "--out",
            p.to_str().unwrap(),
        ]);
    }
    let out_dir = dir.path().join("out");
    let out = sualbp(&[
        "bench",
        data.to_str().unwrap(),
        "--type",
        "2",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let results = fs::read_to_string(out_dir.join("results.csv")).unwrap();
    assert_eq!(results.lines().count(), 4);
    assert!(
        results.lines().skip(1).all(|l| l.contains(",optimal,")),
        "{results}"
    );
    let summary = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert!(summary.starts_with("class,alpha,count,gap_percent,time_s,feasible,optimal"));
    assert!(out_dir.join("traces/i0.csv").exists());

    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let out_dir = dir.path().join("out-empty");
    let out = sualbp(&[
        "bench",
        empty.to_str().unwrap(),
        "--type",
        "1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let results = fs::read_to_string(out_dir.join("results.csv")).unwrap();
    assert_eq!(results.lines().count(), 1);
}
