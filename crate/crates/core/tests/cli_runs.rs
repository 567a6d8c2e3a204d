//! The binary end to end: exit codes, file round trips, repeatable output.

use std::process::{Command, Output};

fn tsparsity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsparsity"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = tsparsity(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn sample_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let g = graph.to_str().unwrap();
    stdout(&[
        "sample", "--n", "40", "--p", "0.5", "--seed", "5", "--out", g,
    ]);
    assert!(
        stdout(&["solve", "--in", g, "--t", "1"]).contains("\nsize,edges,optimal,nodes,witness\n")
    );
    let refused = tsparsity(&["solve", "--in", g, "--method", "bruteforce"]);
    assert_eq!(refused.status.code(), Some(1));
    let size = |s: &str| {
        s.lines()
            .last()
            .unwrap()
            .split(',')
            .next()
            .unwrap()
            .to_string()
    };
    let small = dir.path().join("h.txt");
    let h = small.to_str().unwrap();
    stdout(&[
        "sample", "--n", "14", "--p", "0.5", "--seed", "6", "--out", h,
    ]);
    assert_eq!(
        size(&stdout(&["solve", "--in", h, "--t", "3/2"])),
        size(&stdout(&[
            "solve",
            "--in",
            h,
            "--t",
            "3/2",
            "--method",
            "bruteforce"
        ]))
    );
}

#[test]
fn triangle_has_independence_number_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("triangle.txt");
    std::fs::write(&path, "3 3\n0 1\n0 2\n1 2\n").unwrap();
    let out = stdout(&["solve", "--in", path.to_str().unwrap(), "--t", "0"]);
    assert!(out.lines().last().unwrap().starts_with("1,0,true,"));
}

#[test]
fn exit_codes() {
    assert_eq!(tsparsity(&["solve", "--nope"]).status.code(), Some(2));
    assert_eq!(
        tsparsity(&["predict", "--n", "4", "--p", "0.5"])
            .status
            .code(),
        Some(1)
    );
    let missing = tsparsity(&["solve", "--in", "/definitely/missing.txt"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/definitely/missing.txt"));
    assert_eq!(tsparsity(&["--help"]).status.code(), Some(0));
}

#[test]
fn repeated_runs_are_identical() {
    let runs: &[&[&str]] = &[
        &["rates", "--lambda-star", "--p", "0.5", "--x", "0.25"],
        &[
            "rates", "--cdf", "--p", "0.3", "--trials", "200", "--r", "40",
        ],
        &[
            "predict",
            "--n",
            "100,10000",
            "--p",
            "0.5",
            "--t",
            "0,1,5/2",
        ],
        &["sample", "--n", "30", "--p", "0.4", "--seed", "9"],
        &["moments", "--n", "10000", "--p", "0.5"],
        &[
            "moments",
            "--n",
            "10000",
            "--p",
            "0.5",
            "--t",
            "1",
            "--k-range",
            "10..40",
        ],
        &[
            "experiment",
            "--n",
            "40",
            "--p",
            "0.5",
            "--t",
            "1",
            "--samples",
            "8",
            "--seed",
            "3",
        ],
    ];
    for args in runs {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
    let base = [
        "experiment",
        "--n",
        "50",
        "--p",
        "0.5",
        "--samples",
        "12",
        "--format",
        "jsonl",
    ];
    let one = stdout(&[&base[..], &["--workers", "1"]].concat());
    let four = stdout(&[&base[..], &["--workers", "4"]].concat());
    assert_eq!(one, four);
}

#[test]
fn experiment_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.csv");
    let head = stdout(&[
        "experiment",
        "--n",
        "30",
        "--p",
        "0.5",
        "--samples",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(head.lines().all(|l| l.starts_with('#')));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("value,count,predicted_low,predicted_high,hit_rate"));
}
