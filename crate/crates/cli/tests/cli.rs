//! Black-box tests of the `qsearch` binary: exit codes, file formats, and
//! cross-format fit agreement.

use std::path::Path;
use std::process::{Command, Output};

fn qsearch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsearch"))
        .args(args)
        .output()
        .expect("spawn qsearch")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn usage_errors_exit_with_code_2() {
    // odd n with a two-to-one promise
    let out = qsearch(&[
        "run",
        "--alg",
        "naive-collision",
        "--n",
        "7",
        "--trials",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even"));

    // neither --n nor --grid
    let out = qsearch(&["run", "--alg", "bht-collision"]);
    assert_eq!(out.status.code(), Some(2));

    // descending grid
    let out = qsearch(&["run", "--alg", "bht-collision", "--grid", "64,32"]);
    assert_eq!(out.status.code(), Some(2));

    // unknown algorithm (clap rejects the value)
    let out = qsearch(&["run", "--alg", "grovers", "--n", "16"]);
    assert_eq!(out.status.code(), Some(2));

    // zero trials
    let out = qsearch(&[
        "run",
        "--alg",
        "bht-collision",
        "--n",
        "16",
        "--trials",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_emits_one_record_per_trial_and_is_stable() {
    let out = qsearch(&[
        "run",
        "--alg",
        "naive-collision",
        "--n",
        "16",
        "--trials",
        "1",
        "--seed",
        "0",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 1);

    let again = qsearch(&[
        "run",
        "--alg",
        "naive-collision",
        "--n",
        "16",
        "--trials",
        "1",
        "--seed",
        "0",
    ]);
    assert_eq!(out.stdout, again.stdout);

    // 6-point grid x 100 trials -> 600 records
    let out = qsearch(&[
        "run",
        "--alg",
        "classical-birthday",
        "--grid",
        "16,32,64,128,256,512",
        "--trials",
        "100",
        "--seed",
        "1",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).lines().count(), 600);
}

#[test]
fn fit_agrees_between_jsonl_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let jsonl = dir.path().join("records.jsonl");
    let csv = dir.path().join("records.csv");
    let run_args = |format: &str, out: &Path| {
        vec![
            "run".to_string(),
            "--alg".into(),
            "bht-collision".into(),
            "--grid".into(),
            "256,512,1024,2048".into(),
            "--trials".into(),
            "30".into(),
            "--seed".into(),
            "5".into(),
            "--format".into(),
            format.to_string(),
            "--out".into(),
            out.display().to_string(),
        ]
    };
    let out = Command::new(env!("CARGO_BIN_EXE_qsearch"))
        .args(run_args("jsonl", &jsonl))
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_qsearch"))
        .args(run_args("csv", &csv))
        .output()
        .unwrap();
    assert!(out.status.success());

    let fit_jsonl = qsearch(&[
        "fit",
        "--input",
        jsonl.to_str().unwrap(),
        "--metric",
        "queries",
    ]);
    let fit_csv = qsearch(&[
        "fit",
        "--input",
        csv.to_str().unwrap(),
        "--metric",
        "queries",
    ]);
    assert!(fit_jsonl.status.success());
    assert_eq!(stdout_of(&fit_jsonl), stdout_of(&fit_csv));
}

#[test]
fn fit_needs_three_distinct_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.jsonl");
    let out = qsearch(&[
        "run",
        "--alg",
        "classical-birthday",
        "--grid",
        "16,32",
        "--trials",
        "5",
        "--seed",
        "0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let fit = qsearch(&["fit", "--input", path.to_str().unwrap()]);
    assert_eq!(fit.status.code(), Some(2));
}

#[test]
fn gen_instance_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let out = qsearch(&[
        "gen-instance",
        "--kind",
        "distinctness",
        "--n",
        "12",
        "--planted",
        "1",
        "--seed",
        "8",
        "--out",
        inst.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&inst).unwrap()).unwrap();
    let pair = parsed["planted"][0].as_array().unwrap();
    let answer = format!("collision({},{})", pair[0], pair[1]);

    let out = qsearch(&[
        "verify",
        "--instance",
        inst.to_str().unwrap(),
        "--answer",
        &answer,
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "true");

    let out = qsearch(&[
        "verify",
        "--instance",
        inst.to_str().unwrap(),
        "--answer",
        "all-distinct",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "false");

    let out = qsearch(&[
        "verify",
        "--instance",
        inst.to_str().unwrap(),
        "--answer",
        "nonsense",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // infeasible generation parameters are a usage error
    let out = qsearch(&["gen-instance", "--kind", "two-to-one", "--n", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reproduce_paper_smoke() {
    // Tiny trial counts: checks wiring and table shape, not the fits.
    let out = qsearch(&["reproduce-paper", "--trials", "3", "--parallel-trials", "5"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("bht-collision"));
    assert!(text.contains("two-level-distinctness"));
    assert!(text.contains("ambainis (analytic)"));
    assert_eq!(text.matches("not significant").count(), 3);
    assert!(text.contains("sqrt(P)"));
}
