use std::process::{Command, Output};

use clap::Parser;
use powerfree_cli::output::Cell;
use powerfree_cli::{
    cmd_count, cmd_eval, cmd_verify, EvalArgs, RunConfig, SetArgs, VerifyArgs, EXIT_ERROR, EXIT_OK,
    EXIT_VIOLATION,
};

fn powerfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powerfree"))
        .args(args)
        .env("POWERFREE_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[derive(Parser)]
struct VerifyCli {
    #[command(flatten)]
    args: VerifyArgs,
}

#[derive(Parser)]
struct EvalCli {
    #[command(flatten)]
    args: EvalArgs,
}

fn verify_args(a: &[&str]) -> VerifyArgs {
    VerifyCli::parse_from(std::iter::once("verify").chain(a.iter().copied())).args
}

fn eval_args(a: &[&str]) -> EvalArgs {
    EvalCli::parse_from(std::iter::once("eval").chain(a.iter().copied())).args
}

fn real(c: &Cell) -> f64 {
    match c {
        Cell::Real(v) => *v,
        Cell::Int(v) => *v as f64,
        other => panic!("not numeric: {other:?}"),
    }
}

#[test]
fn eval_palindromes_of_length_three_at_zero() {
    let o = powerfree(&[
        "eval",
        "--set",
        "palindromes",
        "--base",
        "10",
        "--length",
        "3",
        "--t",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let text = stdout(&o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let re = header.iter().position(|c| *c == "re").unwrap();
    let im = header.iter().position(|c| *c == "im").unwrap();
    assert_eq!(row[re], "90");
    assert_eq!(row[im], "0");
}

#[test]
fn eval_cross_check_agrees() {
    let cfg = RunConfig::default();
    for args in [
        vec![
            "--set",
            "palindromes",
            "--base",
            "7",
            "--length",
            "5",
            "--t",
            "0.1234",
            "--cross-check",
        ],
        vec![
            "--set",
            "missing",
            "--base",
            "10",
            "--digit",
            "5",
            "--length",
            "4",
            "--t",
            "0.377",
            "--cross-check",
        ],
        vec![
            "--set",
            "reversible",
            "--base",
            "3",
            "--length",
            "6",
            "--alpha",
            "0.21",
            "--beta",
            "-0.4",
            "--cross-check",
        ],
        vec![
            "--set",
            "palindromes",
            "--odd",
            "--base",
            "10",
            "--x",
            "100000",
            "--t",
            "0.5",
            "--cross-check",
        ],
        vec![
            "--set",
            "missing",
            "--base",
            "10",
            "--digit",
            "0",
            "--x",
            "1000",
            "--t",
            "0.3",
            "--cross-check",
        ],
    ] {
        let o = cmd_eval(&cfg, &eval_args(&args)).unwrap();
        assert_eq!(o.exit, EXIT_OK, "{args:?}");
        let t = &o.table;
        let diff = real(&t.rows[0][t.column("abs_diff").unwrap()]);
        let norm = real(&t.rows[0][t.column("normalization").unwrap()]);
        assert!(diff <= 1e-9 * norm, "{args:?}: {diff}");
    }
}

#[test]
fn count_reports_density() {
    let set = SetArgs {
        set: Some(powerfree_cli::commands::SetChoice::All),
        ..Default::default()
    };
    let o = cmd_count(&RunConfig::default(), &set, 100, 2).unwrap();
    let t = &o.table;
    // 61 squarefree numbers below 100
    assert_eq!(
        t.rows[0][t.column("powerfree_count").unwrap()],
        Cell::Int(61)
    );
    assert_eq!(t.rows[0][t.column("raw_count").unwrap()], Cell::Int(99));
}

#[test]
fn count_guard_is_an_input_error() {
    let o = powerfree(&["count", "--set", "all", "--x", "1e12"]);
    assert_eq!(o.status.code(), Some(EXIT_ERROR));
    assert!(String::from_utf8_lossy(&o.stderr).contains("member count"));
}

#[test]
fn bad_input_exits_with_two() {
    let o = powerfree(&["count", "--set", "missing", "--base", "10", "--x", "1000"]);
    assert_eq!(o.status.code(), Some(EXIT_ERROR));
    let o = powerfree(&[
        "count",
        "--set",
        "palindromes",
        "--base",
        "1",
        "--x",
        "1000",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_ERROR));
}

#[test]
fn verify_dirichlet_linf_passes() {
    let o = cmd_verify(
        &RunConfig::default(),
        &verify_args(&[
            "--hypothesis",
            "linf",
            "--family",
            "dirichlet",
            "--x",
            "1000",
            "--d-max",
            "60",
        ]),
    )
    .unwrap();
    assert_eq!(o.exit, EXIT_OK);
    let last = o.table.rows.last().unwrap();
    assert_eq!(last[o.table.column("violations").unwrap()], Cell::Int(0));
}

#[test]
fn verify_double_sum_guard_exits_with_two() {
    let o = cmd_verify(
        &RunConfig::default(),
        &verify_args(&[
            "--hypothesis",
            "double-sum",
            "--family",
            "missing",
            "--base",
            "10",
            "--digit",
            "5",
            "--scales",
            "4,8",
        ]),
    )
    .unwrap();
    assert_eq!(o.exit, EXIT_ERROR);
    assert_eq!(o.table.rows.len(), 2);
}

#[test]
fn verify_double_sum_decreases_between_scales() {
    let o = cmd_verify(
        &RunConfig::default(),
        &verify_args(&[
            "--hypothesis",
            "double-sum",
            "--base",
            "10",
            "--digit",
            "5",
            "--coprime",
            "10",
            "--scales",
            "4,5",
        ]),
    )
    .unwrap();
    assert_eq!(o.exit, EXIT_OK);
}

#[test]
fn decreasing_is_deterministic_per_seed() {
    let a = powerfree(&[
        "--seed",
        "11",
        "verify",
        "--hypothesis",
        "decreasing",
        "--family",
        "phi-tilde",
        "--base",
        "5",
        "--samples",
        "50",
    ]);
    let b = powerfree(&[
        "--seed",
        "11",
        "verify",
        "--hypothesis",
        "decreasing",
        "--family",
        "phi-tilde",
        "--base",
        "5",
        "--samples",
        "50",
    ]);
    assert_eq!(a.status.code(), Some(EXIT_OK));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_output_and_config_file() {
    let dir = std::env::temp_dir().join(format!("powerfree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "# overrides\nformat = json\nseed = 42\n").unwrap();
    let out = dir.join("out.json");
    let o = powerfree(&[
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "alpha-table",
        "--b-min",
        "3",
        "--b-max",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["command"], "alpha-table");
    assert_eq!(doc["config"]["seed"], 42);
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 3);
    let a0 = records[0]["alpha"].as_f64().unwrap();
    assert!((a0 - 0.37837).abs() < 1e-4);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bad_config_key_is_rejected() {
    let dir = std::env::temp_dir().join(format!("powerfree-badcfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bad.cfg");
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let o = powerfree(&[
        "--config",
        cfg.to_str().unwrap(),
        "alpha-table",
        "--b-max",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_ERROR));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn violations_exit_with_one() {
    // a single power step cannot meet the tolerance
    let dir = std::env::temp_dir().join(format!("powerfree-viol-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("strict.cfg");
    std::fs::write(&cfg, "power_max_iterations = 1\n").unwrap();
    let o = powerfree(&[
        "--config",
        cfg.to_str().unwrap(),
        "alpha-table",
        "--b-max",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_VIOLATION));
    std::fs::remove_dir_all(&dir).ok();
}
