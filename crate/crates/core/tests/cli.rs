use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use tempfile::NamedTempFile;

use ltlfo::cli::{run, Cli, EXIT_INPUT_ERROR, EXIT_RESOURCE_LIMIT};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples/data")
        .join(name)
}

fn temp(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

fn ltlfo(args: &[&str]) -> (i32, String, String) {
    let cli = Cli::try_parse_from(std::iter::once("ltlfo").chain(args.iter().copied())).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&cli, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compile_until_lists_closure() {
    let f = temp(r#""a" = "b" U "c" = "d""#);
    let (code, out, _) = ltlfo(&["compile", "--formula", path(f.path())]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 5, "{out}");
    assert_eq!(lines[0], "0\taccepting\tTOP");
    assert_eq!(lines[1], "1\t-\tBOTTOM");
    assert!(lines[2].starts_with("2\tinitial\t"), "{out}");
    assert_eq!(out.matches("accepting").count(), 1);
}

#[test]
fn compile_release_is_accepting() {
    let f = temp(r#""a" = "b" R "c" = "d""#);
    let (code, out, _) = ltlfo(&["compile", "--formula", path(f.path())]);
    assert_eq!(code, 0);
    assert!(out
        .lines()
        .nth(2)
        .unwrap()
        .starts_with("2\tinitial,accepting\t"));
}

#[test]
fn compile_stats_and_dot() {
    let (code, out, _) = ltlfo(&[
        "compile",
        "--formula",
        path(&data("order_confirmed.ltl")),
        "--stats",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("temporal-depth\t2"), "{out}");
    assert!(out.contains("variables\t2"), "{out}");
    let (code, dot, _) = ltlfo(&[
        "compile",
        "--formula",
        path(&data("order_confirmed.ltl")),
        "--dot",
    ]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("digraph"));
}

#[test]
fn malformed_formula_is_input_error() {
    let f = temp(r#"G (exists x in "/a" : x = )"#);
    let (code, out, err) = ltlfo(&["compile", "--formula", path(f.path())]);
    assert_eq!(code, EXIT_INPUT_ERROR);
    assert!(out.is_empty());
    assert!(err.contains("error"), "{err}");
}

#[test]
fn unbound_variable_is_input_error() {
    let f = temp(r#"x = "a""#);
    let (code, _, err) = ltlfo(&["compile", "--formula", path(f.path())]);
    assert_eq!(code, EXIT_INPUT_ERROR);
    assert!(err.contains('x'));
}

#[test]
fn monitor_exit_codes_follow_verdict() {
    let cases = [
        ("first_buy.ltl", "orders.jsonl", 0, "TRUE"),
        ("never_sell.ltl", "sells.jsonl", 1, "FALSE"),
        ("order_confirmed.ltl", "orders.jsonl", 2, "INCONCLUSIVE"),
    ];
    for (formula, trace, want, verdict) in cases {
        let (code, out, _) = ltlfo(&[
            "monitor",
            "--formula",
            path(&data(formula)),
            "--trace",
            path(&data(trace)),
        ]);
        assert_eq!(code, want, "{formula} on {trace}: {out}");
        assert_eq!(out.lines().last().unwrap(), format!("RESULT {verdict}"));
        assert_eq!(out.lines().count(), 4, "{out}");
    }
}

#[test]
fn monitor_prints_running_verdicts() {
    let (_, out, _) = ltlfo(&[
        "monitor",
        "--formula",
        path(&data("never_sell.ltl")),
        "--trace",
        path(&data("sells.jsonl")),
    ]);
    assert_eq!(out, "0\tINCONCLUSIVE\n1\tFALSE\n2\tFALSE\nRESULT FALSE\n");
}

#[test]
fn malformed_trace_is_input_error() {
    let t = temp("{\"message\":{\"a\":\"b\"}}\n{not json\n");
    let (code, _, err) = ltlfo(&[
        "monitor",
        "--formula",
        path(&data("never_sell.ltl")),
        "--trace",
        path(t.path()),
    ]);
    assert_eq!(code, EXIT_INPUT_ERROR);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn accept_and_oracle_agree_on_shipped_lassos() {
    for (formula, lasso, accepted) in [
        ("order_confirmed.ltl", "orders_lasso.json", true),
        ("order_confirmed.ltl", "orders_unconfirmed.json", false),
    ] {
        let args = |cmd| {
            ltlfo(&[
                cmd,
                "--formula",
                path(&data(formula)),
                "--lasso",
                path(&data(lasso)),
            ])
        };
        let (code, out, _) = args("accept");
        assert_eq!(code, if accepted { 0 } else { 1 });
        assert_eq!(
            out,
            if accepted {
                "RESULT ACCEPT\n"
            } else {
                "RESULT REJECT\n"
            }
        );
        let (code, out, _) = args("oracle");
        assert_eq!(code, if accepted { 0 } else { 1 });
        assert_eq!(
            out,
            if accepted {
                "RESULT TRUE\n"
            } else {
                "RESULT FALSE\n"
            }
        );
    }
}

#[test]
fn empty_loop_is_input_error() {
    let (code, out, err) = ltlfo(&[
        "accept",
        "--formula",
        path(&data("never_sell.ltl")),
        "--lasso",
        path(&data("empty_loop.json")),
    ]);
    assert_eq!(code, EXIT_INPUT_ERROR);
    assert!(out.is_empty());
    assert!(err.contains("loop"), "{err}");
}

#[test]
fn state_limit_reports_resource_error() {
    let (code, out, _) = ltlfo(&[
        "accept",
        "--formula",
        path(&data("order_confirmed.ltl")),
        "--lasso",
        path(&data("orders_lasso.json")),
        "--state-limit",
        "1",
    ]);
    assert_eq!(code, EXIT_RESOURCE_LIMIT);
    assert_eq!(out, "RESULT LIMIT\n");
}

#[test]
fn missing_file_is_input_error() {
    let (code, _, _) = ltlfo(&["compile", "--formula", "/nonexistent/f.ltl"]);
    assert_eq!(code, EXIT_INPUT_ERROR);
}

#[test]
fn fuzz_default_run_agrees() {
    let (code, out, err) = ltlfo(&["fuzz", "--seed", "42", "--count", "200"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().last().unwrap(), "AGREE 200/200");
    assert!(!out.contains("FAIL"));
    assert!(err.contains("elapsed"));
}

#[test]
fn fuzz_output_is_reproducible() {
    let a = ltlfo(&["fuzz", "--seed", "7", "--count", "30"]).1;
    let b = ltlfo(&["fuzz", "--seed", "7", "--count", "30"]).1;
    assert_eq!(a, b);
}
