use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use ltlfo::acceptance::{lasso_accepts, oracle_eval};
use ltlfo::cli::read_formula;
use ltlfo::{build_automaton, to_nnf, LassoTrace};

fn data_files(ext: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == ext))
        .collect();
    files.sort();
    files
}

#[test]
fn automaton_and_oracle_agree_on_shipped_pairs() {
    let formulas = data_files("ltl");
    let lassos: Vec<(PathBuf, LassoTrace)> = data_files("json")
        .into_iter()
        .filter_map(|p| {
            let t = LassoTrace::parse(&fs::read_to_string(&p).unwrap()).ok()?;
            Some((p, t))
        })
        .collect();
    assert!(formulas.len() >= 3 && lassos.len() >= 2);
    for f in &formulas {
        let phi = read_formula(f).unwrap();
        let a = build_automaton(&to_nnf(&phi)).unwrap();
        for (p, t) in &lassos {
            assert_eq!(
                lasso_accepts(&a, t).unwrap(),
                oracle_eval(&phi, t, 0).unwrap(),
                "{} on {}",
                f.display(),
                p.display()
            );
        }
    }
}

#[test]
fn binary_usage_error_exits_3() {
    let bin = env!("CARGO_BIN_EXE_ltlfo");
    let status = Command::new(bin)
        .arg("compile")
        .stderr(Stdio::null())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
    let status = Command::new(bin)
        .arg("bogus")
        .stderr(Stdio::null())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));
    let out = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("fuzz"));
}

#[test]
fn binary_streams_monitor_verdicts() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let out = Command::new(env!("CARGO_BIN_EXE_ltlfo"))
        .args(["monitor", "--formula"])
        .arg(data.join("first_buy.ltl"))
        .arg("--trace")
        .arg(data.join("orders.jsonl"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "0\tTRUE\n1\tTRUE\n2\tTRUE\nRESULT TRUE\n"
    );
}
