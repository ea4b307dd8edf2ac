use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nufreg::cli::{self, load_model};
use nufreg::forecast::{build_rule_base, predict};
use nufreg::fuznum::TrapezoidalFuzzyNumber;

const HEADER: &str = "x_l,x_m1,x_m2,x_r,y_l,y_m1,y_m2,y_r\n";

fn benchmark_csv() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/benchmark.csv")
}

fn nufreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nufreg"))
        .args(args)
        .output()
        .expect("spawn nufreg")
}

fn fit_to(dir: &Path) -> PathBuf {
    let model = dir.join("model.txt");
    let out = nufreg(&[
        "fit",
        "--input",
        benchmark_csv().to_str().unwrap(),
        "--output",
        model.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    model
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn exit_codes_by_category() {
    let dir = tempfile::tempdir().unwrap();
    let model = fit_to(dir.path());
    let one_row = write(dir.path(), "one.csv", &format!("{HEADER}1,1,1,1,2,2.5,2.5,3\n"));
    let bad_order = write(
        dir.path(),
        "order.csv",
        &format!("{HEADER}1,1,1,1,2,2.5,2.5,3\n2,2,2,2,5,5.7,5.5,6\n"),
    );
    let corrupt = write(dir.path(), "corrupt.txt", "nufreg-model\nformat_version = 1\n");
    let same_x = write(
        dir.path(),
        "same.csv",
        &format!("{HEADER}1,1,1,1,2,2.5,2.5,3\n1,1,1,1,5,5.5,5.5,6\n"),
    );
    let missing = dir.path().join("nope.csv");

    let cases: [(&[&str], i32); 6] = [
        (&["fit", "--input", one_row.to_str().unwrap(), "--output", "/dev/null"], 3),
        (&["fit", "--input", bad_order.to_str().unwrap(), "--output", "/dev/null"], 3),
        (&["predict", "--model", corrupt.to_str().unwrap(), "--x", "1"], 2),
        (&["fit", "--input", missing.to_str().unwrap(), "--output", "/dev/null"], 6),
        (&["curve", "--model", model.to_str().unwrap(), "--coef", "b2"], 2),
        (&["fit", "--input", same_x.to_str().unwrap(), "--output", "/dev/null"], 4),
    ];
    for (args, code) in cases {
        let out = nufreg(args);
        assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        if code != 2 || args[0] != "curve" {
            assert!(String::from_utf8_lossy(&out.stderr).starts_with("error["), "{args:?}");
        }
    }
}

#[test]
fn crisp_x_forms_agree() {
    let dir = tempfile::tempdir().unwrap();
    let model = fit_to(dir.path());
    let m = model.to_str().unwrap();
    let a = nufreg(&["predict", "--model", m, "--x", "1"]);
    let b = nufreg(&["predict", "--model", m, "--x", "1,1,1,1"]);
    let c = nufreg(&["predict", "--model", m, "--x", "1 1 1 1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn negative_x_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let model = fit_to(dir.path());
    let out = nufreg(&["predict", "--model", model.to_str().unwrap(), "--x", "-2,-1.5,-1,-0.5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn predict_matches_library_after_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let model = fit_to(dir.path());

    let data = cli::load_dataset(&benchmark_csv()).unwrap();
    let in_memory = cli::fit_dataset(&data, 21, 0).unwrap();
    let loaded = load_model(&model).unwrap();
    assert_eq!(loaded, in_memory);

    let x = TrapezoidalFuzzyNumber::new(2.5, 3.0, 3.0, 3.5).unwrap();
    let rules = build_rule_base(&in_memory.model, &in_memory.observations).unwrap();
    let expected = predict(&in_memory.model, &rules, &x).unwrap();

    let mut out = Vec::new();
    let got = cli::cmd_predict(&model, "2.5,3,3,3.5", &mut out).unwrap();
    assert_eq!(got, expected);
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains(&format!("response: {:.6}", expected.response)), "{text}");
}

#[test]
fn curve_prints_nested_levels() {
    let dir = tempfile::tempdir().unwrap();
    let model = fit_to(dir.path());
    for coef in ["b0", "b1"] {
        let out = nufreg(&["curve", "--model", model.to_str().unwrap(), "--coef", coef]);
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("alpha,lo,hi"));
        let rows: Vec<[f64; 3]> = lines
            .map(|l| {
                let v: Vec<f64> = l.split(',').map(|t| t.parse().unwrap()).collect();
                [v[0], v[1], v[2]]
            })
            .collect();
        assert_eq!(rows.len(), 21);
        assert_eq!(rows[0][0], 0.0);
        for w in rows.windows(2) {
            assert!(w[1][0] > w[0][0]);
            assert!(w[1][1] >= w[0][1] && w[1][2] <= w[0][2], "{coef}: {w:?}");
        }
        let top = rows[20];
        assert_eq!(top[0], 1.0);
        assert_eq!(top[1], top[2]);
    }
}

#[test]
fn fit_summary_and_report_run() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.txt");
    let fit = nufreg(&[
        "fit",
        "--input",
        benchmark_csv().to_str().unwrap(),
        "--output",
        model.to_str().unwrap(),
    ]);
    let summary = String::from_utf8(fit.stdout).unwrap();
    assert!(summary.contains("b1 = 2.200000"), "{summary}");

    let report = nufreg(&[
        "report",
        "--input",
        benchmark_csv().to_str().unwrap(),
        "--model",
        model.to_str().unwrap(),
    ]);
    assert!(report.status.success());
    let text = String::from_utf8(report.stdout).unwrap();
    assert!(text.contains("non-uniform total < uniform total"), "{text}");
}
