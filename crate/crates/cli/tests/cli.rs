use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use boxcox_cli::estimate::Report;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_boxcox"))
}

fn textile() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/textile.csv")
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn estimate_report(dir: &Path, name: &str, extra: &[&str]) -> (Output, String) {
    let report = dir.join(name);
    let out = run(bin()
        .args(["estimate", "--input"])
        .arg(textile())
        .args(["--column", "textile", "--report"])
        .arg(&report)
        .args(extra));
    let text = std::fs::read_to_string(&report).unwrap_or_default();
    (out, text)
}

#[test]
fn textile_report_matches_reference_estimates() {
    let dir = tempfile::tempdir().unwrap();
    let (out, text) = estimate_report(dir.path(), "r.json", &[]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Report = serde_json::from_str(&text).unwrap();
    let want = [
        ("SW", -0.06),
        ("AD", -0.08),
        ("CVM", -0.1),
        ("PT", 0.02),
        ("SF", -0.06),
        ("LT", -0.06),
        ("JB", -0.06),
    ];
    for (code, lambda) in want {
        let row = report.methods.iter().find(|m| m.method == code).unwrap();
        assert_eq!(row.lambda_hat, lambda, "{code}");
        assert_eq!(row.expansions, 0);
        assert_eq!(row.validation.adjusted_p.sw, 1.0, "{code}");
        assert_eq!(row.validation.adjusted_p.sf, 1.0, "{code}");
        assert_eq!(row.validation.adjusted_p.jb, 1.0, "{code}");
    }
    let ac = report.methods.iter().find(|m| m.method == "AC").unwrap();
    assert!((ac.lambda_hat + 0.044).abs() <= 0.02, "{}", ac.lambda_hat);
    assert_eq!(report.n, 27);
    assert_eq!(report.shift, 0.0);
    assert!(!report.raw_screening.passed);
    let p = report.raw_screening.raw_p.sw;
    assert!((p - 3.031e-5).abs() < 1e-8, "{p}");
}

#[test]
fn report_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (_, a) = estimate_report(dir.path(), "a.json", &["--seed", "5"]);
    let (_, b) = estimate_report(dir.path(), "b.json", &["--seed", "5"]);
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn report_round_trips_at_printed_precision() {
    let dir = tempfile::tempdir().unwrap();
    let (_, text) = estimate_report(dir.path(), "r.json", &["--method", "sw,ad,ac"]);
    let report: Report = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(again, text);
    for m in &report.methods {
        let l = m.lambda_hat;
        assert_eq!((l * 1000.0).round() / 1000.0, l);
        for p in [m.validation.adjusted_p.sw, m.validation.raw_p.jb] {
            assert_eq!((p * 1000.0).round() / 1000.0, p);
        }
    }
}

#[test]
fn transformed_and_plot_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.csv");
    let p = dir.path().join("p.csv");
    let out = run(bin()
        .args(["estimate", "--input"])
        .arg(textile())
        .args(["--method", "sw,ac", "--transformed"])
        .arg(&t)
        .arg("--plot-data")
        .arg(&p)
        .args(["--convention", "simple"]));
    assert_eq!(out.status.code(), Some(0));
    let tt = std::fs::read_to_string(&t).unwrap();
    let mut lines = tt.lines();
    assert_eq!(lines.next(), Some("raw,SW,AC"));
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(first[0], 674.0);
    assert!((first[1] - 674f64.powf(-0.06)).abs() < 1e-12);
    assert_eq!(tt.lines().count(), 28);

    let pp = std::fs::read_to_string(&p).unwrap();
    assert!(pp.starts_with("series,x,density\n"));
    for series in ["raw", "SW", "AC"] {
        let rows: Vec<(f64, f64)> = pp
            .lines()
            .skip(1)
            .filter(|l| l.starts_with(&format!("{series},")))
            .map(|l| {
                let f: Vec<&str> = l.split(',').collect();
                (f[1].parse().unwrap(), f[2].parse().unwrap())
            })
            .collect();
        assert!(rows.len() > 100, "{series}");
        let area: f64 = rows
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * 0.5 * (w[0].1 + w[1].1))
            .sum();
        assert!((area - 1.0).abs() < 0.02, "{series}: {area}");
    }
}

#[test]
fn failed_validation_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bimodal.txt");
    let text: String = (1..=10)
        .chain(1000..1010)
        .map(|v| format!("{v}\n"))
        .collect();
    std::fs::write(&path, text).unwrap();
    let out = run(bin()
        .args(["estimate", "--method", "sw", "--input"])
        .arg(&path));
    assert_eq!(out.status.code(), Some(2));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!report.all_passed);
}

#[test]
fn empty_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    std::fs::write(&path, "").unwrap();
    let out = run(bin().args(["estimate", "--input"]).arg(&path));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no data rows"));
}

#[test]
fn bad_cell_error_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "a,b\n1,q\n").unwrap();
    let out = run(bin()
        .args(["estimate", "--column", "b", "--input"])
        .arg(&path));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn too_few_observations_for_a_method() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("six.txt");
    std::fs::write(&path, "1.2\n2.5\n3.1\n4.8\n5.0\n7.7\n").unwrap();
    let out = run(bin()
        .args(["estimate", "--method", "pt", "--input"])
        .arg(&path));
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("PT") || err.contains("Pearson"), "{err}");
}

#[test]
fn output_may_not_overwrite_input() {
    let out = run(bin()
        .args(["estimate", "--input"])
        .arg(textile())
        .arg("--report")
        .arg(textile()));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_study2_lambda_zero() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let out = run(bin()
        .args([
            "simulate",
            "--study",
            "II",
            "--n",
            "20",
            "--lambda",
            "0",
            "--sigma",
            "5",
            "--method",
            "sw",
            "--replications",
            "1000",
            "--seed",
            "7",
            "--output",
        ])
        .arg(&csv));
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("study,n,mu,sigma,true_lambda,method,bias,se,mse,failures,replications,seed")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..6], &["II", "20", "0", "5", "0", "SW"]);
    let bias: f64 = row[6].parse().unwrap();
    assert!(bias.abs() <= 0.01, "{bias}");
    assert_eq!(row[10], "1000");
    assert_eq!(row[11], "7");
}

#[test]
fn simulate_is_byte_identical() {
    let args = [
        "simulate",
        "--study",
        "II",
        "--n",
        "20",
        "--lambda",
        "-1,2",
        "--sigma",
        "1",
        "--method",
        "sw,jb,ac",
        "--replications",
        "40",
        "--ac-reps",
        "10",
        "--seed",
        "3",
    ];
    let a = run(bin().args(args));
    let b = run(bin().args(args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        String::from_utf8_lossy(&a.stdout).lines().count(),
        1 + 2 * 3
    );
}

#[test]
fn simulate_rejects_study1_lambda_zero() {
    let out = run(bin().args([
        "simulate", "--study", "I", "--mu", "5", "--sigma", "1", "--lambda", "0", "--n", "20",
    ]));
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("lambda != 0"), "{err}");
}

#[test]
fn simulate_study1_needs_paired_parameters() {
    let out = run(bin().args(["simulate", "--study", "I", "--lambda", "2"]));
    assert_eq!(out.status.code(), Some(1));
}
