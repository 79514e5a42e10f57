use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use condspec::io::parse_field_csv;
use condspec::spectra::Quantity;
use serde_json::Value;

fn condspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_condspec"))
        .args(args)
        .output()
        .expect("spawn condspec")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixtures(dir: &Path) -> PathBuf {
    let o = condspec(&[
        "reproduce-paper",
        "--table",
        "2.1",
        "--dump-fixtures",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    dir.to_path_buf()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn missing_matrix_file_is_an_input_error() {
    let o = condspec(&["pseudospectrum", "definitely-missing.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("definitely-missing.json"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(condspec(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(condspec(&["kappa", "a.json"]).status.code(), Some(2));
    assert_eq!(
        condspec(&["reproduce-paper", "--table", "9.9"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn kappa_on_rhs_example_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let fx = fixtures(dir.path());
    let a = fx.join("ex3_1_rhs/A.json");
    let o = condspec(&["kappa", a.to_str().unwrap(), "--z", "2,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).lines().any(|l| l == "κ=0.25562528"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn kappa_at_an_eigenvalue_reports_zero() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(
        dir.path(),
        "d.json",
        r#"{"rows":2,"cols":2,"entries":[[1.1,0],[0,0],[0,0],[2,0]]}"#,
    );
    let o = condspec(&["kappa", &a, "--z", "2,0", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kappa"], 0.0);
    assert_eq!(v["resolvent_norm"], "inf");
}

#[test]
fn reproduce_all_passes_and_strict_flags_misprints() {
    let o = condspec(&["reproduce-paper", "--table", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(
        text.lines()
            .filter(|l| l.starts_with("table ") && l.ends_with("-> PASS"))
            .count(),
        6
    );
    assert_eq!(text, stdout(&condspec(&["reproduce-paper"])));

    let strict = condspec(&["reproduce-paper", "--strict"]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(stdout(&strict).contains("FAIL"));
}

#[test]
fn grid_outputs_in_every_format() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(
        dir.path(),
        "d.json",
        r#"{"rows":2,"cols":2,"entries":[[1.1,0],[0,0],[0,0],[3,0]]}"#,
    );
    let csv = dir.path().join("f.csv");
    let base = [
        "--eps", "0.2,0.1", "--grid", "0,4,-1,1", "--nx", "41", "--ny", "21",
    ];

    let mut args = vec!["pseudospectrum", a.as_str()];
    args.extend(base);
    args.extend(["--output", csv.to_str().unwrap()]);
    assert_eq!(condspec(&args).status.code(), Some(0));
    let field = parse_field_csv(&std::fs::read_to_string(&csv).unwrap(), Quantity::Kappa1).unwrap();
    assert_eq!((field.grid.nx, field.grid.ny), (41, 21));
    // normal matrix: kappa1 is the distance to the nearest eigenvalue
    let z = field.grid.node(0, 10);
    assert!((field.get(0, 10) - (z.re - 1.1).abs()).abs() < 1e-12);

    let mut args = vec!["condspectrum", a.as_str()];
    args.extend(base);
    args.extend(["--format", "json"]);
    let o = condspec(&args);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["quantity"], "kappa");
    assert_eq!(v["contours"]["levels"], serde_json::json!([0.1, 0.2]));
    assert_eq!(v["field"]["values"].as_array().unwrap().len(), 41 * 21);

    let mut args = vec!["pseudospectrum", a.as_str()];
    args.extend(base);
    args.extend(["--format", "svg"]);
    let o = condspec(&args);
    assert_eq!(o.status.code(), Some(0));
    let svg = stdout(&o);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("<path"));
}

#[test]
fn condspectrum_rejects_levels_above_one() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(
        dir.path(),
        "d.json",
        r#"{"rows":1,"cols":1,"entries":[[1,0]]}"#,
    );
    assert_eq!(
        condspec(&["condspectrum", &a, "--eps", "1.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        condspec(&["pseudospectrum", &a, "--eps", "-1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn perturbation_reports() {
    let dir = tempfile::tempdir().unwrap();
    let fx = fixtures(dir.path()).join("ex3_1_rhs");
    let p = |n: &str| fx.join(n).to_str().unwrap().to_owned();

    let o = condspec(&[
        "perturb-rhs",
        &p("A.json"),
        "--z",
        "1,-1",
        "--y",
        &p("y.json"),
        "--dy",
        &p("row0_dy.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["holds"], true);
    let (lo, r, hi) = (
        v["lower"].as_f64().unwrap(),
        v["rel_observed"].as_f64().unwrap(),
        v["upper"].as_f64().unwrap(),
    );
    assert!(lo <= r && r <= hi);

    let n = condspec::io::parse_matrix_file(&fx.join("A.json"))
        .unwrap()
        .rows();
    let da = write(dir.path(), "da.json", &small_perturbation(n, 1e-3));
    let o = condspec(&[
        "perturb-op",
        &p("A.json"),
        "--z",
        "2,0",
        "--y",
        &p("y.json"),
        "--da",
        &da,
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(
        serde_json::from_str::<Value>(&stdout(&o)).unwrap()["holds"],
        true
    );

    let o = condspec(&[
        "perturb-joint",
        &p("A.json"),
        "--z",
        "2,0",
        "--y",
        &p("y.json"),
        "--da",
        &da,
        "--dy",
        &p("row0_dy.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        serde_json::from_str::<Value>(&stdout(&o)).unwrap()["holds"],
        true
    );

    let o = condspec(&[
        "perturb-rhs",
        &p("A.json"),
        "--z",
        "2,0",
        "--y",
        &da,
        "--dy",
        &p("row0_dy.json"),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

fn small_perturbation(n: usize, e: f64) -> String {
    let entries: Vec<String> = (0..n * n)
        .map(|k| {
            if k % (n + 1) == 0 {
                format!("[{e},0]")
            } else {
                "[0,0]".into()
            }
        })
        .collect();
    format!(
        r#"{{"rows":{n},"cols":{n},"entries":[{}]}}"#,
        entries.join(",")
    )
}

#[test]
fn distances() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(
        dir.path(),
        "s.json",
        r#"{"rows":2,"cols":2,"entries":[[-1,0],[0,0],[0,0],[-2,0]]}"#,
    );
    let o = condspec(&["dist-instability", &a]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["stable"], true);
    assert!(
        (v["d1_estimate"].as_f64().unwrap() - 1.0).abs() < 1e-8,
        "{v}"
    );

    let o = condspec(&["dist-singularity", &a]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["d2"].as_f64().unwrap() - 1.0).abs() < 1e-12, "{v}");
    assert_eq!(v["scalar_matrix"], false);

    let u = write(
        dir.path(),
        "u.json",
        r#"{"rows":1,"cols":1,"entries":[[1,0]]}"#,
    );
    assert_eq!(condspec(&["dist-instability", &u]).status.code(), Some(2));
}

#[test]
fn check_lemmas_random_is_reproducible() {
    let args = [
        "check-lemmas",
        "--random",
        "4",
        "--seed",
        "11",
        "--nx",
        "31",
        "--ny",
        "31",
    ];
    let o = condspec(&args);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["matrices"].as_array().unwrap().len(), 4);
    assert_eq!(
        v["matrices"][0]["certificates"].as_array().unwrap().len(),
        3 * 3
    );
    assert_eq!(stdout(&o), stdout(&condspec(&args)));
    assert_eq!(condspec(&["check-lemmas"]).status.code(), Some(2));
}
