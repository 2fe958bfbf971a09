//! End-to-end tests of the command-line interface: exit codes, artifact
//! shapes, and byte-for-byte reproducibility.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amoeba"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

#[test]
fn admissible_fermi_interval() {
    let spectrum = fixture("fermi.json");
    let spectrum = spectrum.to_str().unwrap();
    let out = run(&["admissible", "--spectrum", spectrum, "--u", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "false");

    let out = run(&["admissible", "--spectrum", spectrum, "--u", "1/2"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "true");

    let out = run(&["admissible", "--spectrum", spectrum, "--u", "999999999/1000000000"]);
    assert_eq!(stdout_of(&out).trim(), "true");
}

#[test]
fn admissible_planck_ray() {
    let spectrum = fixture("planck.json");
    let spectrum = spectrum.to_str().unwrap();
    let out = run(&["admissible", "--spectrum", spectrum, "--u", "1000000"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out).trim(), "true");
    let out = run(&["admissible", "--spectrum", spectrum, "--u", "1/2"]);
    assert_eq!(stdout_of(&out).trim(), "false");
}

#[test]
fn ensemble_compare_fermi_is_exact() {
    let spectrum = fixture("fermi.json");
    let out = run(&[
        "ensemble-compare",
        "--spectrum",
        spectrum.to_str().unwrap(),
        "--u",
        "1/2",
        "--systems",
        "4,8,12",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout_of(&out);
    assert!(text.starts_with("# config "));
    let mut lines = text.lines();
    lines.next();
    assert_eq!(lines.next().unwrap(), "N,k,exact,asymptotic,rel_error");
    for line in lines {
        assert!(line.ends_with(",0"), "nonzero error row: {line}");
    }
}

#[test]
fn ensemble_exact_three_level() {
    let spectrum = fixture("three_level.json");
    let out = run(&[
        "ensemble-exact",
        "--spectrum",
        spectrum.to_str().unwrap(),
        "--systems",
        "3",
        "--energy",
        "3",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["total_states"], "7");
    assert_eq!(value["averages"][0], "6/7");
    assert_eq!(value["averages"][1], "9/7");
    assert_eq!(value["averages"][2], "6/7");
}

#[test]
fn ensemble_solve_reports_temperature() {
    let spectrum = fixture("fermi.json");
    let out = run(&[
        "ensemble-solve",
        "--spectrum",
        spectrum.to_str().unwrap(),
        "--u",
        "1/2",
        "--systems",
        "10",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["temperature"][0], "inf");
    assert!((value["entropy"].as_f64().unwrap() - 2.0f64.ln()).abs() < 1e-12);
    assert!((value["occupations"][0].as_f64().unwrap() - 5.0).abs() < 1e-9);
}

#[test]
fn order_of_harnack_hole() {
    let poly = fixture("harnack.json");
    let out = run(&[
        "order",
        "--poly",
        poly.to_str().unwrap(),
        "--x",
        "0,0",
        "--phases",
        "32",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["order"], serde_json::json!([1, 1]));
}

#[test]
fn coeffs_central_binomial() {
    let p = fixture("one2d.json");
    let q = fixture("line.json");
    let out = run(&[
        "coeffs",
        "--poly-p",
        p.to_str().unwrap(),
        "--poly-q",
        q.to_str().unwrap(),
        "--vertex",
        "0,0",
        "--alpha",
        "2,2",
    ]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(value["coefficient"], "6");
}

#[test]
fn amoeba_render_is_reproducible() {
    let poly = fixture("line.json");
    let args = [
        "amoeba",
        "--poly",
        poly.to_str().unwrap(),
        "--x1",
        "-2:1:41",
        "--phases",
        "32",
    ];
    let first = run(&args);
    assert!(first.status.success());
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "outputs differ between runs");
    let text = stdout_of(&first);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config "));
    assert_eq!(lines.next().unwrap(), "x1,x2");
    assert!(lines.count() > 100);
}

#[test]
fn asymp_ratio_converges() {
    let p = fixture("one2d.json");
    let q = fixture("line.json");
    let out = run(&[
        "asymp",
        "--poly-p",
        p.to_str().unwrap(),
        "--poly-q",
        q.to_str().unwrap(),
        "--q",
        "1,1",
        "--k",
        "50",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let row = text.lines().last().unwrap();
    let ratio: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
    assert!((ratio - 1.0).abs() < 0.01, "ratio {ratio}");
}

#[test]
fn contour_of_line_has_branches() {
    let poly = fixture("line.json");
    let out = run(&[
        "contour",
        "--poly",
        poly.to_str().unwrap(),
        "--sweep",
        "24",
        "--seeds",
        "4",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    let mut lines = text.lines();
    lines.next();
    assert_eq!(lines.next().unwrap(), "q_angle,x1,x2,branch_id");
    assert!(lines.count() >= 8);
}

#[test]
fn components_grid_finds_the_hole() {
    let poly = fixture("harnack.json");
    let out = run(&[
        "components",
        "--poly",
        poly.to_str().unwrap(),
        "--x1",
        "-4:4:20",
        "--x2",
        "-4:4:20",
        "--phases",
        "16",
        "--tol",
        "0.08",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let value: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let orders: Vec<Vec<i64>> = value["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            c["order"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_i64().unwrap())
                .collect()
        })
        .collect();
    assert!(orders.contains(&vec![1, 1]), "orders: {orders:?}");
}

#[test]
fn worker_count_does_not_change_output() {
    let poly = fixture("harnack.json");
    let base = [
        "amoeba",
        "--poly",
        poly.to_str().unwrap(),
        "--x1",
        "-3:3:31",
        "--phases",
        "32",
    ];
    let default_pool = run(&base);
    assert!(default_pool.status.success());
    let mut single = base.to_vec();
    single.extend(["--workers", "1"]);
    let single_pool = run(&single);
    assert!(single_pool.status.success());
    assert_eq!(default_pool.stdout, single_pool.stdout);
}

#[test]
fn bad_flags_exit_two() {
    let out = run(&["amoeba", "--nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["order", "--poly", "/nonexistent.json", "--x", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn inadmissible_solve_exits_two() {
    let spectrum = fixture("fermi.json");
    let out = run(&[
        "ensemble-solve",
        "--spectrum",
        spectrum.to_str().unwrap(),
        "--u",
        "3/2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn boundary_solve_exits_three() {
    let spectrum = fixture("fermi.json");
    let out = run(&[
        "ensemble-solve",
        "--spectrum",
        spectrum.to_str().unwrap(),
        "--u",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("boundary"), "stderr: {err}");
}
