use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn poincare(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_poincare"))
        .args(args)
        .env_remove("POINCARE_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}); stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn num(v: &Value, key: &str) -> f64 {
    v[key]
        .as_f64()
        .unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn density_of_unit_disk_at_origin() {
    let out = poincare(&[
        "density",
        "--region",
        &data("disk.json"),
        "--point",
        "0,0",
        "--h",
        "0.0078",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((num(&v, "lambda") - 2.0).abs() < 2e-3, "{v}");
    assert_eq!(v["version"], poincare::VERSION);
    assert_eq!(v["config"]["command"], "density");
    assert_eq!(num(&v["config"], "h"), 0.0078);
}

#[test]
fn density_from_catalog_tag() {
    let out = poincare(&[
        "density",
        "--catalog",
        "unitdisk",
        "--point",
        "0.5,0",
        "--point",
        "-0.25,0.25",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((num(&v, "lambda") - 8.0 / 3.0).abs() < 1e-14);
    assert_eq!(v["values"].as_array().unwrap().len(), 2);
    assert_eq!(v["source"], "closed-form");
}

#[test]
fn nested_disks_in_oracle_mode_report_equality() {
    let out = poincare(&[
        "verify",
        "--region1",
        &data("disk.json"),
        "--region2",
        &data("disk2.json"),
        "--mode",
        "oracle",
        "--samples",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["equality_detected"], true);
    assert_eq!(v["passed"], true);
}

#[test]
fn two_point_capacity_is_zero_without_solving() {
    let out = poincare(&["pcap", "--compact", &data("twopoints.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(num(&v, "pcap"), 0.0);
    assert!(v["levels"].as_array().unwrap().is_empty());
}

#[test]
fn half_planes_pass_in_oracle_mode() {
    let out = poincare(&[
        "verify",
        "--region1",
        &data("upper.json"),
        "--region2",
        &data("right.json"),
        "--mode",
        "oracle",
        "--window",
        "-4,4,-4,4",
        "--samples",
        "200",
        "--tol",
        "1e-12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(num(&v, "min_ratio") >= 1.0 - 1e-12);
    assert_eq!(v["equality_detected"], false);

    let weak = poincare(&[
        "verify",
        "--check",
        "weak",
        "--region1",
        &data("upper.json"),
        "--region2",
        &data("right.json"),
        "--mode",
        "oracle",
        "--window",
        "-4,4,-4,4",
        "--samples",
        "50",
        "--tol",
        "1e-3",
    ]);
    assert_eq!(weak.status.code(), Some(0));
    assert!(num(&json(&weak), "min_ratio") >= std::f64::consts::FRAC_1_SQRT_2);
}

#[test]
fn disjoint_compacts_have_zero_left_side() {
    let out = poincare(&[
        "verify",
        "--check",
        "capacity",
        "--compact1",
        &data("kdisk_left.json"),
        "--compact2",
        &data("kdisk_right.json"),
        "--tol",
        "1e-2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(num(&v, "lhs"), 0.0);
    assert!(num(&v, "rhs") > 0.5);
}

#[test]
fn boundary_ratio_rises_toward_one() {
    let out = poincare(&[
        "boundary-ratio",
        "--omega",
        &data("disk.json"),
        "--u",
        &data("halfdisk.json"),
        "--xi",
        "0,1",
        "--toward",
        "0,0",
        "--distances",
        "1e-1,1e-2,1e-3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let r: Vec<f64> = v["samples"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| num(s, "ratio"))
        .collect();
    assert!(r.windows(2).all(|w| w[1] >= w[0]), "{r:?}");
    assert!(r[2] > 0.95);
}

#[test]
fn failed_check_exits_two() {
    // A stencil this coarse this close to the circle is outside the
    // asymptotic range, so the fitted order misses [1.8, 2.2].
    let out = poincare(&[
        "curvature-check",
        "--catalog",
        "unitdisk",
        "--point",
        "0.85,0",
        "--levels",
        "0.14,0.1,0.05",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["passed"], false);

    let ok = poincare(&[
        "curvature-check",
        "--catalog",
        "sphere",
        "--window",
        "-1,1,-1,1",
        "--samples",
        "20",
    ]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn errors_exit_one_with_a_diagnostic() {
    let out = poincare(&[
        "density",
        "--region",
        &data("broken.json"),
        "--point",
        "0,0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("broken.json"));
    assert!(out.stdout.is_empty());

    let missing = poincare(&["pcap", "--compact", &data("no_such_file.json")]);
    assert_eq!(missing.status.code(), Some(1));

    let usage = poincare(&["density", "--point", "0,0"]);
    assert_eq!(usage.status.code(), Some(1));

    let bad_levels = poincare(&[
        "pcap",
        "--compact",
        &data("twopoints.json"),
        "--levels",
        "0.1,0.2",
    ]);
    assert_eq!(bad_levels.status.code(), Some(1));

    let oracle = poincare(&[
        "density",
        "--region",
        &data("punctured_disk.json"),
        "--point",
        "0,0.5",
        "--mode",
        "oracle",
    ]);
    assert_eq!(oracle.status.code(), Some(1));

    assert_eq!(poincare(&["--help"]).status.code(), Some(0));
}

#[test]
fn thread_variable_is_validated() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_poincare"))
            .args(["density", "--catalog", "unitdisk", "--point", "0,0"])
            .env("POINCARE_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(run("2").status.code(), Some(0));
    assert_eq!(run("zero").status.code(), Some(1));
    assert_eq!(run("0").status.code(), Some(1));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    // Same output path both times, since the path is part of the echoed config.
    let path = dir.path().join("report.json");
    let run = || {
        let out = poincare(&[
            "verify",
            "--region1",
            &data("disk_left.json"),
            "--region2",
            &data("disk_right.json"),
            "--mode",
            "pde",
            "--h",
            "1/32",
            "--samples",
            "40",
            "--seed",
            "7",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty());
        std::fs::read(&path).unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(num(&v, "h"), 1.0 / 32.0);
    assert_eq!(v["seed"], 7);
    assert!(v["bbox"].is_object());
    assert_eq!(num(&v, "tolerance"), 5e-3);
}

#[test]
fn floats_are_printed_with_seventeen_digits() {
    let out = poincare(&["density", "--catalog", "disk:0,0,3", "--point", "0.1,0.2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("\"lambda\"")).unwrap();
    let mantissa = line.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let digits = mantissa
        .split('e')
        .next()
        .unwrap()
        .chars()
        .filter(char::is_ascii_digit)
        .count();
    assert_eq!(digits, 17, "{line}");
}

#[test]
fn verify_dumps_solved_fields() {
    let dir = tempfile::tempdir().unwrap();
    let out = poincare(&[
        "verify",
        "--region1",
        &data("disk_left.json"),
        "--region2",
        &data("disk_right.json"),
        "--mode",
        "pde",
        "--h",
        "1/16",
        "--samples",
        "10",
        "--dump-field",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for name in ["omega1", "omega2", "union", "intersection"] {
        let text = std::fs::read_to_string(dir.path().join(format!("{name}.csv"))).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# chart=identity"));
        assert_eq!(lines.next(), Some("x,y,u,lambda"));
        assert!(lines.count() > 100);
    }
    assert_eq!(json(&out)["dumped"].as_array().unwrap().len(), 4);
}
