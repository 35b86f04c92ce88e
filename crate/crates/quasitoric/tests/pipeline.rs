//! End-to-end checks of the command line surface and a few whole-family
//! invariants that cut across modules.

mod common;

use std::process::Command;

use common::staircase_spec;
use quasitoric::classes::compute_classes;
use quasitoric::face_ring::{FaceRing, KernelChoice};
use quasitoric::polytope::parse_expression;
use quasitoric::report::{self, DChoice, OutputFormat, PairSource, RunConfig};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_quasitoric")
}

#[test]
fn examples_output_matches_golden_file() {
    let output = Command::new(bin()).arg("examples").output().unwrap();
    assert!(output.status.success());
    let expected = include_str!("golden/dual_class_lines.txt");
    assert_eq!(String::from_utf8_lossy(&output.stdout), expected);
}

#[test]
fn sigma_command_prints_tab_separated_rows() {
    let output = Command::new(bin())
        .args(["sigma", "--n-max", "5"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[4], "4\t1\t1\t1\t1");
    assert_eq!(lines[5], "5\t1\t0\t1\t0\t0");
}

#[test]
fn json_runs_are_byte_identical() {
    let run = || {
        Command::new(bin())
            .args([
                "compute",
                "--polytope",
                "cube:2 x perm:3",
                "--pair",
                "paper",
                "--d",
                "1",
                "--format",
                "json",
            ])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn check_mode_prints_only_check_lines() {
    let output = Command::new(bin())
        .args([
            "compute",
            "--polytope",
            "cube:3",
            "--pair",
            "paper",
            "--check",
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.lines().all(|l| l.starts_with("check")));
    assert!(text.contains("t-ring oracle: pass"));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let output = Command::new(bin())
        .args([
            "compute",
            "--polytope",
            "polygon:6",
            "--format",
            "json",
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed: report::Report = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed.polytope.dim, 2);
    assert_eq!(parsed.classes.rank_dual, 1);
}

#[test]
fn unreadable_polytope_file_exits_2() {
    let output = Command::new(bin())
        .args(["compute", "--polytope", "/nonexistent/poly.json"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn polytope_json_file_input_works() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("square.json");
    std::fs::write(
        &path,
        r#"{"dim": 2, "num_facets": 4, "vertices": [[1,3],[1,4],[2,3],[2,4]]}"#,
    )
    .unwrap();
    let cfg = RunConfig {
        polytope: report::polytope_source_from_arg(path.to_str().unwrap()),
        coloring: report::coloring_source_from_arg("auto"),
        pair: PairSource::Staircase,
        d: DChoice::One,
        format: OutputFormat::Json,
        check_only: false,
    };
    let result = report::run_compute(&cfg).unwrap();
    assert_eq!(result.betti, vec![1, 2, 1]);
}

#[test]
fn explicit_coloring_file_is_verified_not_modified() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, r#"{"colors": [2, 2, 1, 1]}"#).unwrap();
    let cfg = RunConfig {
        polytope: report::polytope_source_from_arg("cube:2"),
        coloring: report::coloring_source_from_arg(good.to_str().unwrap()),
        pair: PairSource::Staircase,
        d: DChoice::One,
        format: OutputFormat::Json,
        check_only: false,
    };
    let result = report::run_compute(&cfg).unwrap();
    assert_eq!(result.coloring.colors, vec![2, 2, 1, 1]);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"colors": [1, 2, 1, 2]}"#).unwrap();
    let cfg = RunConfig {
        coloring: report::coloring_source_from_arg(bad.to_str().unwrap()),
        ..cfg
    };
    let err = report::run_compute(&cfg).unwrap_err();
    assert_eq!(report::exit_code(&err), 2);
}

#[test]
fn power_of_two_dimensions_reach_full_rank() {
    // Over every n-colorable polytope in the family with n a power of two,
    // the staircase pair's dual rank is n - 1. The 8-dimensional cube is the
    // largest case and still runs in seconds.
    let cases = [
        ("cube:2", 2usize),
        ("polygon:4", 2),
        ("polygon:6", 2),
        ("polygon:8", 2),
        ("cube:4", 4),
        ("cube:2 x cube:2", 4),
        ("cube:2 x polygon:6", 4),
        ("cube:8", 8),
    ];
    for (expr, n) in cases {
        let spec = staircase_spec(parse_expression(expr).unwrap(), 1);
        let ring = FaceRing::build(&spec).unwrap();
        let sw = compute_classes(&ring, &spec).unwrap();
        assert_eq!(sw.rank_dual, n - 1, "{expr}");
    }
}

#[test]
fn reduced_kernel_matches_face_kernel_on_dual_ranks() {
    for expr in ["cube:3", "polygon:6", "perm:3", "cube:1 x polygon:4"] {
        let spec = staircase_spec(parse_expression(expr).unwrap(), 1);
        let face = FaceRing::build_with_kernel(&spec, KernelChoice::FaceBasis).unwrap();
        let reduced = FaceRing::build_with_kernel(&spec, KernelChoice::Reduced).unwrap();
        let sw_face = compute_classes(&face, &spec).unwrap();
        let sw_reduced = compute_classes(&reduced, &spec).unwrap();
        assert_eq!(sw_face.rank_dual, sw_reduced.rank_dual, "{expr}");
        for k in 0..=spec.polytope.dim() {
            assert_eq!(
                sw_face.wbar[k].is_zero(),
                sw_reduced.wbar[k].is_zero(),
                "{expr} degree {k}"
            );
        }
    }
}
