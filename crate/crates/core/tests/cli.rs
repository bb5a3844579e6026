use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use perceptual_me::cli::{cmd_estimate, cmd_reconstruct, cmd_report, RunSpec};
use perceptual_me::eval::{parse_report_csv, ReportFormat};
use perceptual_me::frame::{
    extract_block, load_frame, save_y4m, BlockView, FrameFormat, LumaFrame,
};
use perceptual_me::metrics::MetricKind;
use perceptual_me::motion::{MotionField, MotionVector};
use perceptual_me::synth;

fn clip(dir: &Path) -> (PathBuf, LumaFrame, LumaFrame) {
    let (reference, target) = synth::shifted_pair(48, 32, 2, -1, 21);
    let path = dir.join("clip.y4m");
    save_y4m(
        &[reference.clone(), target.clone()],
        fs::File::create(&path).unwrap(),
    )
    .unwrap();
    (path, reference, target)
}

fn spec(input: &Path) -> RunSpec {
    let mut s = RunSpec::new(input, FrameFormat::Y4m);
    s.search_radius = 4;
    s
}

#[test]
fn estimate_writes_one_field_per_metric() {
    let dir = tempfile::tempdir().unwrap();
    let (input, ..) = clip(dir.path());
    let mut s = spec(&input);
    s.metrics = vec![MetricKind::Sad, MetricKind::Ssim];
    s.out_field = Some(dir.path().join("field.csv"));
    let paths = cmd_estimate(&s).unwrap();
    assert_eq!(
        paths,
        vec![
            dir.path().join("field_sad.csv"),
            dir.path().join("field_ssim.csv")
        ]
    );
    let texts: Vec<String> = paths
        .iter()
        .map(|p| fs::read_to_string(p).unwrap())
        .collect();
    let geometry: Vec<&str> = texts.iter().map(|t| t.lines().nth(1).unwrap()).collect();
    assert_eq!(geometry, ["48,32,16,4,sad", "48,32,16,4,ssim"]);
    for t in &texts {
        let field = MotionField::read_csv(t.as_bytes()).unwrap();
        assert_eq!(field.vector(1, 1), MotionVector::new(2, -1));
    }
}

#[test]
fn estimate_requires_an_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let (input, ..) = clip(dir.path());
    assert!(cmd_estimate(&spec(&input)).is_err());
}

#[test]
fn zero_field_reconstructs_the_reference() {
    let dir = tempfile::tempdir().unwrap();
    let (input, reference, _) = clip(dir.path());
    let field = MotionField {
        width: 48,
        height: 32,
        block_size: 16,
        search_radius: 4,
        metric: MetricKind::Mse,
        vectors: vec![MotionVector::new(0, 0); 6],
        scores: vec![0.0; 6],
    };
    let field_path = dir.path().join("zero.csv");
    fs::write(&field_path, field.to_csv()).unwrap();
    let mut s = spec(&input);
    s.out_frame = Some(dir.path().join("pred.pgm"));
    let frame = cmd_reconstruct(&s, &field_path).unwrap();
    assert_eq!(frame, reference);
    let written = load_frame(
        fs::File::open(dir.path().join("pred.pgm")).unwrap(),
        FrameFormat::Pgm,
        0,
    )
    .unwrap();
    assert_eq!(written, reference);
}

#[test]
fn reconstruct_rejects_a_field_for_other_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let (input, ..) = clip(dir.path());
    let field = MotionField {
        width: 64,
        height: 32,
        block_size: 16,
        search_radius: 4,
        metric: MetricKind::Sad,
        vectors: vec![MotionVector::new(0, 0); 8],
        scores: vec![0.0; 8],
    };
    let field_path = dir.path().join("wide.csv");
    fs::write(&field_path, field.to_csv()).unwrap();
    assert!(cmd_reconstruct(&spec(&input), &field_path).is_err());
}

#[test]
fn report_round_trips_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (input, _, target) = clip(dir.path());
    let mut s = spec(&input);
    s.metrics = vec![MetricKind::Mse, MetricKind::Vif];
    s.report_format = ReportFormat::Csv;
    s.out_report = Some(dir.path().join("report.csv"));
    s.out_frame = Some(dir.path().join("pred.pgm"));
    let rows = cmd_report(&s).unwrap();
    let parsed =
        parse_report_csv(&fs::read_to_string(dir.path().join("report.csv")).unwrap()).unwrap();
    assert_eq!(parsed.len(), 2);
    assert_eq!(parsed[0].metric_used, MetricKind::Mse);
    assert_eq!(parsed[1].metric_used, MetricKind::Vif);
    assert!((rows[0].frame_mse - parsed[0].frame_mse).abs() < 1e-3);
    let pred = load_frame(
        fs::File::open(dir.path().join("pred_mse.pgm")).unwrap(),
        FrameFormat::Pgm,
        0,
    )
    .unwrap();
    let (w, h) = (target.width(), target.height());
    assert_eq!((pred.width(), pred.height()), (w, h));
    assert_eq!(
        extract_block(&pred, BlockView::new(16, 16, 16)).unwrap(),
        extract_block(&target, BlockView::new(16, 16, 16)).unwrap()
    );
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_perceptual-me"))
}

#[test]
fn binary_runs_each_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let (input, ..) = clip(dir.path());
    let field = dir.path().join("f.csv");
    let out = bin()
        .args(["estimate", "--input"])
        .arg(&input)
        .args(["--search-radius", "4", "--metric", "mse", "--out-field"])
        .arg(&field)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let pred = dir.path().join("p.pgm");
    let out = bin()
        .args(["reconstruct", "--input"])
        .arg(&input)
        .arg("--field")
        .arg(&field)
        .arg("--out-frame")
        .arg(&pred)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(pred.exists());

    let out = bin()
        .args(["report", "--input"])
        .arg(&input)
        .args([
            "--search-radius",
            "4",
            "--metric",
            "sad,ssim",
            "--report-format",
            "json",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows =
        perceptual_me::eval::parse_report_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(rows.len(), 2);
}

#[test]
fn binary_fails_on_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.y4m");
    let out = bin()
        .args(["report", "--input"])
        .arg(&missing)
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("perceptual-me report:"), "{err}");

    let (input, ..) = clip(dir.path());
    let out = bin()
        .args(["estimate", "--input"])
        .arg(&input)
        .args(["--metric", "ssd", "--out-field"])
        .arg(dir.path().join("x.csv"))
        .output()
        .unwrap();
    assert!(!out.status.success());

    let out = bin()
        .args(["report", "--format", "raw", "--input"])
        .arg(&input)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--width"));
}
