//! Experiment runs behind the command-line front end.
//!
//! The binary only parses flags into a [`RunSpec`]; everything else lives here
//! so it can be driven from tests and examples.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::eval::{compare_frames, emit_report, ComparisonReport, ReportFormat};
use crate::frame::{load_frame_from_bytes, save_pgm, FrameFormat, LumaFrame};
use crate::metrics::{CwSsimParams, Metric, MetricKind, SsimParams, SsimWindow, VifParams};
use crate::motion::{compensate, estimate_motion_field_with, Execution, MotionField, SearchConfig};
use crate::pyramid::PyramidConfig;

/// Everything one invocation needs.
#[derive(Clone, Debug)]
pub struct RunSpec {
    pub input: PathBuf,
    pub format: FrameFormat,
    pub ref_index: usize,
    pub target_index: usize,
    pub metrics: Vec<MetricKind>,
    pub block_size: usize,
    pub search_radius: usize,
    pub ssim_window: SsimWindow,
    pub vif_sigma_n_sq: f64,
    pub pyramid_levels: Option<usize>,
    pub pyramid_orientations: Option<usize>,
    pub out_field: Option<PathBuf>,
    pub out_frame: Option<PathBuf>,
    pub out_report: Option<PathBuf>,
    pub report_format: ReportFormat,
    pub execution: Execution,
}

impl RunSpec {
    /// Defaults: frames 0 and 1, 16-pixel blocks, radius 16, SAD.
    pub fn new(input: impl Into<PathBuf>, format: FrameFormat) -> Self {
        Self {
            input: input.into(),
            format,
            ref_index: 0,
            target_index: 1,
            metrics: vec![MetricKind::Sad],
            block_size: 16,
            search_radius: 16,
            ssim_window: SsimWindow::WholeBlock,
            vif_sigma_n_sq: VifParams::default().sigma_n_sq,
            pyramid_levels: None,
            pyramid_orientations: None,
            out_field: None,
            out_frame: None,
            out_report: None,
            report_format: ReportFormat::Table,
            execution: Execution::Parallel,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.metrics.is_empty() {
            return Err(Error::InvalidConfig(
                "at least one metric is required".into(),
            ));
        }
        if self.ref_index == self.target_index {
            return Err(Error::InvalidConfig(
                "reference and target frame indices must differ".into(),
            ));
        }
        for &k in &self.metrics {
            self.search_config(k)?.validate()?;
        }
        Ok(())
    }

    fn pyramid(&self) -> Result<Option<PyramidConfig>> {
        match (self.pyramid_levels, self.pyramid_orientations) {
            (None, None) => Ok(None),
            (levels, orients) => {
                let base = PyramidConfig::for_block(self.block_size);
                PyramidConfig::new(
                    levels.unwrap_or(base.levels),
                    orients.unwrap_or(base.orientations),
                )
                .map(Some)
            }
        }
    }

    /// Metric parameters for `kind` under this spec.
    pub fn metric(&self, kind: MetricKind) -> Result<Metric> {
        Ok(match kind {
            MetricKind::Sad => Metric::Sad,
            MetricKind::Mse => Metric::Mse,
            MetricKind::Ssim => Metric::Ssim(SsimParams::block().with_window(self.ssim_window)),
            MetricKind::CwSsim => Metric::CwSsim(CwSsimParams {
                pyramid: self.pyramid()?,
                ..CwSsimParams::default()
            }),
            MetricKind::Vif => Metric::Vif(VifParams {
                sigma_n_sq: self.vif_sigma_n_sq,
                pyramid: self.pyramid()?,
                ..VifParams::default()
            }),
        })
    }

    pub fn search_config(&self, kind: MetricKind) -> Result<SearchConfig> {
        Ok(SearchConfig::new(self.metric(kind)?)
            .with_block_size(self.block_size)
            .with_search_radius(self.search_radius))
    }

    /// Loads the reference and target frames.
    pub fn load_frames(&self) -> Result<(LumaFrame, LumaFrame)> {
        let bytes =
            std::fs::read(&self.input).map_err(|e| stage_io("reading input", &self.input, e))?;
        let reference = load_frame_from_bytes(&bytes, self.format, self.ref_index)?;
        let target = load_frame_from_bytes(&bytes, self.format, self.target_index)?;
        Ok((reference, target))
    }
}

fn stage_io(stage: &str, path: &Path, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(
        e.kind(),
        format!("{stage} {}: {e}", path.display()),
    ))
}

/// Output path for `kind`: the path itself for single-metric runs, otherwise
/// `<stem>_<metric>.<ext>`.
pub fn per_metric_path(base: &Path, kind: MetricKind, multi: bool) -> PathBuf {
    if !multi {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match base.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_{}.{ext}", kind.tag()),
        None => format!("{stem}_{}", kind.tag()),
    };
    base.with_file_name(name)
}

fn write_field(path: &Path, field: &MotionField) -> Result<()> {
    let file = File::create(path).map_err(|e| stage_io("creating motion field", path, e))?;
    field.write_csv(BufWriter::new(file))
}

fn write_pgm(path: &Path, frame: &LumaFrame) -> Result<()> {
    let file = File::create(path).map_err(|e| stage_io("creating frame", path, e))?;
    save_pgm(frame, BufWriter::new(file))
}

/// Estimates one field per metric and writes each. Returns the paths written.
pub fn cmd_estimate(spec: &RunSpec) -> Result<Vec<PathBuf>> {
    spec.validate()?;
    let base = spec
        .out_field
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("--out-field is required".into()))?;
    let (reference, target) = spec.load_frames()?;
    let multi = spec.metrics.len() > 1;
    let mut written = Vec::new();
    for &kind in &spec.metrics {
        let field = estimate_motion_field_with(
            &reference,
            &target,
            &spec.search_config(kind)?,
            spec.execution,
        )?;
        let path = per_metric_path(base, kind, multi);
        write_field(&path, &field)?;
        written.push(path);
    }
    Ok(written)
}

/// Applies a stored field to the reference frame and writes the prediction.
pub fn cmd_reconstruct(spec: &RunSpec, field_path: &Path) -> Result<LumaFrame> {
    let file =
        File::open(field_path).map_err(|e| stage_io("opening motion field", field_path, e))?;
    let field = MotionField::read_csv(BufReader::new(file))?;
    let bytes =
        std::fs::read(&spec.input).map_err(|e| stage_io("reading input", &spec.input, e))?;
    let reference = load_frame_from_bytes(&bytes, spec.format, spec.ref_index)?;
    let frame = compensate(&reference, &field)?;
    if let Some(out) = &spec.out_frame {
        write_pgm(out, &frame)?;
    }
    Ok(frame)
}

/// Runs estimate, compensate and compare for one metric on loaded frames.
pub fn run_metric(
    spec: &RunSpec,
    kind: MetricKind,
    reference: &LumaFrame,
    target: &LumaFrame,
) -> Result<(MotionField, LumaFrame, ComparisonReport)> {
    let config = spec.search_config(kind)?;
    let start = Instant::now();
    let field = estimate_motion_field_with(reference, target, &config, spec.execution)?;
    let elapsed = start.elapsed().as_secs_f64();
    let predicted = compensate(reference, &field)?;
    let report = compare_frames(target, &predicted, elapsed, kind)?;
    Ok((field, predicted, report))
}

/// End-to-end comparison for every requested metric.
pub fn cmd_report(spec: &RunSpec) -> Result<Vec<ComparisonReport>> {
    spec.validate()?;
    let (reference, target) = spec.load_frames()?;
    let multi = spec.metrics.len() > 1;
    let mut rows = Vec::with_capacity(spec.metrics.len());
    for &kind in &spec.metrics {
        let (field, predicted, report) = run_metric(spec, kind, &reference, &target)?;
        if let Some(base) = &spec.out_field {
            write_field(&per_metric_path(base, kind, multi), &field)?;
        }
        if let Some(base) = &spec.out_frame {
            write_pgm(&per_metric_path(base, kind, multi), &predicted)?;
        }
        rows.push(report);
    }
    match &spec.out_report {
        Some(path) => {
            let file = File::create(path).map_err(|e| stage_io("creating report", path, e))?;
            emit_report(&rows, spec.report_format, BufWriter::new(file))?;
        }
        None => emit_report(&rows, spec.report_format, std::io::stdout().lock())?,
    }
    Ok(rows)
}

/// Parses `block` or `sliding:N` (stride 1).
pub fn parse_ssim_window(s: &str) -> Result<SsimWindow> {
    if s == "block" {
        return Ok(SsimWindow::WholeBlock);
    }
    let size = s
        .strip_prefix("sliding:")
        .and_then(|n| n.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Parse(format!("bad SSIM window '{s}' (block or sliding:N)")))?;
    Ok(SsimWindow::Sliding { size, stride: 1 })
}

/// Parses a metric list; `all` expands to the five metrics.
pub fn parse_metrics(values: &[String]) -> Result<Vec<MetricKind>> {
    let mut out = Vec::new();
    for v in values.iter().flat_map(|v| v.split(',')) {
        if v == "all" {
            out.extend(MetricKind::ALL);
        } else {
            out.push(v.parse()?);
        }
    }
    out.dedup();
    Ok(out)
}
