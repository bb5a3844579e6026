//! Frame-pair comparison and report rendering.

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::frame::LumaFrame;
use crate::metrics::{mse, ssim_score, vif_score, MetricKind, SsimParams, VifParams};
use crate::pyramid::PyramidConfig;

/// Fraction of pixels whose bit differs, per bitplane, MSB first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BitplaneDistances {
    pub per_plane: [f64; 8],
    pub mean: f64,
}

impl BitplaneDistances {
    fn from_per_plane(per_plane: [f64; 8]) -> Self {
        let mean = per_plane.iter().sum::<f64>() / 8.0;
        Self { per_plane, mean }
    }
}

fn check_same(a: &LumaFrame, b: &LumaFrame) -> Result<()> {
    a.view().same_shape(&b.view())
}

pub fn bitplane_hamming(a: &LumaFrame, b: &LumaFrame) -> Result<BitplaneDistances> {
    check_same(a, b)?;
    let mut counts = [0u64; 8];
    for (&x, &y) in a.samples().iter().zip(b.samples()) {
        let diff = x ^ y;
        for (plane, c) in counts.iter_mut().enumerate() {
            *c += ((diff >> (7 - plane)) & 1) as u64;
        }
    }
    let total = a.samples().len() as f64;
    Ok(BitplaneDistances::from_per_plane(
        counts.map(|c| c as f64 / total),
    ))
}

/// One row of a comparison table.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub metric_used: MetricKind,
    pub frame_mse: f64,
    pub frame_ssim: f64,
    pub frame_vif: f64,
    pub bitplane: BitplaneDistances,
    pub elapsed_seconds: f64,
}

/// Frame-level measures used by [`compare_frames`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameMeasures {
    pub ssim: SsimParams,
    pub vif: VifParams,
}

impl Default for FrameMeasures {
    fn default() -> Self {
        Self {
            ssim: SsimParams::frame(),
            vif: VifParams {
                pyramid: Some(PyramidConfig::frame_default()),
                ..VifParams::default()
            },
        }
    }
}

/// Scores `reconstructed` against `target` with the default frame measures.
pub fn compare_frames(
    target: &LumaFrame,
    reconstructed: &LumaFrame,
    elapsed_seconds: f64,
    metric_used: MetricKind,
) -> Result<ComparisonReport> {
    compare_frames_with(
        target,
        reconstructed,
        elapsed_seconds,
        metric_used,
        &FrameMeasures::default(),
    )
}

pub fn compare_frames_with(
    target: &LumaFrame,
    reconstructed: &LumaFrame,
    elapsed_seconds: f64,
    metric_used: MetricKind,
    measures: &FrameMeasures,
) -> Result<ComparisonReport> {
    check_same(target, reconstructed)?;
    let (t, r) = (target.view(), reconstructed.view());
    Ok(ComparisonReport {
        metric_used,
        frame_mse: mse(t, r)?,
        frame_ssim: ssim_score(t, r, &measures.ssim)?,
        frame_vif: vif_score(t, r, &measures.vif)?,
        bitplane: bitplane_hamming(target, reconstructed)?,
        elapsed_seconds: elapsed_seconds.max(0.0),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Table,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "table" | "text" => Ok(Self::Table),
            other => Err(Error::Parse(format!("unknown report format '{other}'"))),
        }
    }
}

pub const REPORT_COLUMNS: [&str; 14] = [
    "metric", "mse", "ssim", "vif", "dist", "time", "plane0", "plane1", "plane2", "plane3",
    "plane4", "plane5", "plane6", "plane7",
];

fn numbers(r: &ComparisonReport) -> [f64; 13] {
    let mut out = [0.0; 13];
    out[0] = r.frame_mse;
    out[1] = r.frame_ssim;
    out[2] = r.frame_vif;
    out[3] = r.bitplane.mean;
    out[4] = r.elapsed_seconds;
    out[5..].copy_from_slice(&r.bitplane.per_plane);
    out
}

/// Renders rows; numbers are fixed at 4 decimal places.
pub fn render_report(rows: &[ComparisonReport], format: ReportFormat) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::InvalidConfig("report needs at least one row".into()));
    }
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str(&REPORT_COLUMNS.join(","));
            out.push('\n');
            for r in rows {
                out.push_str(r.metric_used.label());
                for v in numbers(r) {
                    let _ = write!(out, ",{v:.4}");
                }
                out.push('\n');
            }
        }
        ReportFormat::Json => {
            out.push_str("[\n");
            for (i, r) in rows.iter().enumerate() {
                let _ = write!(out, "  {{\"metric\": \"{}\"", r.metric_used.label());
                let n = numbers(r);
                for (name, v) in REPORT_COLUMNS[1..6].iter().zip(&n[..5]) {
                    let _ = write!(out, ", \"{name}\": {v:.4}");
                }
                out.push_str(", \"planes\": [");
                for (j, v) in n[5..].iter().enumerate() {
                    if j > 0 {
                        out.push_str(", ");
                    }
                    let _ = write!(out, "{v:.4}");
                }
                out.push_str("]}");
                out.push_str(if i + 1 < rows.len() { ",\n" } else { "\n" });
            }
            out.push_str("]\n");
        }
        ReportFormat::Table => {
            let _ = writeln!(
                out,
                "{:<8} {:>10} {:>7} {:>7} {:>7} {:>9}  bitplane distances (MSB..LSB)",
                "metric", "MSE", "SSIM", "VIF", "dist", "time(s)"
            );
            for r in rows {
                let planes: Vec<String> = r
                    .bitplane
                    .per_plane
                    .iter()
                    .map(|p| format!("{p:.3}"))
                    .collect();
                let _ = writeln!(
                    out,
                    "{:<8} {:>10.4} {:>7.4} {:>7.4} {:>7.4} {:>9.4}  [{}]",
                    r.metric_used.label(),
                    r.frame_mse,
                    r.frame_ssim,
                    r.frame_vif,
                    r.bitplane.mean,
                    r.elapsed_seconds,
                    planes.join(", ")
                );
            }
        }
    }
    Ok(out)
}

pub fn emit_report<W: Write>(
    rows: &[ComparisonReport],
    format: ReportFormat,
    mut sink: W,
) -> Result<()> {
    sink.write_all(render_report(rows, format)?.as_bytes())?;
    sink.flush()?;
    Ok(())
}

fn report_from_numbers(metric: &str, n: &[f64]) -> Result<ComparisonReport> {
    let mut per_plane = [0.0; 8];
    per_plane.copy_from_slice(&n[5..13]);
    Ok(ComparisonReport {
        metric_used: metric.parse()?,
        frame_mse: n[0],
        frame_ssim: n[1],
        frame_vif: n[2],
        // Keep the emitted mean rather than recomputing it from rounded planes.
        bitplane: BitplaneDistances {
            per_plane,
            mean: n[3],
        },
        elapsed_seconds: n[4],
    })
}

/// Parses the CSV form produced by [`render_report`].
pub fn parse_report_csv(text: &str) -> Result<Vec<ComparisonReport>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty report".into()))?;
    if header.trim() != REPORT_COLUMNS.join(",") {
        return Err(Error::Parse("unexpected report header".into()));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != REPORT_COLUMNS.len() {
                return Err(Error::Parse(format!("bad report line '{line}'")));
            }
            let n = fields[1..]
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad number '{f}'")))
                })
                .collect::<Result<Vec<_>>>()?;
            report_from_numbers(fields[0], &n)
        })
        .collect()
}

/// Parses the JSON form produced by [`render_report`].
pub fn parse_report_json(text: &str) -> Result<Vec<ComparisonReport>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let rows = value
        .as_array()
        .ok_or_else(|| Error::Parse("report JSON must be an array".into()))?;
    rows.iter()
        .map(|row| {
            let metric = row["metric"]
                .as_str()
                .ok_or_else(|| Error::Parse("row without metric".into()))?;
            let mut n = Vec::with_capacity(13);
            for name in &REPORT_COLUMNS[1..6] {
                n.push(
                    row[*name]
                        .as_f64()
                        .ok_or_else(|| Error::Parse(format!("row without '{name}'")))?,
                );
            }
            let planes = row["planes"]
                .as_array()
                .filter(|p| p.len() == 8)
                .ok_or_else(|| Error::Parse("row needs 8 planes".into()))?;
            for p in planes {
                n.push(
                    p.as_f64()
                        .ok_or_else(|| Error::Parse("non-numeric plane".into()))?,
                );
            }
            report_from_numbers(metric, &n)
        })
        .collect()
}
