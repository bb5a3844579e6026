//! Compares a reconstruction with its target and renders the result in each
//! report format, plus the per-bitplane Hamming distances.

use perceptual_me::eval::{bitplane_hamming, compare_frames, render_report, ReportFormat};
use perceptual_me::metrics::{Metric, MetricKind};
use perceptual_me::motion::{compensate, estimate_motion_field, SearchConfig};
use perceptual_me::synth;

fn main() -> perceptual_me::Result<()> {
    let reference = synth::texture(96, 64, 8);
    let target = synth::translate(&reference, 2, 1);
    let config = SearchConfig::new(Metric::default_for(MetricKind::Mse)).with_search_radius(4);
    let field = estimate_motion_field(&reference, &target, &config)?;
    let predicted = compensate(&reference, &field)?;
    let row = compare_frames(&target, &predicted, 0.0, MetricKind::Mse)?;

    for format in [ReportFormat::Table, ReportFormat::Csv, ReportFormat::Json] {
        println!("{}", render_report(std::slice::from_ref(&row), format)?);
    }
    let planes = bitplane_hamming(&target, &predicted)?;
    for (i, d) in planes.per_plane.iter().enumerate() {
        println!("bit {}: {d:.4}", 7 - i);
    }
    Ok(())
}
