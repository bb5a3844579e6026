//! Runs all five block-matching criteria on the pinned CIF pair and prints a
//! comparison table, including SAD with 8x8 blocks.
//!
//! ```bash
//! cargo run --release -p perceptual-me --example compare_metrics
//! ```

use std::time::Instant;

use perceptual_me::eval::{compare_frames, render_report, ReportFormat};
use perceptual_me::metrics::{Metric, MetricKind};
use perceptual_me::motion::{compensate, estimate_motion_field, SearchConfig};
use perceptual_me::scene;

fn main() -> perceptual_me::Result<()> {
    let (reference, target) = scene::cif_pair();
    let mut rows = Vec::new();
    for kind in MetricKind::ALL {
        let config = SearchConfig::new(Metric::default_for(kind));
        let start = Instant::now();
        let field = estimate_motion_field(&reference, &target, &config)?;
        let elapsed = start.elapsed().as_secs_f64();
        let predicted = compensate(&reference, &field)?;
        rows.push(compare_frames(&target, &predicted, elapsed, kind)?);
    }
    print!("{}", render_report(&rows, ReportFormat::Table)?);

    let config = SearchConfig::new(Metric::Sad).with_block_size(8);
    let start = Instant::now();
    let field = estimate_motion_field(&reference, &target, &config)?;
    let elapsed = start.elapsed().as_secs_f64();
    let predicted = compensate(&reference, &field)?;
    let small = compare_frames(&target, &predicted, elapsed, MetricKind::Sad)?;
    println!("\nSAD with 8x8 blocks:");
    print!("{}", render_report(&[small], ReportFormat::Table)?);
    Ok(())
}
