//! Drives the estimate, reconstruct and report commands from code, the same
//! way the `perceptual-me` binary does.

use std::fs::File;

use perceptual_me::cli::{cmd_estimate, cmd_reconstruct, cmd_report, RunSpec};
use perceptual_me::eval::ReportFormat;
use perceptual_me::frame::{save_y4m, FrameFormat};
use perceptual_me::metrics::MetricKind;
use perceptual_me::synth;

fn main() -> perceptual_me::Result<()> {
    let dir = std::env::temp_dir().join("perceptual-me-cli");
    std::fs::create_dir_all(&dir)?;
    let (reference, target) = synth::shifted_pair(96, 64, -2, 3, 5);
    let input = dir.join("clip.y4m");
    save_y4m(&[reference, target], File::create(&input)?)?;

    let mut spec = RunSpec::new(&input, FrameFormat::Y4m);
    spec.search_radius = 8;
    spec.metrics = vec![MetricKind::Sad, MetricKind::Ssim];
    spec.out_field = Some(dir.join("field.csv"));
    let fields = cmd_estimate(&spec)?;
    for f in &fields {
        println!("wrote {}", f.display());
    }

    spec.out_frame = Some(dir.join("predicted.pgm"));
    let predicted = cmd_reconstruct(&spec, &fields[1])?;
    println!(
        "reconstructed {}x{} from {}",
        predicted.width(),
        predicted.height(),
        fields[1].display()
    );

    spec.out_field = None;
    spec.out_frame = None;
    spec.report_format = ReportFormat::Table;
    cmd_report(&spec)?;
    Ok(())
}
