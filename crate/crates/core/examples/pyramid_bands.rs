//! Decomposes a texture with the complex steerable pyramid and prints the
//! mean coefficient energy of every subband.

use perceptual_me::pyramid::{decompose, PyramidConfig};
use perceptual_me::synth;

fn main() -> perceptual_me::Result<()> {
    let image = synth::texture(64, 64, 3);
    let config = PyramidConfig::for_block(64);
    let pyramid = decompose(image.view(), config)?;
    println!(
        "{} levels x {} orientations",
        config.levels, config.orientations
    );
    for band in &pyramid.subbands {
        let energy =
            band.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() / band.coeffs.len() as f64;
        println!(
            "level {} orientation {} ({:>2}x{:<2}) energy {energy:>10.2}",
            band.level, band.orientation, band.width, band.height
        );
    }
    let low = &pyramid.residual_lowpass;
    println!(
        "low-pass residual {}x{}, mean {:.2}",
        pyramid.lowpass_width,
        pyramid.lowpass_height,
        low.iter().sum::<f64>() / low.len() as f64
    );
    Ok(())
}
