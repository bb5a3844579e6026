//! Scores one textured block against a few distorted versions of itself
//! under every metric. SAD and MSE are distances; the rest are similarities.

use perceptual_me::metrics::{cw_ssim_score, mse, sad, ssim_score, vif_score};
use perceptual_me::metrics::{CwSsimParams, SsimParams, VifParams};
use perceptual_me::prelude::{BlockView, LumaFrame};
use perceptual_me::synth;

fn main() -> perceptual_me::Result<()> {
    let big = synth::texture(64, 64, 11);
    let block = |x, y| big.block(BlockView::new(x, y, 16)).map(|v| v.to_frame());
    let original = block(24, 24)?;
    let brighter = LumaFrame::from_fn(16, 16, |x, y| original.get(x, y).saturating_add(20))?;
    let variants = [
        ("identical", original.clone()),
        ("moved 1 px", block(25, 24)?),
        ("brighter", brighter),
        ("unrelated", synth::texture(16, 16, 12)),
    ];

    println!(
        "{:<12} {:>8} {:>9} {:>7} {:>8} {:>7}",
        "variant", "SAD", "MSE", "SSIM", "CW-SSIM", "VIF"
    );
    for (name, other) in &variants {
        let (a, b) = (original.view(), other.view());
        println!(
            "{name:<12} {:>8} {:>9.2} {:>7.4} {:>8.4} {:>7.4}",
            sad(a, b)?,
            mse(a, b)?,
            ssim_score(a, b, &SsimParams::block())?,
            cw_ssim_score(a, b, &CwSsimParams::default())?,
            vif_score(a, b, &VifParams::default())?,
        );
    }
    Ok(())
}
