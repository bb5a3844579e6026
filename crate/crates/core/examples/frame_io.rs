//! Writes the pinned CIF pair as a two-frame Y4M clip, reads the second
//! frame back, and cuts one 16x16 block out of it as a PGM.

use std::fs::File;

use perceptual_me::frame::{extract_block, load_frame, save_pgm, save_y4m, BlockView, FrameFormat};
use perceptual_me::scene;

fn main() -> perceptual_me::Result<()> {
    let dir = std::env::temp_dir().join("perceptual-me-frame-io");
    std::fs::create_dir_all(&dir)?;
    let (reference, target) = scene::cif_pair();

    let clip = dir.join("pair.y4m");
    save_y4m(&[reference, target.clone()], File::create(&clip)?)?;
    let loaded = load_frame(File::open(&clip)?, FrameFormat::Y4m, 1)?;
    assert_eq!(loaded, target);
    println!(
        "{}: frame 1 is {}x{}",
        clip.display(),
        loaded.width(),
        loaded.height()
    );

    let block = extract_block(&loaded, BlockView::new(160, 128, 16))?;
    let out = dir.join("block.pgm");
    save_pgm(&block, File::create(&out)?)?;
    let mean = block.samples().iter().map(|&v| v as f64).sum::<f64>() / 256.0;
    println!("{}: block at (160, 128), mean {mean:.1}", out.display());
    Ok(())
}
