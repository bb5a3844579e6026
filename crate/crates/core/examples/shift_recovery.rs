//! Estimates motion between two crops of one texture and checks that every
//! metric recovers the known global shift on interior blocks.

use perceptual_me::prelude::*;

fn main() -> perceptual_me::Result<()> {
    let (dx, dy) = (3i32, -2i32);
    let (reference, target) = synth::shifted_pair(64, 64, dx as isize, dy as isize, 42);
    for kind in MetricKind::ALL {
        let config = SearchConfig::new(Metric::default_for(kind)).with_search_radius(4);
        let field = estimate_motion_field(&reference, &target, &config)?;
        let interior = [(1, 1), (1, 2), (2, 1), (2, 2)];
        let hits = interior
            .iter()
            .filter(|&&(r, c)| field.vector(r, c) == MotionVector::new(dx, dy))
            .count();
        let predicted = compensate(&reference, &field)?;
        let err = mse(target.view(), predicted.view())?;
        println!(
            "{:<7} interior hits {hits}/4, frame MSE {err:.2}",
            kind.tag()
        );
    }
    Ok(())
}
