//! Deterministic synthetic content for examples, tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::frame::LumaFrame;

/// Multi-octave value noise as a dense field of floats in [0, 1].
fn value_noise(
    width: usize,
    height: usize,
    rng: &mut ChaCha8Rng,
    cells: &[(usize, f64)],
) -> Vec<f64> {
    let mut field = vec![0.0; width * height];
    let mut total_amp = 0.0;
    for &(cell, amp) in cells {
        let gw = width / cell + 2;
        let gh = height / cell + 2;
        let lattice: Vec<f64> = (0..gw * gh).map(|_| rng.gen::<f64>()).collect();
        for y in 0..height {
            let fy = y as f64 / cell as f64;
            let (iy, ty) = (fy.floor() as usize, smooth(fy.fract()));
            for x in 0..width {
                let fx = x as f64 / cell as f64;
                let (ix, tx) = (fx.floor() as usize, smooth(fx.fract()));
                let v00 = lattice[iy * gw + ix];
                let v01 = lattice[iy * gw + ix + 1];
                let v10 = lattice[(iy + 1) * gw + ix];
                let v11 = lattice[(iy + 1) * gw + ix + 1];
                let top = v00 + (v01 - v00) * tx;
                let bottom = v10 + (v11 - v10) * tx;
                field[y * width + x] += amp * (top + (bottom - top) * ty);
            }
        }
        total_amp += amp;
    }
    for v in &mut field {
        *v /= total_amp;
    }
    field
}

fn smooth(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

fn stretch_to_u8(field: &[f64], lo: f64, hi: f64) -> Vec<u8> {
    let min = field.iter().copied().fold(f64::INFINITY, f64::min);
    let max = field.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = (max - min).max(1e-12);
    field
        .iter()
        .map(|v| {
            (lo + (hi - lo) * (v - min) / span)
                .round()
                .clamp(0.0, 255.0) as u8
        })
        .collect()
}

/// Natural-looking texture: octaves from 16 px down to 1 px, amplitude
/// falling with frequency, stretched to [16, 240].
pub fn texture(width: usize, height: usize, seed: u64) -> LumaFrame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = value_noise(
        width,
        height,
        &mut rng,
        &[(16, 1.0), (8, 0.7), (4, 0.5), (2, 0.35), (1, 0.25)],
    );
    LumaFrame::new(width, height, stretch_to_u8(&field, 16.0, 240.0)).expect("non-empty texture")
}

/// Copy of `frame` moved so that `out(x, y) = frame(x + dx, y + dy)`,
/// with out-of-frame reads clamped to the border.
pub fn translate(frame: &LumaFrame, dx: isize, dy: isize) -> LumaFrame {
    let (w, h) = (frame.width() as isize, frame.height() as isize);
    LumaFrame::from_fn(frame.width(), frame.height(), |x, y| {
        let sx = (x as isize + dx).clamp(0, w - 1) as usize;
        let sy = (y as isize + dy).clamp(0, h - 1) as usize;
        frame.get(sx, sy)
    })
    .expect("same geometry")
}

/// A reference/target pair where `target(x, y) = reference(x + dx, y + dy)`
/// exactly, cut from one larger texture so no border content is invented.
pub fn shifted_pair(
    width: usize,
    height: usize,
    dx: isize,
    dy: isize,
    seed: u64,
) -> (LumaFrame, LumaFrame) {
    let margin = dx.unsigned_abs().max(dy.unsigned_abs());
    let big = texture(width + 2 * margin, height + 2 * margin, seed);
    let m = margin as isize;
    let cut = |ox: isize, oy: isize| {
        big.view()
            .sub(ox as usize, oy as usize, width, height)
            .to_frame()
    };
    (cut(m, m), cut(m + dx, m + dy))
}

/// Independent uniform noise.
pub fn noise(width: usize, height: usize, seed: u64) -> LumaFrame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    LumaFrame::from_fn(width, height, |_, _| rng.gen()).expect("non-empty noise")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn texture_is_deterministic_and_spread() {
        let a = texture(64, 48, 4);
        assert_eq!(a, texture(64, 48, 4));
        assert_ne!(a, texture(64, 48, 5));
        let min = *a.samples().iter().min().unwrap();
        let max = *a.samples().iter().max().unwrap();
        assert_eq!((min, max), (16, 240));
    }

    #[test]
    fn shifted_pair_relation() {
        let (r, t) = shifted_pair(40, 30, 3, -2, 9);
        for y in 2..30 {
            for x in 0..37 {
                assert_eq!(t.get(x, y), r.get(x + 3, y - 2));
            }
        }
    }
}
