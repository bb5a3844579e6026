//! A pinned synthetic CIF frame pair that stands in for a talking-head clip.
//!
//! The scene is procedural: a low-contrast building facade with window
//! edges, and a textured head with a rim and a shoulder region. Between the two
//! frames the camera pans, the head moves and turns slightly (sub-pixel and
//! non-rigid, so no block has an exact match), the exposure drifts, and each
//! frame gets its own sensor noise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::frame::LumaFrame;

pub const CIF_WIDTH: usize = 352;
pub const CIF_HEIGHT: usize = 288;

/// Motion and capture parameters for the second frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SceneParams {
    pub width: usize,
    pub height: usize,
    /// Background displacement between frames, pixels.
    pub pan: (f64, f64),
    /// Head displacement between frames, pixels.
    pub head_shift: (f64, f64),
    /// Head rotation between frames, radians.
    pub head_turn: f64,
    /// Second-frame exposure: `out = gain * in + offset`.
    pub gain: f64,
    pub offset: f64,
    /// Standard deviation of per-frame sensor noise.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for SceneParams {
    fn default() -> Self {
        Self {
            width: CIF_WIDTH,
            height: CIF_HEIGHT,
            pan: (1.5, -0.5),
            head_shift: (2.5, 1.5),
            head_turn: 0.03,
            gain: 0.9,
            offset: 4.0,
            noise_sigma: 2.0,
            seed: 2011,
        }
    }
}

struct Lattice {
    size: usize,
    values: Vec<f64>,
}

impl Lattice {
    fn new(size: usize, rng: &mut ChaCha8Rng) -> Self {
        use rand::Rng;
        Self {
            size,
            values: (0..size * size).map(|_| rng.gen::<f64>() - 0.5).collect(),
        }
    }

    /// Smooth periodic value noise at `(x, y)` for cell size `cell`.
    fn sample(&self, x: f64, y: f64, cell: f64) -> f64 {
        let fx = x / cell;
        let fy = y / cell;
        let (x0, y0) = (fx.floor(), fy.floor());
        let (tx, ty) = (smooth(fx - x0), smooth(fy - y0));
        let n = self.size as i64;
        let at = |i: i64, j: i64| self.values[(j.rem_euclid(n) * n + i.rem_euclid(n)) as usize];
        let (i, j) = (x0 as i64, y0 as i64);
        let top = at(i, j) + (at(i + 1, j) - at(i, j)) * tx;
        let bottom = at(i, j + 1) + (at(i + 1, j + 1) - at(i, j + 1)) * tx;
        top + (bottom - top) * ty
    }

    fn octaves(&self, x: f64, y: f64, cells: &[(f64, f64)]) -> f64 {
        cells.iter().map(|&(c, a)| a * self.sample(x, y, c)).sum()
    }
}

fn smooth(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

struct Scene {
    facade: Lattice,
    skin: Lattice,
    cloth: Lattice,
    head_centre: (f64, f64),
    head_radii: (f64, f64),
}

impl Scene {
    fn new(params: &SceneParams) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        Self {
            facade: Lattice::new(64, &mut rng),
            skin: Lattice::new(64, &mut rng),
            cloth: Lattice::new(64, &mut rng),
            head_centre: (params.width as f64 * 0.47, params.height as f64 * 0.45),
            head_radii: (params.width as f64 * 0.17, params.height as f64 * 0.3),
        }
    }

    /// Background intensity at world coordinates.
    fn facade_at(&self, x: f64, y: f64) -> f64 {
        let base = 150.0 + 25.0 * (x / 400.0) - 20.0 * (y / 300.0);
        let grain = 10.0
            * self
                .facade
                .octaves(x, y, &[(24.0, 1.0), (6.0, 0.5), (2.0, 0.35)]);
        // Window frames: a dark grid on the right side of the facade.
        let gx = (x - 230.0).rem_euclid(48.0);
        let gy = (y - 20.0).rem_euclid(56.0);
        let frame = if x > 230.0 && (gx < 3.0 || gy < 3.0) {
            -45.0
        } else {
            0.0
        };
        base + grain + frame
    }

    /// Head and shoulder intensity in head-local coordinates, or `None` outside.
    fn head_at(&self, u: f64, v: f64) -> Option<f64> {
        let (rx, ry) = self.head_radii;
        let d = (u / rx).powi(2) + (v / ry).powi(2);
        if d <= 1.0 {
            let shade = 115.0 - 30.0 * (u / rx) - 10.0 * (v / ry);
            let tex = 18.0
                * self
                    .skin
                    .octaves(u, v, &[(10.0, 1.0), (4.0, 0.6), (1.5, 0.4)]);
            // Eyes and mouth: darker blobs.
            let feature = |cx: f64, cy: f64, sx: f64, sy: f64| {
                let e = ((u - cx * rx) / (sx * rx)).powi(2) + ((v - cy * ry) / (sy * ry)).powi(2);
                if e < 1.0 {
                    -50.0 * (1.0 - e)
                } else {
                    0.0
                }
            };
            let features = feature(-0.35, -0.2, 0.18, 0.07)
                + feature(0.35, -0.2, 0.18, 0.07)
                + feature(0.0, 0.45, 0.35, 0.07);
            let rim = if d > 0.9 {
                -40.0 * (d - 0.9) / 0.1
            } else {
                0.0
            };
            return Some(shade + tex + features + rim);
        }
        if v > 0.6 * ry {
            // Shoulders.
            let span = rx * 2.8 * ((v - 0.6 * ry) / ry).sqrt().min(1.0);
            if u.abs() < span {
                let stripes = 12.0 * ((u + 0.3 * v) / 5.0).sin();
                return Some(
                    70.0 + stripes + 15.0 * self.cloth.octaves(u, v, &[(12.0, 1.0), (3.0, 0.5)]),
                );
            }
        }
        None
    }

    #[allow(clippy::too_many_arguments)]
    fn render(
        &self,
        params: &SceneParams,
        pan: (f64, f64),
        head: (f64, f64),
        turn: f64,
        gain: f64,
        offset: f64,
        noise_seed: u64,
    ) -> LumaFrame {
        let mut rng = ChaCha8Rng::seed_from_u64(noise_seed);
        let normal = Normal::new(0.0, params.noise_sigma.max(1e-12)).expect("finite sigma");
        let (cs, sn) = (turn.cos(), turn.sin());
        LumaFrame::from_fn(params.width, params.height, |x, y| {
            let (xf, yf) = (x as f64, y as f64);
            let hx = xf - (self.head_centre.0 + head.0);
            let hy = yf - (self.head_centre.1 + head.1);
            let u = cs * hx + sn * hy;
            let v = -sn * hx + cs * hy;
            let value = self
                .head_at(u, v)
                .unwrap_or_else(|| self.facade_at(xf + pan.0, yf + pan.1));
            let noisy = gain * value
                + offset
                + if params.noise_sigma > 0.0 {
                    normal.sample(&mut rng)
                } else {
                    0.0
                };
            noisy.round().clamp(0.0, 255.0) as u8
        })
        .expect("non-empty scene")
    }
}

/// Renders the (reference, target) pair for `params`.
pub fn render_pair(params: &SceneParams) -> (LumaFrame, LumaFrame) {
    let scene = Scene::new(params);
    let reference = scene.render(
        params,
        (0.0, 0.0),
        (0.0, 0.0),
        0.0,
        1.0,
        0.0,
        params.seed ^ 0x5eed_0001,
    );
    let target = scene.render(
        params,
        params.pan,
        params.head_shift,
        params.head_turn,
        params.gain,
        params.offset,
        params.seed ^ 0x5eed_0002,
    );
    (reference, target)
}

/// The pinned CIF pair used by the acceptance suite and examples.
pub fn cif_pair() -> (LumaFrame, LumaFrame) {
    render_pair(&SceneParams::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_pair_is_cif_and_deterministic() {
        let (r, t) = cif_pair();
        assert_eq!((r.width(), r.height()), (CIF_WIDTH, CIF_HEIGHT));
        assert_eq!((r.clone(), t.clone()), cif_pair());
        assert_ne!(r, t);
    }
}
