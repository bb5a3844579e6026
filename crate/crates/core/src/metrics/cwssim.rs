//! Complex-wavelet SSIM.
//!
//! Within each subband, a magnitude term times a phase-consistency term is
//! computed over every square window of co-located coefficients and averaged;
//! the score is the mean over subbands.

use std::cell::RefCell;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frame::GridView;
use crate::pyramid::{ComplexPyramid, PyramidConfig, PyramidPlan};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CwSsimParams {
    /// Stabilizer, in coefficient-magnitude units.
    pub k: f64,
    /// Side of the sliding coefficient window, clamped to each subband.
    pub window: usize,
    /// `None` picks [`PyramidConfig::for_block`] from the input's shorter side.
    pub pyramid: Option<PyramidConfig>,
}

impl Default for CwSsimParams {
    fn default() -> Self {
        Self {
            k: 0.01,
            window: 7,
            pyramid: None,
        }
    }
}

impl CwSsimParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::InvalidConfig("CW-SSIM K must be positive".into()));
        }
        if self.window == 0 {
            return Err(Error::InvalidConfig(
                "CW-SSIM window must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn pyramid_for(&self, width: usize, height: usize) -> PyramidConfig {
        self.pyramid
            .unwrap_or_else(|| PyramidConfig::for_block(width.min(height)))
    }
}

/// Running sums of one row over every `win`-long window; `out` holds one per window.
fn row_window_sums<T>(src: &[T], win: usize, out: &mut [T])
where
    T: Copy + std::iter::Sum + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    let mut s: T = src[..win].iter().copied().sum();
    out[0] = s;
    for ((o, &enter), &leave) in out[1..].iter_mut().zip(&src[win..]).zip(src) {
        s = s + enter - leave;
        *o = s;
    }
}

/// Turns per-row window sums (`ow` per row) into full `win` x `win` window sums.
fn column_window_sums<T>(rows: &[T], ow: usize, win: usize, out: &mut [T])
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    out[..ow].copy_from_slice(&rows[..ow]);
    for line in rows.chunks_exact(ow).take(win).skip(1) {
        for (o, &r) in out[..ow].iter_mut().zip(line) {
            *o = *o + r;
        }
    }
    for y in 1..out.len() / ow {
        let (done, rest) = out.split_at_mut(y * ow);
        let prev = &done[(y - 1) * ow..];
        let enter = &rows[(y + win - 1) * ow..][..ow];
        let leave = &rows[(y - 1) * ow..][..ow];
        for (((o, &p), &e), &l) in rest[..ow].iter_mut().zip(prev).zip(enter).zip(leave) {
            *o = p + e - l;
        }
    }
}

/// Window sums of a `width`-wide grid, using `rows` as scratch.
fn window_sums<T>(src: &[T], width: usize, win: usize, rows: &mut Vec<T>, out: &mut Vec<T>)
where
    T: Copy + Default + std::iter::Sum + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    let (ow, oh) = (width - win + 1, src.len() / width - win + 1);
    rows.resize(ow * (src.len() / width), T::default());
    for (line, dst) in src.chunks_exact(width).zip(rows.chunks_exact_mut(ow)) {
        row_window_sums(line, win, dst);
    }
    out.resize(ow * oh, T::default());
    column_window_sums(rows, ow, win, out);
}

/// A decomposed input plus the per-window coefficient energy of each subband.
pub(crate) struct CwSide {
    pyramid: ComplexPyramid,
    window: usize,
    energy: Vec<Vec<f64>>,
}

impl CwSide {
    pub(crate) fn new(pyramid: ComplexPyramid, window: usize) -> Self {
        let mut rows = Vec::new();
        let energy = pyramid
            .subbands
            .iter()
            .map(|band| {
                let win = window.min(band.width).min(band.height);
                let squares: Vec<f64> = band.coeffs.iter().map(|c| c.norm_sqr()).collect();
                let mut out = Vec::new();
                window_sums(&squares, band.width, win, &mut rows, &mut out);
                out
            })
            .collect();
        Self {
            pyramid,
            window,
            energy,
        }
    }

    /// Mean over subbands of the windowed index. Per window the magnitude and
    /// phase terms share `2 sum |x||y| + K`, which cancels, leaving
    /// `(2 |sum x y*| + K) / (sum |x|^2 + sum |y|^2 + K)`.
    pub(crate) fn score(&self, other: &CwSide, k: f64) -> f64 {
        SCRATCH.with(|s| {
            let s = &mut *s.borrow_mut();
            let mut total = 0.0;
            let bands = self.pyramid.subbands.iter().zip(&other.pyramid.subbands);
            for ((bx, by), (ex, ey)) in bands.zip(self.energy.iter().zip(&other.energy)) {
                let win = self.window.min(bx.width).min(bx.height);
                s.line.clear();
                s.line
                    .extend(bx.coeffs.iter().zip(&by.coeffs).map(|(x, y)| x * y.conj()));
                window_sums(&s.line, bx.width, win, &mut s.rows, &mut s.sums);
                let mut band = 0.0;
                for ((c, &a), &b) in s.sums.iter().zip(ex).zip(ey) {
                    band += (2.0 * c.norm_sqr().sqrt() + k) / (a + b + k);
                }
                total += band / s.sums.len() as f64;
            }
            total / self.pyramid.subbands.len() as f64
        })
    }
}

#[derive(Default)]
struct Scratch {
    line: Vec<Complex64>,
    rows: Vec<Complex64>,
    sums: Vec<Complex64>,
}

thread_local! {
    static SCRATCH: RefCell<Scratch> = RefCell::new(Scratch::default());
}

/// CW-SSIM of two equally shaped inputs.
pub fn cw_ssim_score(a: GridView<'_>, b: GridView<'_>, params: &CwSsimParams) -> Result<f64> {
    a.same_shape(&b)?;
    params.validate()?;
    let plan = PyramidPlan::shared(
        a.width(),
        a.height(),
        params.pyramid_for(a.width(), a.height()),
    )?;
    let side = |v| plan.decompose(v).map(|p| CwSide::new(p, params.window));
    Ok(side(a)?.score(&side(b)?, params.k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::LumaFrame;
    use crate::metrics::ssim::{ssim_score, SsimParams};
    use crate::synth;

    #[test]
    fn identity_and_constant() {
        let t = synth::texture(16, 16, 5);
        let p = CwSsimParams::default();
        assert!((cw_ssim_score(t.view(), t.view(), &p).unwrap() - 1.0).abs() < 1e-9);
        let a = LumaFrame::filled(16, 16, 40).unwrap();
        let b = LumaFrame::filled(16, 16, 200).unwrap();
        assert!((cw_ssim_score(a.view(), b.view(), &p).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn symmetric_and_bounded() {
        let a = synth::texture(16, 16, 6);
        let b = synth::texture(16, 16, 7);
        let p = CwSsimParams::default();
        let ab = cw_ssim_score(a.view(), b.view(), &p).unwrap();
        let ba = cw_ssim_score(b.view(), a.view(), &p).unwrap();
        assert!((ab - ba).abs() < 1e-9);
        assert!((-1.0..=1.0).contains(&ab));
    }

    #[test]
    fn translation_tolerant_compared_to_ssim() {
        let big = synth::texture(40, 40, 8);
        let a = big.view().sub(10, 10, 16, 16).to_frame();
        let b = big.view().sub(11, 10, 16, 16).to_frame();
        let cw = cw_ssim_score(a.view(), b.view(), &CwSsimParams::default()).unwrap();
        let s = ssim_score(a.view(), b.view(), &SsimParams::block()).unwrap();
        assert!(cw > s, "cw {cw} ssim {s}");
    }

    /// The index evaluated window by window straight from the coefficients.
    fn direct(a: &LumaFrame, b: &LumaFrame, p: &CwSsimParams) -> f64 {
        let config = p.pyramid_for(a.width(), a.height());
        let pa = crate::pyramid::decompose(a.view(), config).unwrap();
        let pb = crate::pyramid::decompose(b.view(), config).unwrap();
        let mut bands = 0.0;
        for (x, y) in pa.subbands.iter().zip(&pb.subbands) {
            let win = p.window.min(x.width).min(x.height);
            let (mut sum, mut count) = (0.0, 0.0);
            for oy in 0..=x.height - win {
                for ox in 0..=x.width - win {
                    let (mut m, mut e, mut c) =
                        (0.0, 0.0, rustfft::num_complex::Complex64::new(0.0, 0.0));
                    for j in 0..win {
                        for i in 0..win {
                            let idx = (oy + j) * x.width + ox + i;
                            let (cx, cy) = (x.coeffs[idx], y.coeffs[idx]);
                            m += cx.norm() * cy.norm();
                            e += cx.norm_sqr() + cy.norm_sqr();
                            c += cx * cy.conj();
                        }
                    }
                    sum += (2.0 * m + p.k) / (e + p.k) * (2.0 * c.norm() + p.k) / (2.0 * m + p.k);
                    count += 1.0;
                }
            }
            bands += sum / count;
        }
        bands / pa.subbands.len() as f64
    }

    #[test]
    fn matches_windowed_oracle() {
        for (side, window) in [(16, 7), (16, 100), (8, 3), (32, 7)] {
            let a = synth::texture(side, side, side as u64);
            let b = synth::translate(&synth::texture(side, side, 99), 1, 1);
            let p = CwSsimParams {
                window,
                ..Default::default()
            };
            let fast = cw_ssim_score(a.view(), b.view(), &p).unwrap();
            let slow = direct(&a, &b, &p);
            assert!(
                (fast - slow).abs() < 1e-9,
                "{side}/{window}: {fast} vs {slow}"
            );
        }
    }

    #[test]
    fn too_small_for_pyramid() {
        let a = LumaFrame::filled(12, 12, 0).unwrap();
        let p = CwSsimParams {
            pyramid: Some(PyramidConfig::new(2, 6).unwrap()),
            ..Default::default()
        };
        assert!(matches!(
            cw_ssim_score(a.view(), a.view(), &p),
            Err(Error::TooSmall { .. })
        ));
        let bad_k = CwSsimParams {
            k: 0.0,
            ..Default::default()
        };
        assert!(cw_ssim_score(a.view(), a.view(), &bad_k).is_err());
        let bad_window = CwSsimParams {
            window: 0,
            ..Default::default()
        };
        assert!(cw_ssim_score(a.view(), a.view(), &bad_window).is_err());
    }
}
