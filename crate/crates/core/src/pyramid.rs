//! Complex steerable pyramid built in the frequency domain.
//!
//! The input is mirror-extended to twice its size, transformed with a 2-D FFT
//! and split by polar-separable masks: a log-radial raised-cosine band-pass
//! times a one-sided `cos^(K-1)` angular window per orientation. The one-sided
//! angular window makes every band analytic, so coefficients carry phase.
//! Each level halves the grid by cropping the spectrum.
//!
//! There is no synthesis path; only analysis is needed here.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::rc::Rc;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::frame::GridView;

/// Signal extension used before filtering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Half-sample symmetric reflection.
    #[default]
    Mirror,
}

/// Shape of a pyramid decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PyramidConfig {
    pub levels: usize,
    pub orientations: usize,
    pub boundary: Boundary,
}

impl PyramidConfig {
    pub fn new(levels: usize, orientations: usize) -> Result<Self> {
        if levels < 1 {
            return Err(Error::InvalidConfig(
                "pyramid needs at least one level".into(),
            ));
        }
        if orientations < 2 {
            return Err(Error::InvalidConfig(
                "pyramid needs at least two orientations".into(),
            ));
        }
        Ok(Self {
            levels,
            orientations,
            boundary: Boundary::Mirror,
        })
    }

    /// Default for whole frames: 3 levels, 6 orientations.
    pub fn frame_default() -> Self {
        Self {
            levels: 3,
            orientations: 6,
            boundary: Boundary::Mirror,
        }
    }

    /// Default ladder for square blocks: 2 levels at 16, 1 level at 8.
    /// Larger blocks get as many levels as fit, capped at 3.
    pub fn for_block(size: usize) -> Self {
        let levels = match size {
            0..=15 => 1,
            16..=31 => 2,
            _ => 3,
        };
        Self {
            levels,
            orientations: 6,
            boundary: Boundary::Mirror,
        }
    }

    /// Smallest side an input may have for this configuration.
    pub fn min_side(&self) -> usize {
        4usize << self.levels
    }

    pub fn check_input(&self, width: usize, height: usize) -> Result<()> {
        if self.levels < 1 || self.orientations < 2 {
            return Err(Error::InvalidConfig(format!(
                "bad pyramid shape {} levels x {} orientations",
                self.levels, self.orientations
            )));
        }
        let min = self.min_side();
        if width < min || height < min {
            return Err(Error::TooSmall {
                width,
                height,
                reason: format!(
                    "{} pyramid levels need a side of at least {min}",
                    self.levels
                ),
            });
        }
        Ok(())
    }
}

/// One oriented band at one scale.
#[derive(Clone, Debug, PartialEq)]
pub struct Subband {
    pub level: usize,
    pub orientation: usize,
    pub width: usize,
    pub height: usize,
    pub coeffs: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPyramid {
    /// Ordered by level, then orientation.
    pub subbands: Vec<Subband>,
    pub residual_lowpass: Vec<f64>,
    pub lowpass_width: usize,
    pub lowpass_height: usize,
}

impl ComplexPyramid {
    pub fn subband(&self, level: usize, orientation: usize) -> Option<&Subband> {
        self.subbands
            .iter()
            .find(|b| b.level == level && b.orientation == orientation)
    }
}

/// Row-then-column 2-D FFT over a row-major buffer.
struct Fft2d {
    rows: usize,
    cols: usize,
    row_fft: Arc<dyn Fft<f64>>,
    col_fft: Arc<dyn Fft<f64>>,
}

impl Fft2d {
    fn new(planner: &mut FftPlanner<f64>, rows: usize, cols: usize, inverse: bool) -> Self {
        let (row_fft, col_fft) = if inverse {
            (
                planner.plan_fft_inverse(cols),
                planner.plan_fft_inverse(rows),
            )
        } else {
            (
                planner.plan_fft_forward(cols),
                planner.plan_fft_forward(rows),
            )
        };
        Self {
            rows,
            cols,
            row_fft,
            col_fft,
        }
    }

    fn scratch_len(&self) -> usize {
        self.row_fft
            .get_inplace_scratch_len()
            .max(self.col_fft.get_inplace_scratch_len())
    }

    /// Inverse-transforms `spectrum`, optionally times `mask`, and appends the
    /// top-left `keep_rows x keep_cols` region, times `scale`, to `out`. Only
    /// `lines` are read; the mask must be zero elsewhere.
    #[allow(clippy::too_many_arguments)]
    fn process_region(
        &self,
        spectrum: &[Complex64],
        mask: Option<&[f64]>,
        buf: &mut [Complex64],
        tmp: &mut [Complex64],
        scratch: &mut [Complex64],
        lines: &LiveLines,
        keep_rows: usize,
        keep_cols: usize,
        scale: f64,
        out: &mut Vec<Complex64>,
    ) {
        let (r, c) = (self.rows, self.cols);
        match lines {
            LiveLines::Rows(live) => {
                for &i in live {
                    let src = &spectrum[i * c..(i + 1) * c];
                    let dst = &mut buf[i * c..(i + 1) * c];
                    match mask {
                        Some(m) => {
                            for ((d, s), m) in dst.iter_mut().zip(src).zip(&m[i * c..(i + 1) * c]) {
                                *d = s * m;
                            }
                        }
                        None => dst.copy_from_slice(src),
                    }
                    self.row_fft.process_with_scratch(dst, scratch);
                }
                let cols = &mut tmp[..keep_cols * r];
                cols.fill(Complex64::default());
                for &i in live {
                    for (x, v) in buf[i * c..i * c + keep_cols].iter().enumerate() {
                        cols[x * r + i] = *v;
                    }
                }
                self.col_fft.process_with_scratch(cols, scratch);
                let start = out.len();
                out.resize(start + keep_rows * keep_cols, Complex64::default());
                for (x, col) in cols.chunks_exact(r).enumerate() {
                    for (dst, v) in out[start + x..]
                        .iter_mut()
                        .step_by(keep_cols)
                        .zip(&col[..keep_rows])
                    {
                        *dst = v * scale;
                    }
                }
            }
            LiveLines::Cols(live) => {
                for &j in live {
                    let col = &mut tmp[j * r..(j + 1) * r];
                    match mask {
                        Some(m) => {
                            for (i, d) in col.iter_mut().enumerate() {
                                *d = spectrum[i * c + j] * m[i * c + j];
                            }
                        }
                        None => {
                            for (i, d) in col.iter_mut().enumerate() {
                                *d = spectrum[i * c + j];
                            }
                        }
                    }
                    self.col_fft.process_with_scratch(col, scratch);
                }
                let rows = &mut buf[..keep_rows * c];
                rows.fill(Complex64::default());
                for &j in live {
                    for (y, v) in tmp[j * r..j * r + keep_rows].iter().enumerate() {
                        rows[y * c + j] = *v;
                    }
                }
                self.row_fft.process_with_scratch(rows, scratch);
                for y in 0..keep_rows {
                    out.extend(buf[y * c..y * c + keep_cols].iter().map(|v| v * scale));
                }
            }
        }
    }
}

/// Spectrum lines that can be nonzero under a mask, along the cheaper axis.
enum LiveLines {
    Rows(Vec<usize>),
    Cols(Vec<usize>),
}

impl LiveLines {
    fn of(mask: &[f64], rows: usize, cols: usize) -> Self {
        let live_rows: Vec<usize> = (0..rows)
            .filter(|&i| mask[i * cols..(i + 1) * cols].iter().any(|&m| m != 0.0))
            .collect();
        let live_cols: Vec<usize> = (0..cols)
            .filter(|&j| (0..rows).any(|i| mask[i * cols + j] != 0.0))
            .collect();
        // Rows first costs live_rows + kept columns; columns first the mirror.
        if live_cols.len() * cols < live_rows.len() * rows {
            Self::Cols(live_cols)
        } else {
            Self::Rows(live_rows)
        }
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    for (x, col) in dst[..rows * cols].chunks_exact_mut(rows).enumerate() {
        for (d, row) in col.iter_mut().zip(src.chunks_exact(cols)) {
            *d = row[x];
        }
    }
}

/// Signed frequency index of FFT bin `i` on an axis of length `n`.
#[inline]
fn signed_bin(i: usize, n: usize) -> isize {
    if i < n.div_ceil(2) {
        i as isize
    } else {
        i as isize - n as isize
    }
}

/// High side of the raised-cosine split on log2 radius `t`: 0 below -1, 1 above 0.
fn radial_high(t: f64) -> f64 {
    if t >= 0.0 {
        1.0
    } else if t <= -1.0 {
        0.0
    } else {
        (PI / 2.0 * t).cos()
    }
}

fn radial_low(t: f64) -> f64 {
    let h = radial_high(t);
    (1.0 - h * h).max(0.0).sqrt()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

struct LevelPlan {
    rows: usize,
    cols: usize,
    sub_width: usize,
    sub_height: usize,
    inverse: Fft2d,
    /// Applied to the incoming spectrum of this level. Includes the crop rescale.
    low_mask: Vec<f64>,
    band_masks: Vec<Vec<f64>>,
    band_lines: Vec<LiveLines>,
    /// Source bin in the previous level's grid for each bin of this one.
    crop_from: Vec<usize>,
}

/// Reusable per-thread buffers for [`PyramidPlan::decompose`].
#[derive(Default)]
struct Workspace {
    spectrum: Vec<Complex64>,
    next: Vec<Complex64>,
    work: Vec<Complex64>,
    tmp: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

thread_local! {
    static WORKSPACE: RefCell<Workspace> = RefCell::new(Workspace::default());
}

/// Precomputed masks and FFT plans for one input size and configuration.
pub struct PyramidPlan {
    config: PyramidConfig,
    width: usize,
    height: usize,
    forward: Fft2d,
    levels: Vec<LevelPlan>,
    scratch_len: usize,
}

impl PyramidPlan {
    pub fn new(width: usize, height: usize, config: PyramidConfig) -> Result<Self> {
        config.check_input(width, height)?;
        let mut planner = FftPlanner::new();
        let (rows0, cols0) = (2 * height, 2 * width);
        let forward = Fft2d::new(&mut planner, rows0, cols0, false);
        let mut scratch_len = forward.scratch_len();

        let order = config.orientations - 1;
        let norm = (2f64.powi(2 * order as i32) * factorial(order).powi(2)
            / (config.orientations as f64 * factorial(2 * order)))
        .sqrt();

        let mut levels = Vec::with_capacity(config.levels + 1);
        let (mut rows, mut cols) = (rows0, cols0);
        let mut prev_area = (rows0 * cols0) as f64;
        let mut prev_grid = (rows0, cols0);
        // One extra grid at the bottom carries the residual low-pass.
        for level in 0..=config.levels {
            let area = (rows * cols) as f64;
            let rescale = area / prev_area;
            prev_area = area;
            let mut low_mask = vec![0.0; rows * cols];
            let mut band_masks = if level < config.levels {
                vec![vec![0.0; rows * cols]; config.orientations]
            } else {
                Vec::new()
            };
            for i in 0..rows {
                let fy = 2.0 * signed_bin(i, rows) as f64 / rows as f64;
                for j in 0..cols {
                    let fx = 2.0 * signed_bin(j, cols) as f64 / cols as f64;
                    let r = (fx * fx + fy * fy).sqrt();
                    let idx = i * cols + j;
                    if r == 0.0 {
                        low_mask[idx] = rescale;
                        continue;
                    }
                    let t = r.log2();
                    low_mask[idx] = radial_low(t) * rescale;
                    if band_masks.is_empty() {
                        continue;
                    }
                    let high = radial_high(t + 1.0);
                    if high == 0.0 {
                        continue;
                    }
                    let angle = fy.atan2(fx);
                    for (b, mask) in band_masks.iter_mut().enumerate() {
                        let centre = PI * b as f64 / config.orientations as f64;
                        let mut d = angle - centre;
                        d = (d + PI).rem_euclid(2.0 * PI) - PI;
                        if d.abs() < PI / 2.0 {
                            mask[idx] = 2.0 * norm * d.cos().powi(order as i32) * high;
                        }
                    }
                }
            }
            let inverse = Fft2d::new(&mut planner, rows, cols, true);
            scratch_len = scratch_len.max(inverse.scratch_len());
            let band_lines = band_masks
                .iter()
                .map(|m| LiveLines::of(m, rows, cols))
                .collect();
            let (prev_rows, prev_cols) = prev_grid;
            let mut crop_from = Vec::with_capacity(rows * cols);
            for i in 0..rows {
                let si = signed_bin(i, rows).rem_euclid(prev_rows as isize) as usize;
                for j in 0..cols {
                    let sj = signed_bin(j, cols).rem_euclid(prev_cols as isize) as usize;
                    crop_from.push(si * prev_cols + sj);
                }
            }
            levels.push(LevelPlan {
                rows,
                cols,
                sub_width: width >> level,
                sub_height: height >> level,
                inverse,
                low_mask,
                band_masks,
                band_lines,
                crop_from,
            });
            prev_grid = (rows, cols);
            rows /= 2;
            cols /= 2;
        }

        Ok(Self {
            config,
            width,
            height,
            forward,
            levels,
            scratch_len,
        })
    }

    /// A plan for this shape from a small per-thread cache.
    pub fn shared(width: usize, height: usize, config: PyramidConfig) -> Result<Rc<Self>> {
        thread_local! {
            static PLANS: RefCell<HashMap<(usize, usize, PyramidConfig), Rc<PyramidPlan>>> = RefCell::new(HashMap::new());
        }
        PLANS.with(|cell| {
            let mut plans = cell.borrow_mut();
            if let Some(p) = plans.get(&(width, height, config)) {
                return Ok(Rc::clone(p));
            }
            let plan = Rc::new(Self::new(width, height, config)?);
            if plans.len() >= 16 {
                plans.clear();
            }
            plans.insert((width, height, config), Rc::clone(&plan));
            Ok(plan)
        })
    }

    pub fn config(&self) -> PyramidConfig {
        self.config
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Spectral grid (rows, cols) of `level`; level 0 is the mirror-extended input.
    pub fn grid_shape(&self, level: usize) -> (usize, usize) {
        (self.levels[level].rows, self.levels[level].cols)
    }

    /// Low-pass mask applied on entry to `level`, in FFT bin order.
    pub fn low_mask(&self, level: usize) -> &[f64] {
        &self.levels[level].low_mask
    }

    /// Band mask of (`level`, `orientation`) in FFT bin order.
    pub fn band_mask(&self, level: usize, orientation: usize) -> &[f64] {
        &self.levels[level].band_masks[orientation]
    }

    pub fn decompose(&self, image: GridView<'_>) -> Result<ComplexPyramid> {
        self.check_shape(image.width(), image.height())?;
        Ok(self.run(|y, out| {
            for (o, &v) in out.iter_mut().zip(image.row(y)) {
                *o = Complex64::new(v as f64, 0.0);
            }
        }))
    }

    /// Decomposes a row-major real-valued image.
    pub fn decompose_real(
        &self,
        samples: &[f64],
        width: usize,
        height: usize,
    ) -> Result<ComplexPyramid> {
        self.check_shape(width, height)?;
        if samples.len() != width * height {
            return Err(Error::InvalidConfig(format!(
                "{} samples supplied for a {width}x{height} image",
                samples.len()
            )));
        }
        Ok(self.run(|y, out| {
            for (o, &v) in out.iter_mut().zip(&samples[y * width..(y + 1) * width]) {
                *o = Complex64::new(v, 0.0);
            }
        }))
    }

    fn check_shape(&self, width: usize, height: usize) -> Result<()> {
        if width != self.width || height != self.height {
            return Err(Error::ShapeMismatch {
                a_width: self.width,
                a_height: self.height,
                b_width: width,
                b_height: height,
            });
        }
        Ok(())
    }

    /// `fill_row(y, out)` writes input row `y` into the first `width` entries of `out`.
    fn run(&self, fill_row: impl Fn(usize, &mut [Complex64])) -> ComplexPyramid {
        WORKSPACE.with(|ws| self.run_in(&mut ws.borrow_mut(), fill_row))
    }

    fn run_in(
        &self,
        ws: &mut Workspace,
        fill_row: impl Fn(usize, &mut [Complex64]),
    ) -> ComplexPyramid {
        let (w, h) = (self.width, self.height);
        let top = &self.levels[0];
        let (rows0, cols0) = (top.rows, top.cols);
        let n0 = rows0 * cols0;
        let Workspace {
            spectrum,
            next,
            work,
            tmp,
            scratch,
        } = ws;
        for (v, n) in [
            (&mut *spectrum, n0),
            (&mut *next, n0),
            (&mut *work, n0),
            (&mut *tmp, n0),
            (&mut *scratch, self.scratch_len),
        ] {
            if v.len() < n {
                v.resize(n, Complex64::default());
            }
        }

        // The extension is symmetric in y, so only the top half of the rows
        // needs a row transform.
        for y in 0..h {
            let (left, right) = spectrum[y * cols0..(y + 1) * cols0].split_at_mut(w);
            fill_row(y, left);
            for (r, l) in right.iter_mut().rev().zip(left.iter()) {
                *r = *l;
            }
        }
        self.forward
            .row_fft
            .process_with_scratch(&mut spectrum[..h * cols0], scratch);
        for y in 0..h {
            spectrum.copy_within(y * cols0..(y + 1) * cols0, (rows0 - 1 - y) * cols0);
        }
        transpose(&spectrum[..n0], &mut tmp[..n0], rows0, cols0);
        self.forward
            .col_fft
            .process_with_scratch(&mut tmp[..n0], scratch);
        transpose(&tmp[..n0], &mut spectrum[..n0], cols0, rows0);
        for (s, m) in spectrum.iter_mut().zip(&top.low_mask) {
            *s *= *m;
        }

        let mut subbands = Vec::with_capacity(self.config.levels * self.config.orientations);
        for (level, plan) in self.levels.iter().enumerate() {
            let n = plan.rows * plan.cols;
            if level > 0 {
                // Keep the central half of the spectrum, then low-pass.
                for ((o, &src), m) in next[..n]
                    .iter_mut()
                    .zip(&plan.crop_from)
                    .zip(&plan.low_mask)
                {
                    *o = spectrum[src] * *m;
                }
                std::mem::swap(spectrum, next);
            }
            let inv_n = 1.0 / n as f64;
            if level == self.config.levels {
                let all = LiveLines::Rows((0..plan.rows).collect());
                let mut region = Vec::with_capacity(plan.sub_width * plan.sub_height);
                plan.inverse.process_region(
                    &spectrum[..n],
                    None,
                    &mut work[..n],
                    tmp,
                    scratch,
                    &all,
                    plan.sub_height,
                    plan.sub_width,
                    inv_n,
                    &mut region,
                );
                return ComplexPyramid {
                    subbands,
                    residual_lowpass: region.iter().map(|c| c.re).collect(),
                    lowpass_width: plan.sub_width,
                    lowpass_height: plan.sub_height,
                };
            }
            for (orientation, (mask, lines)) in
                plan.band_masks.iter().zip(&plan.band_lines).enumerate()
            {
                let mut coeffs = Vec::with_capacity(plan.sub_width * plan.sub_height);
                plan.inverse.process_region(
                    &spectrum[..n],
                    Some(mask),
                    &mut work[..n],
                    tmp,
                    scratch,
                    lines,
                    plan.sub_height,
                    plan.sub_width,
                    inv_n,
                    &mut coeffs,
                );
                subbands.push(Subband {
                    level,
                    orientation,
                    width: plan.sub_width,
                    height: plan.sub_height,
                    coeffs,
                });
            }
        }
        unreachable!("the residual level always returns")
    }
}

/// One-shot decomposition. Prefer a reused [`PyramidPlan`] for many inputs of one size.
pub fn decompose(image: GridView<'_>, config: PyramidConfig) -> Result<ComplexPyramid> {
    PyramidPlan::shared(image.width(), image.height(), config)?.decompose(image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::LumaFrame;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn texture(w: usize, h: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..w * h).map(|_| rng.gen_range(0.0..255.0)).collect()
    }

    #[test]
    fn config_validation() {
        assert!(PyramidConfig::new(0, 6).is_err());
        assert!(PyramidConfig::new(2, 1).is_err());
        let c = PyramidConfig::new(2, 6).unwrap();
        assert!(c.check_input(16, 16).is_ok());
        assert!(matches!(c.check_input(15, 16), Err(Error::TooSmall { .. })));
        assert_eq!(PyramidConfig::for_block(16).levels, 2);
        assert_eq!(PyramidConfig::for_block(8).levels, 1);
        assert!(PyramidConfig::for_block(8).check_input(8, 8).is_ok());
        assert!(decompose(
            LumaFrame::filled(8, 8, 1).unwrap().view(),
            PyramidConfig::new(2, 6).unwrap()
        )
        .is_err());
    }

    #[test]
    fn subband_dimensions_halve() {
        let f = LumaFrame::from_fn(40, 36, |x, y| (x * 3 + y * 5) as u8).unwrap();
        let p = decompose(f.view(), PyramidConfig::new(3, 4).unwrap()).unwrap();
        assert_eq!(p.subbands.len(), 12);
        for b in &p.subbands {
            assert_eq!((b.width, b.height), (40 >> b.level, 36 >> b.level));
            assert_eq!(b.coeffs.len(), b.width * b.height);
            assert!(b
                .coeffs
                .iter()
                .all(|c| c.re.is_finite() && c.im.is_finite()));
        }
        assert_eq!((p.lowpass_width, p.lowpass_height), (5, 4));
    }

    #[test]
    fn constant_image_has_no_bandpass_energy() {
        for (side, cfg) in [
            (16, PyramidConfig::new(2, 6).unwrap()),
            (8, PyramidConfig::new(1, 6).unwrap()),
            (64, PyramidConfig::new(3, 6).unwrap()),
            (32, PyramidConfig::new(2, 3).unwrap()),
        ] {
            let f = LumaFrame::filled(side, side, 128).unwrap();
            let p = decompose(f.view(), cfg).unwrap();
            for b in &p.subbands {
                for c in &b.coeffs {
                    assert!(c.norm() < 1e-9, "{side} {cfg:?} {c}");
                }
            }
            for v in &p.residual_lowpass {
                assert!((v - 128.0).abs() < 1e-9, "{v}");
            }
        }
    }

    #[test]
    fn scaling_doubles_coefficients() {
        let x = texture(16, 16, 3);
        let x2: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let plan = PyramidPlan::new(16, 16, PyramidConfig::for_block(16)).unwrap();
        let a = plan.decompose_real(&x, 16, 16).unwrap();
        let b = plan.decompose_real(&x2, 16, 16).unwrap();
        for (ba, bb) in a.subbands.iter().zip(&b.subbands) {
            for (ca, cb) in ba.coeffs.iter().zip(&bb.coeffs) {
                assert!((cb - 2.0 * ca).norm() <= 1e-9 * (2.0 * ca.norm()).max(1e-3));
            }
        }
    }

    #[test]
    fn deterministic() {
        let f = LumaFrame::from_fn(32, 32, |x, y| ((x * 7) ^ (y * 13)) as u8).unwrap();
        let cfg = PyramidConfig::new(2, 6).unwrap();
        assert_eq!(
            decompose(f.view(), cfg).unwrap(),
            decompose(f.view(), cfg).unwrap()
        );
    }

    /// Naive DFT of the mirror-extended impulse, masked, then a naive inverse
    /// DFT at each retained position.
    fn naive_band(
        plan: &PyramidPlan,
        level: usize,
        orientation: usize,
        px: usize,
        py: usize,
        n: usize,
    ) -> Vec<Complex64> {
        let (r0, c0) = plan.grid_shape(0);
        let impulses = [
            (px, py),
            (2 * n - 1 - px, py),
            (px, 2 * n - 1 - py),
            (2 * n - 1 - px, 2 * n - 1 - py),
        ];
        // Spectrum on grid 0 from four impulses.
        let mut spec = vec![Complex64::default(); r0 * c0];
        for i in 0..r0 {
            for j in 0..c0 {
                let mut s = Complex64::default();
                for &(x, y) in &impulses {
                    let ph = -2.0 * PI * ((i * y) as f64 / r0 as f64 + (j * x) as f64 / c0 as f64);
                    s += Complex64::from_polar(1.0, ph);
                }
                spec[i * c0 + j] = s * plan.low_mask(0)[i * c0 + j];
            }
        }
        let (mut rows, mut cols) = (r0, c0);
        for l in 1..=level {
            let (nr, nc) = plan.grid_shape(l);
            let mut next = vec![Complex64::default(); nr * nc];
            for i in 0..nr {
                for j in 0..nc {
                    let si = signed_bin(i, nr).rem_euclid(rows as isize) as usize;
                    let sj = signed_bin(j, nc).rem_euclid(cols as isize) as usize;
                    next[i * nc + j] = spec[si * cols + sj] * plan.low_mask(l)[i * nc + j];
                }
            }
            spec = next;
            rows = nr;
            cols = nc;
        }
        let mask = plan.band_mask(level, orientation);
        let side = n >> level;
        let mut out = Vec::with_capacity(side * side);
        for y in 0..side {
            for x in 0..side {
                let mut s = Complex64::default();
                for i in 0..rows {
                    for j in 0..cols {
                        let m = mask[i * cols + j];
                        if m == 0.0 {
                            continue;
                        }
                        let ph = 2.0
                            * PI
                            * ((i * y) as f64 / rows as f64 + (j * x) as f64 / cols as f64);
                        s += spec[i * cols + j] * m * Complex64::from_polar(1.0, ph);
                    }
                }
                out.push(s / (rows * cols) as f64);
            }
        }
        out
    }

    #[test]
    fn impulse_response_matches_direct_transform() {
        let n = 32;
        let mut img = vec![0.0; n * n];
        img[16 * n + 16] = 1.0;
        let plan = PyramidPlan::new(n, n, PyramidConfig::new(2, 6).unwrap()).unwrap();
        let pyr = plan.decompose_real(&img, n, n).unwrap();
        for band in &pyr.subbands {
            let oracle = naive_band(&plan, band.level, band.orientation, 16, 16, n);
            let e_fast: f64 = band.coeffs.iter().map(|c| c.norm_sqr()).sum();
            let e_slow: f64 = oracle.iter().map(|c| c.norm_sqr()).sum();
            assert!(e_slow > 0.0);
            assert!(
                (e_fast - e_slow).abs() <= 1e-9 * e_slow,
                "{e_fast} vs {e_slow}"
            );
            for (a, b) in band.coeffs.iter().zip(&oracle) {
                assert!((a - b).norm() < 1e-9);
            }
            // Peak sits at the corresponding position in this subband.
            let (peak, _) = band
                .coeffs
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .unwrap();
            let (px, py) = (peak % band.width, peak / band.width);
            let centre = 16 >> band.level;
            assert!(
                px.abs_diff(centre) <= 1 && py.abs_diff(centre) <= 1,
                "{band:?}"
            );
        }
    }
}
