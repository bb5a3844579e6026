//! Structural similarity on 8-bit samples.
//!
//! Window statistics are accumulated as exact integer sums and use the biased
//! (divide-by-N) estimator throughout.

use crate::error::{Error, Result};
use crate::frame::GridView;

/// How local statistics are gathered.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SsimWindow {
    /// One window covering the whole input.
    WholeBlock,
    /// Square windows of `size` moved by `stride`; the score is their mean.
    Sliding { size: usize, stride: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SsimParams {
    pub k1: f64,
    pub k2: f64,
    pub dynamic_range: f64,
    pub window: SsimWindow,
}

impl Default for SsimParams {
    fn default() -> Self {
        Self::block()
    }
}

impl SsimParams {
    /// Whole-block statistics, used for block matching.
    pub fn block() -> Self {
        Self {
            k1: 0.01,
            k2: 0.03,
            dynamic_range: 255.0,
            window: SsimWindow::WholeBlock,
        }
    }

    /// 8x8 windows at stride 1, used for frame evaluation.
    pub fn frame() -> Self {
        Self {
            window: SsimWindow::Sliding { size: 8, stride: 1 },
            ..Self::block()
        }
    }

    pub fn with_window(mut self, window: SsimWindow) -> Self {
        self.window = window;
        self
    }

    pub fn c1(&self) -> f64 {
        (self.k1 * self.dynamic_range).powi(2)
    }

    pub fn c2(&self) -> f64 {
        (self.k2 * self.dynamic_range).powi(2)
    }

    pub fn c3(&self) -> f64 {
        self.c2() / 2.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c1() > 0.0 && self.c2() > 0.0 && self.c1().is_finite() && self.c2().is_finite()) {
            return Err(Error::InvalidConfig(
                "SSIM stabilizers must be positive".into(),
            ));
        }
        if let SsimWindow::Sliding { size, stride } = self.window {
            if size == 0 || stride == 0 {
                return Err(Error::InvalidConfig(
                    "SSIM window size and stride must be positive".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Integer moments of one window pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Moments {
    pub n: u64,
    pub sum_a: u64,
    pub sum_b: u64,
    pub sum_aa: u64,
    pub sum_bb: u64,
    pub sum_ab: u64,
}

impl Moments {
    #[inline]
    pub fn self_moments(a: GridView<'_>) -> (u64, u64) {
        let mut s = 0u64;
        let mut ss = 0u64;
        for row in a.rows() {
            let mut rs = 0u32;
            let mut rss = 0u32;
            for &v in row {
                rs += v as u32;
                rss += v as u32 * v as u32;
            }
            s += rs as u64;
            ss += rss as u64;
        }
        (s, ss)
    }

    #[inline]
    pub fn cross(a: GridView<'_>, b: GridView<'_>) -> (u64, u64, u64) {
        let mut sb = 0u64;
        let mut sbb = 0u64;
        let mut sab = 0u64;
        for (ra, rb) in a.rows().zip(b.rows()) {
            let mut rs = 0u32;
            let mut rss = 0u32;
            let mut rab = 0u32;
            for (&x, &y) in ra.iter().zip(rb) {
                let y = y as u32;
                rs += y;
                rss += y * y;
                rab += x as u32 * y;
            }
            sb += rs as u64;
            sbb += rss as u64;
            sab += rab as u64;
        }
        (sb, sbb, sab)
    }

    pub fn of(a: GridView<'_>, b: GridView<'_>) -> Self {
        let (sum_a, sum_aa) = Self::self_moments(a);
        let (sum_b, sum_bb, sum_ab) = Self::cross(a, b);
        Self {
            n: a.len() as u64,
            sum_a,
            sum_b,
            sum_aa,
            sum_bb,
            sum_ab,
        }
    }
}

/// Luminance x contrast x structure from exact moments.
#[inline]
pub(crate) fn ssim_from_moments(m: &Moments, c1: f64, c2: f64, c3: f64) -> f64 {
    let n = m.n as i128;
    let nf = m.n as f64;
    let n2 = nf * nf;
    // n^2 times the biased (co)variances, exact in integers.
    let var_a = (n * m.sum_aa as i128 - (m.sum_a as i128).pow(2)) as f64 / n2;
    let var_b = (n * m.sum_bb as i128 - (m.sum_b as i128).pow(2)) as f64 / n2;
    let cov = (n * m.sum_ab as i128 - m.sum_a as i128 * m.sum_b as i128) as f64 / n2;
    let mu_a = m.sum_a as f64 / nf;
    let mu_b = m.sum_b as f64 / nf;
    let sd_prod = (var_a * var_b).sqrt();

    let luminance = (2.0 * mu_a * mu_b + c1) / (mu_a * mu_a + mu_b * mu_b + c1);
    let contrast = (2.0 * sd_prod + c2) / (var_a + var_b + c2);
    let structure = (cov + c3) / (sd_prod + c3);
    luminance * contrast * structure
}

/// SSIM of two equally shaped inputs.
pub fn ssim_score(a: GridView<'_>, b: GridView<'_>, params: &SsimParams) -> Result<f64> {
    a.same_shape(&b)?;
    params.validate()?;
    let (c1, c2, c3) = (params.c1(), params.c2(), params.c3());
    match params.window {
        SsimWindow::WholeBlock => {
            if a.len() < 2 {
                return Err(Error::TooSmall {
                    width: a.width(),
                    height: a.height(),
                    reason: "whole-block SSIM needs at least two samples".into(),
                });
            }
            Ok(ssim_from_moments(&Moments::of(a, b), c1, c2, c3))
        }
        SsimWindow::Sliding { size, stride } => {
            if size > a.width() || size > a.height() {
                return Err(Error::TooSmall {
                    width: a.width(),
                    height: a.height(),
                    reason: format!("SSIM window {size} larger than input"),
                });
            }
            let mut total = 0.0;
            let mut count = 0usize;
            for y in (0..=a.height() - size).step_by(stride) {
                for x in (0..=a.width() - size).step_by(stride) {
                    let m = Moments::of(a.sub(x, y, size, size), b.sub(x, y, size, size));
                    total += ssim_from_moments(&m, c1, c2, c3);
                    count += 1;
                }
            }
            Ok(total / count as f64)
        }
    }
}
