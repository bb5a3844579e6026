//! Visual information fidelity in the complex pyramid domain.
//!
//! Reference coefficients follow a scalar Gaussian scale mixture; the
//! distortion channel is a per-patch gain plus additive noise, and both
//! channels see the same additive perceptual noise. Per patch:
//!
//! ```text
//! g     = cov(c, d) / var(c)
//! sv2   = max(var(d) - g * cov(c, d), 0)
//! info_ref  = log2(1 + var(c) / sn2)
//! info_dist = log2(1 + g^2 var(c) / (sv2 + sn2))
//! ```
//!
//! The score is the sum of `info_dist` over the sum of `info_ref`, across all
//! patches of all subbands. Patches are square, slide with stride 1, and treat
//! each complex coefficient as one sample.

use std::cell::RefCell;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frame::GridView;
use crate::pyramid::{ComplexPyramid, PyramidConfig, PyramidPlan, Subband};

/// Reference patches at or below this variance carry no information and are
/// skipped, which also keeps the gain finite.
pub const VIF_EPS: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VifParams {
    /// Perceptual noise variance, in squared coefficient units.
    pub sigma_n_sq: f64,
    pub patch_size: usize,
    /// `None` picks [`PyramidConfig::for_block`] from the input's shorter side.
    pub pyramid: Option<PyramidConfig>,
}

impl Default for VifParams {
    fn default() -> Self {
        Self {
            sigma_n_sq: 0.4,
            patch_size: 3,
            pyramid: None,
        }
    }
}

impl VifParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_n_sq > 0.0 && self.sigma_n_sq.is_finite()) {
            return Err(Error::InvalidConfig(
                "VIF noise variance must be positive".into(),
            ));
        }
        if self.patch_size < 3 {
            return Err(Error::InvalidConfig(
                "VIF patch size must be at least 3".into(),
            ));
        }
        Ok(())
    }

    pub fn pyramid_for(&self, width: usize, height: usize) -> PyramidConfig {
        self.pyramid
            .unwrap_or_else(|| PyramidConfig::for_block(width.min(height)))
    }
}

/// Per-patch mean and variance of one subband, stride as in [`box_sums`].
#[derive(Clone, Debug, Default)]
struct BandStats {
    mean_re: Vec<f64>,
    mean_im: Vec<f64>,
    var: Vec<f64>,
}

/// A decomposed signal with its per-patch mean and variance, usable on either
/// side of the comparison.
#[derive(Clone, Debug)]
pub(crate) struct VifSide {
    pyramid: ComplexPyramid,
    stats: Vec<BandStats>,
    patch: usize,
}

/// Reference-side statistics, reusable against many distorted inputs.
#[derive(Clone, Debug)]
pub(crate) struct VifReference {
    side: VifSide,
    info_ref: f64,
    /// Per patch, 1 / var(c), or 0 where the reference patch carries no information.
    inv_var: Vec<Vec<f64>>,
    sigma_n_sq: f64,
}

#[derive(Default)]
struct Buffers {
    values: Vec<f64>,
    rows: Vec<f64>,
    sums: [Vec<f64>; 3],
}

thread_local! {
    static BUFFERS: RefCell<Buffers> = RefCell::new(Buffers::default());
}

/// Sums of `values` (a `w`-wide grid) over every `patch x patch` window,
/// windows sliding by one. The output keeps stride `w`: entry `y * w + x` is
/// the window at `(x, y)`, and entries with `x > w - patch` are meaningless.
/// Working on the flat grid keeps every pass one long contiguous loop.
fn box_sums(values: &[f64], w: usize, patch: usize, rows: &mut Vec<f64>, out: &mut Vec<f64>) {
    let h = values.len() / w;
    let rn = values.len() - (patch - 1);
    rows.resize(rn, 0.0);
    let r = &mut rows[..rn];
    if patch == 3 {
        let v = &values[..rn + 2];
        for i in 0..rn {
            r[i] = v[i] + v[i + 1] + v[i + 2];
        }
    } else {
        r.copy_from_slice(&values[..rn]);
        for k in 1..patch {
            let v = &values[k..k + rn];
            for i in 0..rn {
                r[i] += v[i];
            }
        }
    }
    let on = (h - patch + 1) * w - (patch - 1);
    out.resize(on, 0.0);
    let o = &mut out[..on];
    if patch == 3 {
        let (a, b, c) = (&r[..on], &r[w..w + on], &r[2 * w..2 * w + on]);
        for i in 0..on {
            o[i] = a[i] + b[i] + c[i];
        }
    } else {
        o.copy_from_slice(&r[..on]);
        for k in 1..patch {
            let v = &r[k * w..k * w + on];
            for i in 0..on {
                o[i] += v[i];
            }
        }
    }
}

fn check_band(band: &Subband, patch: usize) -> Result<()> {
    if band.width < patch || band.height < patch {
        return Err(Error::TooSmall {
            width: band.width,
            height: band.height,
            reason: format!("subband smaller than VIF patch {patch}"),
        });
    }
    Ok(())
}

impl VifSide {
    pub fn new(pyramid: ComplexPyramid, patch: usize) -> Result<Self> {
        for band in &pyramid.subbands {
            check_band(band, patch)?;
        }
        let inv_n = 1.0 / (patch * patch) as f64;
        let stats = BUFFERS.with(|buf| {
            let Buffers { values, rows, sums } = &mut *buf.borrow_mut();
            pyramid
                .subbands
                .iter()
                .map(|band| {
                    let channels: [fn(&Complex64) -> f64; 3] =
                        [|c| c.re, |c| c.im, |c| c.re * c.re + c.im * c.im];
                    for (f, out) in channels.iter().zip(sums.iter_mut()) {
                        values.clear();
                        values.extend(band.coeffs.iter().map(f));
                        box_sums(values, band.width, patch, rows, out);
                    }
                    let [re, im, energy] = &*sums;
                    let n = re.len();
                    let mut st = BandStats {
                        mean_re: re.iter().map(|v| v * inv_n).collect(),
                        mean_im: im.iter().map(|v| v * inv_n).collect(),
                        var: vec![0.0; n],
                    };
                    let (mr, mi, e) = (&st.mean_re[..n], &st.mean_im[..n], &energy[..n]);
                    for i in 0..n {
                        st.var[i] = (e[i] * inv_n - (mr[i] * mr[i] + mi[i] * mi[i])).max(0.0);
                    }
                    // Padding between rows: zero variance skips it.
                    let valid = band.width - patch + 1;
                    for row in st.var.chunks_mut(band.width) {
                        for v in row.iter_mut().skip(valid) {
                            *v = 0.0;
                        }
                    }
                    st
                })
                .collect()
        });
        Ok(Self {
            pyramid,
            stats,
            patch,
        })
    }
}

impl VifReference {
    pub fn new(side: VifSide, sigma_n_sq: f64) -> Self {
        let info_ref = side
            .stats
            .iter()
            .flat_map(|b| &b.var)
            .filter(|&&v| v > VIF_EPS)
            .map(|v| (1.0 + v / sigma_n_sq).log2())
            .sum();
        let inv_var = side
            .stats
            .iter()
            .map(|b| {
                b.var
                    .iter()
                    .map(|&v| if v > VIF_EPS { 1.0 / v } else { 0.0 })
                    .collect()
            })
            .collect();
        Self {
            side,
            info_ref,
            inv_var,
            sigma_n_sq,
        }
    }

    /// Information preserved through the distortion channel.
    fn info_dist(&self, distorted: &VifSide) -> f64 {
        BUFFERS.with(|buf| self.info_dist_in(distorted, &mut buf.borrow_mut()))
    }

    fn info_dist_in(&self, distorted: &VifSide, buf: &mut Buffers) -> f64 {
        let reference = &self.side;
        let inv_n = 1.0 / (reference.patch * reference.patch) as f64;
        let sn2 = self.sigma_n_sq;
        let mut total = 0.0;
        // Products of the log arguments in four independent lanes, each
        // flushed before it can overflow.
        let mut lanes = [1.0f64; 4];
        let bands = reference
            .pyramid
            .subbands
            .iter()
            .zip(&distorted.pyramid.subbands);
        let stats = reference
            .stats
            .iter()
            .zip(&distorted.stats)
            .zip(&self.inv_var);
        for ((rb, db), ((rs, ds), iv)) in bands.zip(stats) {
            let Buffers { values, rows, sums } = buf;
            values.clear();
            values.extend(
                rb.coeffs
                    .iter()
                    .zip(&db.coeffs)
                    .map(|(c, d)| c.re * d.re + c.im * d.im),
            );
            box_sums(values, rb.width, reference.patch, rows, &mut sums[0]);
            let n = sums[0].len();
            let [cross, args, _] = sums;
            args.resize(n, 0.0);
            let cross = &cross[..n];
            let args = &mut args[..n];
            let (cr, ci, dr, di) = (
                &rs.mean_re[..n],
                &rs.mean_im[..n],
                &ds.mean_re[..n],
                &ds.mean_im[..n],
            );
            let (dv, iv) = (&ds.var[..n], &iv[..n]);
            // g^2 var(c) = cov^2 / var(c); a zero inverse marks a skipped patch.
            for i in 0..n {
                let cov = cross[i] * inv_n - (cr[i] * dr[i] + ci[i] * di[i]);
                let gain_var = cov * cov * iv[i];
                let sv2 = (dv[i] - gain_var).max(0.0);
                args[i] = 1.0 + gain_var / (sv2 + sn2);
            }
            for chunk in args.chunks(4) {
                for (lane, &a) in lanes.iter_mut().zip(chunk) {
                    *lane *= a;
                    if *lane > 1e200 {
                        total += lane.log2();
                        *lane = 1.0;
                    }
                }
            }
        }
        total + lanes.iter().map(|l| l.log2()).sum::<f64>()
    }

    pub fn score(&self, distorted: &VifSide) -> f64 {
        if self.info_ref == 0.0 {
            return 1.0;
        }
        self.info_dist(distorted) / self.info_ref
    }
}

/// VIF of `distorted` against `reference`. Not symmetric.
pub fn vif_score(
    reference: GridView<'_>,
    distorted: GridView<'_>,
    params: &VifParams,
) -> Result<f64> {
    reference.same_shape(&distorted)?;
    params.validate()?;
    let (w, h) = (reference.width(), reference.height());
    let plan = PyramidPlan::shared(w, h, params.pyramid_for(w, h))?;
    let r = VifReference::new(
        VifSide::new(plan.decompose(reference)?, params.patch_size)?,
        params.sigma_n_sq,
    );
    Ok(r.score(&VifSide::new(
        plan.decompose(distorted)?,
        params.patch_size,
    )?))
}
