//! Block and frame scorers behind one interface.
//!
//! Every metric maps onto a *unified score* where larger means more similar:
//! distortions (SAD, MSE) are negated, similarities are used as-is.

pub mod cwssim;
pub mod distortion;
pub mod ssim;
pub mod vif;

use std::fmt;
use std::str::FromStr;

pub use cwssim::{cw_ssim_score, CwSsimParams};
pub use distortion::{mse, psnr, sad};
pub use ssim::{ssim_score, SsimParams, SsimWindow};
pub use vif::{vif_score, VifParams};

use crate::error::{Error, Result};
use crate::frame::GridView;
use crate::pyramid::PyramidPlan;

use self::cwssim::CwSide;
use self::ssim::{ssim_from_moments, Moments};
use self::vif::{VifReference, VifSide};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricKind {
    Sad,
    Mse,
    Ssim,
    CwSsim,
    Vif,
}

impl MetricKind {
    pub const ALL: [MetricKind; 5] = [Self::Sad, Self::Mse, Self::Ssim, Self::CwSsim, Self::Vif];

    /// True for SAD and MSE, where lower raw values are better.
    pub fn is_distortion(self) -> bool {
        matches!(self, Self::Sad | Self::Mse)
    }

    /// Lower-case tag used in file names and flags.
    pub fn tag(self) -> &'static str {
        match self {
            Self::Sad => "sad",
            Self::Mse => "mse",
            Self::Ssim => "ssim",
            Self::CwSsim => "cwssim",
            Self::Vif => "vif",
        }
    }

    /// Upper-case label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Self::Sad => "SAD",
            Self::Mse => "MSE",
            Self::Ssim => "SSIM",
            Self::CwSsim => "CWSSIM",
            Self::Vif => "VIF",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "").as_str() {
            "sad" => Ok(Self::Sad),
            "mse" => Ok(Self::Mse),
            "ssim" => Ok(Self::Ssim),
            "cwssim" => Ok(Self::CwSsim),
            "vif" => Ok(Self::Vif),
            other => Err(Error::Parse(format!("unknown metric '{other}'"))),
        }
    }
}

/// A metric together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Metric {
    Sad,
    Mse,
    Ssim(SsimParams),
    CwSsim(CwSsimParams),
    Vif(VifParams),
}

impl Metric {
    /// Block-matching defaults for `kind`.
    pub fn default_for(kind: MetricKind) -> Self {
        match kind {
            MetricKind::Sad => Self::Sad,
            MetricKind::Mse => Self::Mse,
            MetricKind::Ssim => Self::Ssim(SsimParams::block()),
            MetricKind::CwSsim => Self::CwSsim(CwSsimParams::default()),
            MetricKind::Vif => Self::Vif(VifParams::default()),
        }
    }

    pub fn kind(&self) -> MetricKind {
        match self {
            Self::Sad => MetricKind::Sad,
            Self::Mse => MetricKind::Mse,
            Self::Ssim(_) => MetricKind::Ssim,
            Self::CwSsim(_) => MetricKind::CwSsim,
            Self::Vif(_) => MetricKind::Vif,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Sad | Self::Mse => Ok(()),
            Self::Ssim(p) => p.validate(),
            Self::CwSsim(p) => p.validate(),
            Self::Vif(p) => p.validate(),
        }
    }

    /// Unified score of `b` against `a`; `a` is the reference signal for VIF.
    pub fn unified_score(&self, a: GridView<'_>, b: GridView<'_>) -> Result<f64> {
        self.validate()?;
        Ok(match self {
            Metric::Sad => -(sad(a, b)? as f64),
            Metric::Mse => -mse(a, b)?,
            Metric::Ssim(p) => ssim_score(a, b, p)?,
            Metric::CwSsim(p) => cw_ssim_score(a, b, p)?,
            Metric::Vif(p) => vif_score(a, b, p)?,
        })
    }
}

/// A metric bound to one input shape, with any transform plans it needs.
pub struct Scorer {
    metric: Metric,
    width: usize,
    height: usize,
    plan: Option<PyramidPlan>,
}

impl Scorer {
    pub fn new(metric: Metric, width: usize, height: usize) -> Result<Self> {
        metric.validate()?;
        let plan = match &metric {
            Metric::CwSsim(p) => Some(PyramidPlan::new(
                width,
                height,
                p.pyramid_for(width, height),
            )?),
            Metric::Vif(p) => Some(PyramidPlan::new(
                width,
                height,
                p.pyramid_for(width, height),
            )?),
            Metric::Ssim(p) => {
                if let SsimWindow::Sliding { size, .. } = p.window {
                    if size > width || size > height {
                        return Err(Error::TooSmall {
                            width,
                            height,
                            reason: format!("SSIM window {size} larger than input"),
                        });
                    }
                } else if width * height < 2 {
                    return Err(Error::TooSmall {
                        width,
                        height,
                        reason: "whole-block SSIM needs at least two samples".into(),
                    });
                }
                None
            }
            Metric::Sad | Metric::Mse => None,
        };
        Ok(Self {
            metric,
            width,
            height,
            plan,
        })
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    fn check(&self, v: &GridView<'_>) -> Result<()> {
        if v.width() != self.width || v.height() != self.height {
            return Err(Error::ShapeMismatch {
                a_width: self.width,
                a_height: self.height,
                b_width: v.width(),
                b_height: v.height(),
            });
        }
        Ok(())
    }

    /// Precomputes everything that depends only on the fixed input.
    pub fn prepare<'a>(&'a self, target: GridView<'a>) -> Result<PreparedTarget<'a>> {
        self.check(&target)?;
        let state = match &self.metric {
            Metric::Sad | Metric::Mse => Prepared::Plain,
            Metric::Ssim(p) => {
                let (sum, sum_sq) = Moments::self_moments(target);
                Prepared::Ssim {
                    sum,
                    sum_sq,
                    c: (p.c1(), p.c2(), p.c3()),
                }
            }
            Metric::CwSsim(p) => {
                Prepared::CwSsim(CwSide::new(self.plan_ref().decompose(target)?, p.window))
            }
            Metric::Vif(p) => Prepared::Vif(Box::new(VifReference::new(
                VifSide::new(self.plan_ref().decompose(target)?, p.patch_size)?,
                p.sigma_n_sq,
            ))),
        };
        Ok(PreparedTarget {
            scorer: self,
            target,
            state,
        })
    }

    /// Whether candidates benefit from [`Scorer::prepare_candidate`].
    pub(crate) fn transforms_candidates(&self) -> bool {
        self.plan.is_some()
    }

    /// Transforms a candidate once so it can be scored against many targets.
    pub(crate) fn prepare_candidate<'a>(&self, candidate: GridView<'a>) -> Result<Candidate<'a>> {
        self.check(&candidate)?;
        Ok(match &self.metric {
            Metric::CwSsim(p) => {
                Candidate::CwSsim(CwSide::new(self.plan_ref().decompose(candidate)?, p.window))
            }
            Metric::Vif(p) => Candidate::Vif(VifSide::new(
                self.plan_ref().decompose(candidate)?,
                p.patch_size,
            )?),
            _ => Candidate::Raw(candidate),
        })
    }

    fn plan_ref(&self) -> &PyramidPlan {
        self.plan
            .as_ref()
            .expect("pyramid metrics always carry a plan")
    }
}

enum Prepared {
    Plain,
    Ssim {
        sum: u64,
        sum_sq: u64,
        c: (f64, f64, f64),
    },
    CwSsim(CwSide),
    Vif(Box<VifReference>),
}

/// A candidate in whatever form its metric compares.
pub(crate) enum Candidate<'a> {
    Raw(GridView<'a>),
    CwSsim(CwSide),
    Vif(VifSide),
}

/// A fixed input ready to be scored against many candidates.
pub struct PreparedTarget<'a> {
    scorer: &'a Scorer,
    target: GridView<'a>,
    state: Prepared,
}

impl PreparedTarget<'_> {
    /// Unified score of `candidate`. Its shape must match the scorer's.
    pub fn score(&self, candidate: GridView<'_>) -> f64 {
        assert_eq!(
            (candidate.width(), candidate.height()),
            (self.scorer.width, self.scorer.height),
            "candidate shape differs from scorer shape"
        );
        match (&self.scorer.metric, &self.state) {
            (Metric::Sad, _) => -(distortion::sad_unchecked(self.target, candidate) as f64),
            (Metric::Mse, _) => {
                -(distortion::sse_unchecked(self.target, candidate) as f64
                    / self.target.len() as f64)
            }
            (Metric::Ssim(p), Prepared::Ssim { sum, sum_sq, c }) => match p.window {
                SsimWindow::WholeBlock => {
                    let (sum_b, sum_bb, sum_ab) = Moments::cross(self.target, candidate);
                    let m = Moments {
                        n: self.target.len() as u64,
                        sum_a: *sum,
                        sum_b,
                        sum_aa: *sum_sq,
                        sum_bb,
                        sum_ab,
                    };
                    ssim_from_moments(&m, c.0, c.1, c.2)
                }
                SsimWindow::Sliding { .. } => ssim_score(self.target, candidate, p)
                    .expect("shape and window checked at construction"),
            },
            (Metric::CwSsim(_) | Metric::Vif(_), _) => {
                let candidate = self
                    .scorer
                    .prepare_candidate(candidate)
                    .expect("shape checked");
                self.score_candidate(&candidate)
            }
            _ => unreachable!("prepared state always matches its metric"),
        }
    }

    /// Unified score of a candidate from the same scorer's [`Scorer::prepare_candidate`].
    pub(crate) fn score_candidate(&self, candidate: &Candidate<'_>) -> f64 {
        match (&self.scorer.metric, &self.state, candidate) {
            (Metric::CwSsim(p), Prepared::CwSsim(side), Candidate::CwSsim(other)) => {
                side.score(other, p.k)
            }
            (Metric::Vif(_), Prepared::Vif(reference), Candidate::Vif(other)) => {
                reference.score(other)
            }
            (_, _, Candidate::Raw(view)) => self.score(*view),
            _ => unreachable!("candidate prepared by a different scorer"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::LumaFrame;
    use crate::synth;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn all_metrics() -> Vec<Metric> {
        MetricKind::ALL
            .iter()
            .map(|&k| Metric::default_for(k))
            .collect()
    }

    #[test]
    fn kind_round_trips_through_tag() {
        for k in MetricKind::ALL {
            assert_eq!(k.tag().parse::<MetricKind>().unwrap(), k);
            assert_eq!(k.label().parse::<MetricKind>().unwrap(), k);
        }
        assert_eq!("CW-SSIM".parse::<MetricKind>().unwrap(), MetricKind::CwSsim);
        assert!("psnr".parse::<MetricKind>().is_err());
    }

    #[test]
    fn unified_matches_free_functions() {
        let a = synth::texture(16, 16, 21);
        let b = synth::texture(16, 16, 22);
        let (va, vb) = (a.view(), b.view());
        assert_eq!(
            Metric::Sad.unified_score(va, vb).unwrap(),
            -(sad(va, vb).unwrap() as f64)
        );
        assert_eq!(
            Metric::Mse.unified_score(va, vb).unwrap(),
            -mse(va, vb).unwrap()
        );
        assert_eq!(
            Metric::Ssim(SsimParams::block())
                .unified_score(va, vb)
                .unwrap(),
            ssim_score(va, vb, &SsimParams::block()).unwrap()
        );
        assert_eq!(
            Metric::CwSsim(CwSsimParams::default())
                .unified_score(va, vb)
                .unwrap(),
            cw_ssim_score(va, vb, &CwSsimParams::default()).unwrap()
        );
        assert_eq!(
            Metric::Vif(VifParams::default())
                .unified_score(va, vb)
                .unwrap(),
            vif_score(va, vb, &VifParams::default()).unwrap()
        );
        let sliding = SsimParams::block().with_window(SsimWindow::Sliding { size: 8, stride: 4 });
        assert_eq!(
            Metric::Ssim(sliding).unified_score(va, vb).unwrap(),
            ssim_score(va, vb, &sliding).unwrap()
        );
    }

    #[test]
    fn identity_is_best_for_every_metric() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for m in all_metrics() {
            let a = synth::texture(16, 16, rng.gen());
            let best = m.unified_score(a.view(), a.view()).unwrap();
            let expected = if m.kind().is_distortion() { 0.0 } else { 1.0 };
            assert!((best - expected).abs() < 1e-9, "{m:?}");
            for _ in 0..10 {
                let b = LumaFrame::from_fn(16, 16, |x, y| {
                    (a.get(x, y) as i32 + rng.gen_range(-40..40)).clamp(0, 255) as u8
                })
                .unwrap();
                assert!(
                    best >= m.unified_score(a.view(), b.view()).unwrap(),
                    "{m:?}"
                );
            }
        }
    }

    #[test]
    fn eight_pixel_blocks_use_one_level() {
        let a = synth::texture(8, 8, 2);
        for m in all_metrics() {
            assert!(m.unified_score(a.view(), a.view()).is_ok(), "{m:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn symmetric_metrics(seed_a in any::<u64>(), seed_b in any::<u64>()) {
            let a = synth::texture(16, 16, seed_a);
            let b = synth::texture(16, 16, seed_b);
            for m in all_metrics() {
                if m.kind() == MetricKind::Vif {
                    continue;
                }
                let ab = m.unified_score(a.view(), b.view()).unwrap();
                let ba = m.unified_score(b.view(), a.view()).unwrap();
                prop_assert!((ab - ba).abs() < 1e-9, "{:?}", m);
            }
        }

        #[test]
        fn sad_zero_iff_mse_zero(a in proptest::collection::vec(0u8..4, 16), b in proptest::collection::vec(0u8..4, 16)) {
            let fa = LumaFrame::new(4, 4, a).unwrap();
            let fb = LumaFrame::new(4, 4, b).unwrap();
            prop_assert_eq!(sad(fa.view(), fb.view()).unwrap() == 0, mse(fa.view(), fb.view()).unwrap() == 0.0);
        }
    }
}
