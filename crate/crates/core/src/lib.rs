//! Block-matching motion estimation with a pluggable similarity criterion.
//!
//! The block matcher maximizes one of five scores (SAD, MSE, SSIM, CW-SSIM,
//! VIF) over a full-search window, builds a motion field, and reconstructs the
//! target frame from the reference by motion compensation. An evaluation
//! harness compares reconstructions against the target using frame MSE, SSIM,
//! VIF and per-bitplane Hamming distances.
//!
//! ```
//! use perceptual_me::prelude::*;
//!
//! let (reference, target) = synth::shifted_pair(64, 64, 2, -1, 7);
//! let config = SearchConfig::new(Metric::default_for(MetricKind::Ssim)).with_search_radius(4);
//! let field = estimate_motion_field(&reference, &target, &config).unwrap();
//! assert_eq!(field.vector(1, 1), MotionVector::new(2, -1));
//! let predicted = compensate(&reference, &field).unwrap();
//! let report = compare_frames(&target, &predicted, 0.0, MetricKind::Ssim).unwrap();
//! assert!(report.frame_ssim > 0.5);
//! ```

pub mod cli;
pub mod error;
pub mod eval;
pub mod frame;
pub mod metrics;
pub mod motion;
pub mod pyramid;
pub mod scene;
pub mod synth;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::eval::{
        bitplane_hamming, compare_frames, emit_report, BitplaneDistances, ComparisonReport,
        ReportFormat,
    };
    pub use crate::frame::{
        extract_block, load_frame, save_pgm, BlockView, ChromaSampling, FrameFormat, GridView,
        LumaFrame,
    };
    pub use crate::metrics::{
        cw_ssim_score, mse, psnr, sad, ssim_score, vif_score, CwSsimParams, Metric, MetricKind,
        Scorer, SsimParams, SsimWindow, VifParams,
    };
    pub use crate::motion::{
        compensate, estimate_motion_field, search_block, MotionField, MotionVector, SearchConfig,
    };
    pub use crate::pyramid::{decompose, ComplexPyramid, PyramidConfig, PyramidPlan};
    pub use crate::synth;
}
