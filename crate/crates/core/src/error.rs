use std::io;

use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("truncated stream: needed {needed} bytes, {available} available")]
    Truncated { needed: usize, available: usize },

    #[error("malformed header: {0}")]
    MalformedHeader(String),

    #[error("frame index {index} out of range (stream holds {available} frames)")]
    FrameIndexOutOfRange { index: usize, available: usize },

    #[error("degenerate geometry {width}x{height}")]
    DegenerateGeometry { width: usize, height: usize },

    #[error("block at ({x}, {y}) of size {size} exceeds {width}x{height} frame")]
    BlockOutOfBounds {
        x: usize,
        y: usize,
        size: usize,
        width: usize,
        height: usize,
    },

    #[error("shape mismatch: {a_width}x{a_height} vs {b_width}x{b_height}")]
    ShapeMismatch {
        a_width: usize,
        a_height: usize,
        b_width: usize,
        b_height: usize,
    },

    #[error("input {width}x{height} too small: {reason}")]
    TooSmall {
        width: usize,
        height: usize,
        reason: String,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("motion field inconsistent with frame: {0}")]
    FieldMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
