//! Exhaustive block matching and motion compensation.
//!
//! The target frame is tiled into square blocks. For each block every integer
//! displacement within the search radius whose candidate lies fully inside the
//! reference frame is scored, and the best one is kept. Ties go to the
//! shortest vector, then the smallest `dy`, then the smallest `dx`.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frame::{BlockView, LumaFrame};
use crate::metrics::{Metric, MetricKind, PreparedTarget, Scorer};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    pub block_size: usize,
    /// Maximum displacement per axis.
    pub search_radius: usize,
    pub metric: Metric,
}

impl SearchConfig {
    pub fn new(metric: Metric) -> Self {
        Self {
            block_size: 16,
            search_radius: 16,
            metric,
        }
    }

    pub fn with_block_size(mut self, block_size: usize) -> Self {
        self.block_size = block_size;
        self
    }

    pub fn with_search_radius(mut self, radius: usize) -> Self {
        self.search_radius = radius;
        self
    }

    /// Side of the square search window.
    pub fn window_side(&self) -> usize {
        self.block_size + 2 * self.search_radius
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_size != 8 && self.block_size != 16 {
            return Err(Error::InvalidConfig(format!(
                "block size {} unsupported (8 or 16)",
                self.block_size
            )));
        }
        self.metric.validate()
    }

    fn check_frame(&self, width: usize, height: usize) -> Result<()> {
        if !width.is_multiple_of(self.block_size) || !height.is_multiple_of(self.block_size) {
            return Err(Error::InvalidConfig(format!(
                "frame {width}x{height} is not a multiple of block size {}",
                self.block_size
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct MotionVector {
    pub dx: i32,
    pub dy: i32,
}

impl MotionVector {
    pub const ZERO: Self = Self { dx: 0, dy: 0 };

    pub fn new(dx: i32, dy: i32) -> Self {
        Self { dx, dy }
    }

    fn norm_sq(self) -> i64 {
        (self.dx as i64).pow(2) + (self.dy as i64).pow(2)
    }
}

/// True if candidate `a` should replace incumbent `b`.
#[inline]
pub fn is_better(a: (MotionVector, f64), b: (MotionVector, f64)) -> bool {
    if a.1 != b.1 {
        return a.1 > b.1;
    }
    (a.0.norm_sq(), a.0.dy, a.0.dx) < (b.0.norm_sq(), b.0.dy, b.0.dx)
}

/// Per-block vectors and best scores over the target's block grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MotionField {
    pub width: usize,
    pub height: usize,
    pub block_size: usize,
    pub search_radius: usize,
    pub metric: MetricKind,
    /// Row-major over the block grid.
    pub vectors: Vec<MotionVector>,
    pub scores: Vec<f64>,
}

impl MotionField {
    pub fn cols(&self) -> usize {
        self.width / self.block_size
    }

    pub fn rows(&self) -> usize {
        self.height / self.block_size
    }

    pub fn vector(&self, block_row: usize, block_col: usize) -> MotionVector {
        self.vectors[block_row * self.cols() + block_col]
    }

    /// Checks internal consistency and that every vector stays inside the frame.
    pub fn validate(&self) -> Result<()> {
        if self.block_size == 0
            || !self.width.is_multiple_of(self.block_size)
            || !self.height.is_multiple_of(self.block_size)
        {
            return Err(Error::FieldMismatch(format!(
                "{}x{} frame is not tiled by {}-pixel blocks",
                self.width, self.height, self.block_size
            )));
        }
        let n = self.rows() * self.cols();
        if self.vectors.len() != n || self.scores.len() != n {
            return Err(Error::FieldMismatch(format!(
                "expected {n} blocks, found {} vectors and {} scores",
                self.vectors.len(),
                self.scores.len()
            )));
        }
        let r = self.search_radius as i64;
        for (i, v) in self.vectors.iter().enumerate() {
            let x = (i % self.cols() * self.block_size) as i64 + v.dx as i64;
            let y = (i / self.cols() * self.block_size) as i64 + v.dy as i64;
            let inside = x >= 0
                && y >= 0
                && x + self.block_size as i64 <= self.width as i64
                && y + self.block_size as i64 <= self.height as i64;
            if !inside || (v.dx as i64).abs() > r || (v.dy as i64).abs() > r {
                return Err(Error::FieldMismatch(format!(
                    "block {i} vector ({}, {}) leaves the frame or search range",
                    v.dx, v.dy
                )));
            }
        }
        Ok(())
    }

    /// Writes the text form: a geometry header line pair, then one row per block.
    pub fn write_csv<W: Write>(&self, mut sink: W) -> Result<()> {
        sink.write_all(self.to_csv().as_bytes())?;
        sink.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("width,height,block_size,radius,metric\n");
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            self.width,
            self.height,
            self.block_size,
            self.search_radius,
            self.metric.tag()
        );
        out.push_str("block_row,block_col,dx,dy,score\n");
        let cols = self.cols();
        for (i, (v, s)) in self.vectors.iter().zip(&self.scores).enumerate() {
            // `{:?}` prints the shortest representation that parses back exactly.
            let _ = writeln!(out, "{},{},{},{},{:?}", i / cols, i % cols, v.dx, v.dy, s);
        }
        out
    }

    pub fn read_csv<R: BufRead>(source: R) -> Result<Self> {
        let mut lines = source.lines();
        let mut next = |what: &str| -> Result<String> {
            lines
                .next()
                .transpose()?
                .ok_or_else(|| Error::Parse(format!("motion field ends before {what}")))
        };
        if next("header")?.trim() != "width,height,block_size,radius,metric" {
            return Err(Error::Parse("unexpected motion field header".into()));
        }
        let geometry = next("geometry")?;
        let g: Vec<&str> = geometry.trim().split(',').collect();
        if g.len() != 5 {
            return Err(Error::Parse(format!("bad geometry line '{geometry}'")));
        }
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad number '{s}'")))
        };
        let (width, height, block_size, search_radius) =
            (num(g[0])?, num(g[1])?, num(g[2])?, num(g[3])?);
        let metric: MetricKind = g[4].parse()?;
        if next("column header")?.trim() != "block_row,block_col,dx,dy,score" {
            return Err(Error::Parse("unexpected motion field column header".into()));
        }
        if block_size == 0 {
            return Err(Error::Parse("block size 0".into()));
        }
        let cols = width / block_size;
        let total = cols * (height / block_size);
        let mut vectors = vec![None; total];
        let mut scores = vec![0.0; total];
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.trim().split(',').collect();
            if f.len() != 5 {
                return Err(Error::Parse(format!("bad block line '{line}'")));
            }
            let row = num(f[0])?;
            let col = num(f[1])?;
            let int = |s: &str| {
                s.parse::<i32>()
                    .map_err(|_| Error::Parse(format!("bad vector '{s}'")))
            };
            let score: f64 = f[4]
                .parse()
                .map_err(|_| Error::Parse(format!("bad score '{}'", f[4])))?;
            if col >= cols || row * cols + col >= total {
                return Err(Error::FieldMismatch(format!(
                    "block ({row}, {col}) outside the grid"
                )));
            }
            let i = row * cols + col;
            vectors[i] = Some(MotionVector::new(int(f[2])?, int(f[3])?));
            scores[i] = score;
        }
        let vectors = vectors
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::FieldMismatch(format!("block {i} missing"))))
            .collect::<Result<Vec<_>>>()?;
        let field = Self {
            width,
            height,
            block_size,
            search_radius,
            metric,
            vectors,
            scores,
        };
        field.validate()?;
        Ok(field)
    }
}

/// Inclusive range of candidate displacements along one axis.
#[inline]
fn axis_range(origin: usize, block: usize, extent: usize, radius: usize) -> (i32, i32) {
    let lo = -(radius.min(origin) as i32);
    let hi = radius.min(extent - block - origin) as i32;
    (lo, hi)
}

/// Number of candidates `search_block` evaluates for a block at `view`.
pub fn candidate_count(view: BlockView, reference: &LumaFrame, radius: usize) -> usize {
    let (x0, x1) = axis_range(view.x, view.size, reference.width(), radius);
    let (y0, y1) = axis_range(view.y, view.size, reference.height(), radius);
    ((x1 - x0 + 1) * (y1 - y0 + 1)) as usize
}

fn search_prepared(
    prepared: &PreparedTarget<'_>,
    view: BlockView,
    reference: &LumaFrame,
    radius: usize,
) -> (MotionVector, f64) {
    let n = view.size;
    let (x0, x1) = axis_range(view.x, n, reference.width(), radius);
    let (y0, y1) = axis_range(view.y, n, reference.height(), radius);
    let mut best: Option<(MotionVector, f64)> = None;
    for dy in y0..=y1 {
        for dx in x0..=x1 {
            let cx = (view.x as i32 + dx) as usize;
            let cy = (view.y as i32 + dy) as usize;
            let score = prepared.score(reference.view_unchecked(cx, cy, n, n));
            let cand = (MotionVector::new(dx, dy), score);
            if best.is_none_or(|b| is_better(cand, b)) {
                best = Some(cand);
            }
        }
    }
    best.expect("the zero displacement is always a candidate")
}

/// Full search for transform-domain metrics. Candidate rows are streamed top
/// to bottom: each reference position is transformed once and scored against
/// every block whose window contains it. The best candidate per block does
/// not depend on visiting order, so this matches a per-block search exactly.
fn search_streaming(
    scorer: &Scorer,
    reference: &LumaFrame,
    target: &LumaFrame,
    config: &SearchConfig,
    execution: Execution,
) -> Result<Vec<(MotionVector, f64)>> {
    let (n, radius) = (config.block_size, config.search_radius);
    let cols = target.width() / n;
    let rows = target.height() / n;
    let prepared = (0..rows * cols)
        .map(|i| scorer.prepare(target.block(BlockView::new(i % cols * n, i / cols * n, n))?))
        .collect::<Result<Vec<_>>>()?;
    let x_windows: Vec<(i32, i32)> = (0..cols)
        .map(|c| axis_range(c * n, n, reference.width(), radius))
        .collect();
    let mut best: Vec<Option<(MotionVector, f64)>> = vec![None; rows * cols];
    let positions = reference.width() - n + 1;
    let mut slot = vec![usize::MAX; positions];

    for cy in 0..=reference.height() - n {
        // Block rows whose vertical window reaches this candidate row.
        let block_rows: Vec<usize> = (0..rows)
            .filter(|&r| {
                let (y0, y1) = axis_range(r * n, n, reference.height(), radius);
                let dy = cy as i32 - (r * n) as i32;
                (y0..=y1).contains(&dy)
            })
            .collect();
        if block_rows.is_empty() {
            continue;
        }
        slot.fill(usize::MAX);
        let mut xs = Vec::new();
        for (c, &(x0, x1)) in x_windows.iter().enumerate() {
            for dx in x0..=x1 {
                let x = ((c * n) as i32 + dx) as usize;
                if slot[x] == usize::MAX {
                    slot[x] = xs.len();
                    xs.push(x);
                }
            }
        }
        let prepare = |&x: &usize| scorer.prepare_candidate(reference.view_unchecked(x, cy, n, n));
        let candidates = match execution {
            Execution::Parallel => xs.par_iter().map(prepare).collect::<Result<Vec<_>>>()?,
            Execution::Sequential => xs.iter().map(prepare).collect::<Result<Vec<_>>>()?,
        };
        let visit = |(i, best): (usize, &mut Option<(MotionVector, f64)>)| {
            let (r, c) = (i / cols, i % cols);
            if !block_rows.contains(&r) {
                return;
            }
            let dy = cy as i32 - (r * n) as i32;
            let (x0, x1) = x_windows[c];
            for dx in x0..=x1 {
                let x = ((c * n) as i32 + dx) as usize;
                let cand = (
                    MotionVector::new(dx, dy),
                    prepared[i].score_candidate(&candidates[slot[x]]),
                );
                if best.is_none_or(|b| is_better(cand, b)) {
                    *best = Some(cand);
                }
            }
        };
        match execution {
            Execution::Parallel => best.par_iter_mut().enumerate().for_each(visit),
            Execution::Sequential => best.iter_mut().enumerate().for_each(visit),
        }
    }
    Ok(best
        .into_iter()
        .map(|b| b.expect("the zero displacement is always a candidate"))
        .collect())
}

/// Best displacement into `reference` for the target block at `view`.
pub fn search_block(
    target: &LumaFrame,
    view: BlockView,
    reference: &LumaFrame,
    config: &SearchConfig,
) -> Result<(MotionVector, f64)> {
    config.validate()?;
    if view.size != config.block_size {
        return Err(Error::InvalidConfig(format!(
            "block view size {} differs from configured {}",
            view.size, config.block_size
        )));
    }
    view.check_inside(target.width(), target.height())?;
    view.check_inside(reference.width(), reference.height())?;
    let scorer = Scorer::new(config.metric, view.size, view.size)?;
    let prepared = scorer.prepare(target.block(view)?)?;
    Ok(search_prepared(
        &prepared,
        view,
        reference,
        config.search_radius,
    ))
}

/// How block searches are scheduled. Results are identical either way.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

pub fn estimate_motion_field(
    reference: &LumaFrame,
    target: &LumaFrame,
    config: &SearchConfig,
) -> Result<MotionField> {
    estimate_motion_field_with(reference, target, config, Execution::Parallel)
}

pub fn estimate_motion_field_with(
    reference: &LumaFrame,
    target: &LumaFrame,
    config: &SearchConfig,
    execution: Execution,
) -> Result<MotionField> {
    config.validate()?;
    if reference.width() != target.width() || reference.height() != target.height() {
        return Err(Error::ShapeMismatch {
            a_width: reference.width(),
            a_height: reference.height(),
            b_width: target.width(),
            b_height: target.height(),
        });
    }
    config.check_frame(target.width(), target.height())?;
    let n = config.block_size;
    let cols = target.width() / n;
    let rows = target.height() / n;
    let scorer = Scorer::new(config.metric, n, n)?;

    let results: Vec<(MotionVector, f64)> = if scorer.transforms_candidates() {
        search_streaming(&scorer, reference, target, config, execution)?
    } else {
        let run = |i: usize| -> Result<(MotionVector, f64)> {
            let view = BlockView::new(i % cols * n, i / cols * n, n);
            let prepared = scorer.prepare(target.block(view)?)?;
            Ok(search_prepared(
                &prepared,
                view,
                reference,
                config.search_radius,
            ))
        };
        match execution {
            Execution::Parallel => (0..rows * cols)
                .into_par_iter()
                .map(run)
                .collect::<Result<_>>()?,
            Execution::Sequential => (0..rows * cols).map(run).collect::<Result<_>>()?,
        }
    };
    let (vectors, scores) = results.into_iter().unzip();
    Ok(MotionField {
        width: target.width(),
        height: target.height(),
        block_size: n,
        search_radius: config.search_radius,
        metric: config.metric.kind(),
        vectors,
        scores,
    })
}

/// Builds the prediction of the target by copying displaced reference blocks.
pub fn compensate(reference: &LumaFrame, field: &MotionField) -> Result<LumaFrame> {
    if field.width != reference.width() || field.height != reference.height() {
        return Err(Error::FieldMismatch(format!(
            "field is for {}x{}, reference is {}x{}",
            field.width,
            field.height,
            reference.width(),
            reference.height()
        )));
    }
    field.validate()?;
    let n = field.block_size;
    let w = reference.width();
    let mut out = vec![0u8; w * reference.height()];
    for (i, v) in field.vectors.iter().enumerate() {
        let bx = i % field.cols() * n;
        let by = i / field.cols() * n;
        let sx = (bx as i32 + v.dx) as usize;
        let sy = (by as i32 + v.dy) as usize;
        for r in 0..n {
            let src = &reference.samples()[(sy + r) * w + sx..(sy + r) * w + sx + n];
            out[(by + r) * w + bx..(by + r) * w + bx + n].copy_from_slice(src);
        }
    }
    LumaFrame::new(w, reference.height(), out)
}
