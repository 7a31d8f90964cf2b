//! Flow reversal by Gaussian-weighted splatting.
//!
//! Each source pixel `x` lands at `x + f(x)` at time `t`. A target pixel `u`
//! averages the negated flows of every landing point within Chebyshev
//! distance `< radius`, weighting each by `exp(-d^2 / sigma^2)` where `d` is
//! the Euclidean distance from the landing point to `u`. Targets that collect
//! less than [`HOLE_WEIGHT`] total weight are holes with flow `(0, 0)`.
//!
//! The computation is a gather over a per-cell index of landing points, so
//! each target sums its contributions in a fixed order regardless of how rows
//! are scheduled across threads.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::imgio::{FlowField, HoleMask};

/// Total weight below which a target pixel is a hole.
pub const HOLE_WEIGHT: f64 = 1e-6;

pub const DEFAULT_SIGMA: f64 = 1.0;
pub const DEFAULT_RADIUS: f64 = 1.0;

#[derive(Clone, Debug, PartialEq)]
pub struct ReversalResult {
    /// Backward flow from time `t` to the source frame.
    pub flow: FlowField,
    pub holes: HoleMask,
    /// Sum of splat weights per target pixel.
    pub weight_sum: Vec<f64>,
}

/// Reverses a forward flow into a backward flow.
pub fn reverse_flow(forward: &FlowField, sigma: f64, radius: f64) -> Result<ReversalResult> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::invalid(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if !(radius.is_finite() && radius >= 1.0) {
        return Err(Error::invalid(format!(
            "radius must be at least 1, got {radius}"
        )));
    }
    let (w, h) = (forward.width(), forward.height());
    let index = LandingIndex::build(forward);
    let inv_sigma2 = 1.0 / (sigma * sigma);

    let mut flow = vec![[0.0; 2]; w * h];
    let mut weight_sum = vec![0.0; w * h];
    flow.par_chunks_mut(w)
        .zip(weight_sum.par_chunks_mut(w))
        .enumerate()
        .for_each(|(y, (flow_row, weight_row))| {
            let uy = y as f64;
            let cy0 = ((uy - radius).floor().max(0.0)) as usize;
            let cy1 = ((uy + radius).floor() as usize).min(h - 1);
            for x in 0..w {
                let ux = x as f64;
                let cx0 = ((ux - radius).floor().max(0.0)) as usize;
                let cx1 = ((ux + radius).floor() as usize).min(w - 1);
                let mut acc = [0.0; 2];
                let mut total = 0.0;
                for cy in cy0..=cy1 {
                    for cx in cx0..=cx1 {
                        for &s in index.cell(cy * w + cx) {
                            let f = forward.data()[s];
                            let lx = (s % w) as f64 + f[0];
                            let ly = (s / w) as f64 + f[1];
                            let (dx, dy) = (lx - ux, ly - uy);
                            if dx.abs() >= radius || dy.abs() >= radius {
                                continue;
                            }
                            let wgt = (-(dx * dx + dy * dy) * inv_sigma2).exp();
                            acc[0] -= wgt * f[0];
                            acc[1] -= wgt * f[1];
                            total += wgt;
                        }
                    }
                }
                weight_row[x] = total;
                if total >= HOLE_WEIGHT {
                    flow_row[x] = [acc[0] / total, acc[1] / total];
                }
            }
        });

    let holes = weight_sum.iter().map(|&s| s < HOLE_WEIGHT).collect();
    Ok(ReversalResult {
        flow: FlowField::from_parts(w, h, flow),
        holes: HoleMask::new(w, h, holes)?,
        weight_sum,
    })
}

/// Source pixels bucketed by the integer cell containing their landing
/// point, in row-major source order within each cell.
struct LandingIndex {
    offsets: Vec<usize>,
    sources: Vec<usize>,
}

impl LandingIndex {
    fn build(forward: &FlowField) -> Self {
        let (w, h) = (forward.width(), forward.height());
        let cell_of = |s: usize| -> Option<usize> {
            let f = forward.data()[s];
            let lx = (s % w) as f64 + f[0];
            let ly = (s / w) as f64 + f[1];
            // landing points outside the frame contribute nothing
            if lx < 0.0 || ly < 0.0 || lx > (w - 1) as f64 || ly > (h - 1) as f64 {
                return None;
            }
            Some(ly.floor() as usize * w + lx.floor() as usize)
        };
        let cells: Vec<Option<usize>> = (0..w * h).map(cell_of).collect();
        let mut offsets = vec![0usize; w * h + 1];
        for c in cells.iter().flatten() {
            offsets[c + 1] += 1;
        }
        for i in 0..w * h {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut sources = vec![0usize; offsets[w * h]];
        for (s, c) in cells.iter().enumerate() {
            if let Some(c) = *c {
                sources[fill[c]] = s;
                fill[c] += 1;
            }
        }
        LandingIndex { offsets, sources }
    }

    #[inline]
    fn cell(&self, c: usize) -> &[usize] {
        &self.sources[self.offsets[c]..self.offsets[c + 1]]
    }
}
