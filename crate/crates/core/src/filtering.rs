//! Medoid filtering of backward flow.
//!
//! Every output pixel takes one actual flow value from its neighborhood:
//! holes receive the neighborhood medoid, and non-hole pixels that sit
//! farther than `threshold` from the medoid are replaced by it. Thin streaks
//! of spike values cannot pull the result because nothing is averaged.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::imgio::{FlowField, HoleMask};

pub const MAX_RADIUS: usize = 10;
pub const DEFAULT_RADIUS: usize = 2;
pub const DEFAULT_THRESHOLD: f64 = 2.0;

/// Filters `flow` using non-hole candidates within Chebyshev distance
/// `radius` of each pixel.
pub fn filter_flow(
    flow: &FlowField,
    holes: &HoleMask,
    radius: usize,
    threshold: f64,
) -> Result<FlowField> {
    if !holes.matches(flow) {
        return Err(Error::dims(format!(
            "hole mask is {}x{}, flow is {}x{}",
            holes.width(),
            holes.height(),
            flow.width(),
            flow.height()
        )));
    }
    if !(1..=MAX_RADIUS).contains(&radius) {
        return Err(Error::invalid(format!(
            "filter radius must be in 1..={MAX_RADIUS}, got {radius}"
        )));
    }
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::invalid(format!(
            "threshold must be nonnegative, got {threshold}"
        )));
    }

    let (w, h) = (flow.width(), flow.height());
    let mut out = vec![[0.0; 2]; w * h];
    out.par_chunks_mut(w)
        .enumerate()
        .for_each_init(Vec::new, |candidates, (y, row)| {
            for (x, dst) in row.iter_mut().enumerate() {
                gather(flow, holes, x, y, radius, candidates);
                let Some(m) = medoid(candidates) else {
                    *dst = [0.0, 0.0];
                    continue;
                };
                let here = flow.get(x, y);
                *dst = if holes.is_hole(x, y) || distance(here, m) > threshold {
                    m
                } else {
                    here
                };
            }
        });
    Ok(FlowField::from_parts(w, h, out))
}

/// Non-hole flow values around `(x, y)` in row-major order.
fn gather(
    flow: &FlowField,
    holes: &HoleMask,
    x: usize,
    y: usize,
    radius: usize,
    candidates: &mut Vec<[f64; 2]>,
) {
    candidates.clear();
    let y1 = (y + radius).min(flow.height() - 1);
    let x1 = (x + radius).min(flow.width() - 1);
    for yy in y.saturating_sub(radius)..=y1 {
        for xx in x.saturating_sub(radius)..=x1 {
            if !holes.is_hole(xx, yy) {
                candidates.push(flow.get(xx, yy));
            }
        }
    }
}

/// The candidate minimizing the summed Euclidean distance to all others; the
/// earliest one wins ties.
pub fn medoid(candidates: &[[f64; 2]]) -> Option<[f64; 2]> {
    let mut best: Option<(f64, [f64; 2])> = None;
    for &c in candidates {
        let cost: f64 = candidates.iter().map(|&o| distance(c, o)).sum();
        if best.is_none_or(|(b, _)| cost < b) {
            best = Some((cost, c));
        }
    }
    best.map(|(_, c)| c)
}

#[inline]
fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
    (dx * dx + dy * dy).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn removes_center_spike() {
        let (w, h) = (9, 9);
        let f = FlowField::from_fn(w, h, |x, y| {
            if (x, y) == (4, 4) {
                [40.0, -40.0]
            } else {
                [2.0, 1.0]
            }
        })
        .unwrap();
        let out = filter_flow(&f, &HoleMask::empty(w, h), 2, 2.0).unwrap();
        assert_eq!(out, FlowField::constant(w, h, [2.0, 1.0]).unwrap());
    }

    #[test]
    fn smooth_ramp_passes_through() {
        let f =
            FlowField::from_fn(12, 10, |x, y| [0.05 * x as f64, -0.03 * y as f64 + 1.0]).unwrap();
        let out = filter_flow(&f, &HoleMask::empty(12, 10), 2, 2.0).unwrap();
        assert_eq!(out, f);
    }

    #[test]
    fn fills_single_hole() {
        let (w, h) = (5, 5);
        let f = FlowField::from_fn(w, h, |x, y| {
            if (x, y) == (2, 2) {
                [0.0, 0.0]
            } else {
                [-3.0, 0.0]
            }
        })
        .unwrap();
        let holes = HoleMask::new(w, h, (0..25).map(|i| i == 12).collect()).unwrap();
        let out = filter_flow(&f, &holes, 1, 2.0).unwrap();
        assert_eq!(out.get(2, 2), [-3.0, 0.0]);
    }

    #[test]
    fn all_holes_give_zero() {
        let f = FlowField::constant(3, 3, [5.0, 5.0]).unwrap();
        let holes = HoleMask::new(3, 3, vec![true; 9]).unwrap();
        assert_eq!(filter_flow(&f, &holes, 1, 0.0).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn medoid_ties_take_first() {
        assert_eq!(medoid(&[[0.0, 0.0], [1.0, 0.0]]), Some([0.0, 0.0]));
        assert_eq!(medoid(&[[1.0, 0.0], [0.0, 0.0]]), Some([1.0, 0.0]));
        assert_eq!(medoid(&[]), None);
    }

    #[test]
    fn rejects_bad_parameters() {
        let f = FlowField::zeros(4, 4).unwrap();
        let m = HoleMask::empty(4, 4);
        assert!(filter_flow(&f, &m, 0, 1.0).is_err());
        assert!(filter_flow(&f, &m, 11, 1.0).is_err());
        assert!(filter_flow(&f, &m, 2, -0.1).is_err());
        assert!(filter_flow(&f, &m, 2, f64::NAN).is_err());
        assert!(filter_flow(&f, &HoleMask::empty(3, 4), 2, 1.0).is_err());
    }
}
