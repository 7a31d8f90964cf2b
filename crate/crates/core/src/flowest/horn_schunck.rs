use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::imgio::{FlowField, Image};
use crate::plane::Plane;

/// Smallest side length allowed at the coarsest pyramid level.
const MIN_LEVEL_SIDE: usize = 4;

/// Parameters of the coarse-to-fine Horn-Schunck estimator.
///
/// Intensities are luma on a 0..255 scale, so `alpha` is in those units.
#[derive(Clone, Debug, PartialEq)]
pub struct HornSchunckParams {
    /// Pyramid levels including full resolution.
    pub levels: usize,
    /// Smoothness weight.
    pub alpha: f64,
    /// Jacobi iterations per warp.
    pub iterations: usize,
    /// Warp/relinearize passes per level.
    pub warps: usize,
}

impl Default for HornSchunckParams {
    fn default() -> Self {
        HornSchunckParams {
            levels: 3,
            alpha: 10.0,
            iterations: 100,
            warps: 1,
        }
    }
}

impl HornSchunckParams {
    fn validate(&self) -> Result<()> {
        if self.levels == 0 {
            return Err(Error::invalid("pyramid needs at least one level"));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::invalid(format!(
                "alpha must be positive, got {}",
                self.alpha
            )));
        }
        if self.warps == 0 {
            return Err(Error::invalid("at least one warp per level is required"));
        }
        Ok(())
    }
}

/// Dense flow mapping each `source` pixel `x` to `x + f(x)` in `target`.
pub fn estimate_flow(
    source: &Image,
    target: &Image,
    params: &HornSchunckParams,
) -> Result<FlowField> {
    params.validate()?;
    if source.width() != target.width() || source.height() != target.height() {
        return Err(Error::dims(format!(
            "source is {}x{}, target is {}x{}",
            source.width(),
            source.height(),
            target.width(),
            target.height()
        )));
    }
    let shrink = 1usize << (params.levels - 1);
    if source.width() / shrink < MIN_LEVEL_SIDE || source.height() / shrink < MIN_LEVEL_SIDE {
        return Err(Error::dims(format!(
            "{}x{} is too small for {} pyramid levels",
            source.width(),
            source.height(),
            params.levels
        )));
    }

    let src_pyr = pyramid(Plane::luma_scaled(source, 255.0), params.levels);
    let dst_pyr = pyramid(Plane::luma_scaled(target, 255.0), params.levels);

    let coarsest = &src_pyr[params.levels - 1];
    let mut flow = vec![[0.0; 2]; coarsest.width * coarsest.height];
    let mut size = (coarsest.width, coarsest.height);
    for level in (0..params.levels).rev() {
        let (src, dst) = (&src_pyr[level], &dst_pyr[level]);
        if (src.width, src.height) != size {
            flow = upsample_flow(&flow, size, (src.width, src.height));
            size = (src.width, src.height);
        }
        for _ in 0..params.warps {
            flow = refine(src, dst, flow, params);
        }
    }
    Ok(FlowField::from_parts(source.width(), source.height(), flow))
}

fn pyramid(base: Plane, levels: usize) -> Vec<Plane> {
    let mut out = vec![base];
    for _ in 1..levels {
        let next = out.last().unwrap().downsample_half();
        out.push(next);
    }
    out
}

/// Bilinear resize of a flow field with vectors scaled by the size ratio.
fn upsample_flow(flow: &[[f64; 2]], from: (usize, usize), to: (usize, usize)) -> Vec<[f64; 2]> {
    let u = Plane::new(from.0, from.1, flow.iter().map(|f| f[0]).collect());
    let v = Plane::new(from.0, from.1, flow.iter().map(|f| f[1]).collect());
    let sx = from.0 as f64 / to.0 as f64;
    let sy = from.1 as f64 / to.1 as f64;
    let mut out = Vec::with_capacity(to.0 * to.1);
    for y in 0..to.1 {
        let fy = (y as f64 + 0.5) * sy - 0.5;
        for x in 0..to.0 {
            let fx = (x as f64 + 0.5) * sx - 0.5;
            out.push([u.sample(fx, fy) / sx, v.sample(fx, fy) / sy]);
        }
    }
    out
}

/// One warp of the target by `flow` followed by Jacobi sweeps of the
/// linearized Horn-Schunck equations around it.
fn refine(
    src: &Plane,
    dst: &Plane,
    flow: Vec<[f64; 2]>,
    params: &HornSchunckParams,
) -> Vec<[f64; 2]> {
    let (w, h) = (src.width, src.height);
    let warped = Plane::new(
        w,
        h,
        (0..w * h)
            .map(|i| {
                let (x, y) = ((i % w) as f64, (i / w) as f64);
                dst.sample(x + flow[i][0], y + flow[i][1])
            })
            .collect(),
    );
    let (sx, sy) = src.central_gradients();
    let (wx, wy) = warped.central_gradients();
    let alpha2 = params.alpha * params.alpha;

    // Per pixel: gradient, residual at the linearization point, denominator.
    let terms: Vec<Term> = (0..w * h)
        .map(|i| {
            let ix = 0.5 * (sx[i] + wx[i]);
            let iy = 0.5 * (sy[i] + wy[i]);
            let it = warped.data[i] - src.data[i];
            Term {
                ix,
                iy,
                rest: it - ix * flow[i][0] - iy * flow[i][1],
                denom: alpha2 + ix * ix + iy * iy,
            }
        })
        .collect();

    let mut current = flow;
    let mut next = vec![[0.0; 2]; w * h];
    for _ in 0..params.iterations {
        next.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
            for (x, out) in row.iter_mut().enumerate() {
                let avg = neighbor_average(&current, w, h, x, y);
                let t = &terms[y * w + x];
                let residual = t.rest + t.ix * avg[0] + t.iy * avg[1];
                let step = residual / t.denom;
                *out = [avg[0] - t.ix * step, avg[1] - t.iy * step];
            }
        });
        std::mem::swap(&mut current, &mut next);
    }
    current
}

struct Term {
    ix: f64,
    iy: f64,
    rest: f64,
    denom: f64,
}

/// Horn-Schunck Laplacian weights: 1/6 for edge neighbors, 1/12 for corners.
#[inline]
fn neighbor_average(flow: &[[f64; 2]], w: usize, h: usize, x: usize, y: usize) -> [f64; 2] {
    let xm = x.saturating_sub(1);
    let xp = (x + 1).min(w - 1);
    let ym = y.saturating_sub(1);
    let yp = (y + 1).min(h - 1);
    let at = |xx: usize, yy: usize| flow[yy * w + xx];
    let mut acc = [0.0; 2];
    for (p, wgt) in [
        (at(xm, y), 1.0 / 6.0),
        (at(xp, y), 1.0 / 6.0),
        (at(x, ym), 1.0 / 6.0),
        (at(x, yp), 1.0 / 6.0),
        (at(xm, ym), 1.0 / 12.0),
        (at(xp, ym), 1.0 / 12.0),
        (at(xm, yp), 1.0 / 12.0),
        (at(xp, yp), 1.0 / 12.0),
    ] {
        acc[0] += wgt * p[0];
        acc[1] += wgt * p[1];
    }
    acc
}
