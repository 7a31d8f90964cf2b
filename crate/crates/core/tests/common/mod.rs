#![allow(dead_code)]

use quadinterp::reversal::HOLE_WEIGHT;
use quadinterp::synthgen::{SceneSpec, Shape, Sprite};
use quadinterp::FlowField;

/// Single textured disc on a 96x96 canvas with |a| spread over [1, 4].
pub fn accelerated_scene(i: usize, count: usize) -> SceneSpec {
    let amag = 1.0 + 3.0 * i as f64 / (count - 1) as f64;
    let ang = i as f64 * 2.39996;
    let vang = i as f64 * 1.1 + 0.5;
    let vmag = 0.5 + (i % 4) as f64 * 0.5;
    SceneSpec {
        width: 96,
        height: 96,
        background: 0.1,
        supersample: 4,
        sprites: vec![Sprite {
            p0: [48.0 - 2.0 * ang.cos(), 48.0],
            velocity: [vmag * vang.cos(), vmag * vang.sin()],
            acceleration: [amag * ang.cos(), amag * ang.sin()],
            shape: Shape::TexturedDisc {
                radius: 12.0,
                seed: 100 + i as u64,
            },
        }],
    }
}

/// Literal double loop over all (target, source) pairs.
pub fn reversal_oracle(forward: &FlowField, sigma: f64, radius: f64) -> (Vec<[f64; 2]>, Vec<bool>) {
    let (w, h) = (forward.width(), forward.height());
    let mut out = vec![[0.0; 2]; w * h];
    let mut holes = vec![true; w * h];
    for uy in 0..h {
        for ux in 0..w {
            let (mut num, mut den) = ([0.0; 2], 0.0);
            for sy in 0..h {
                for sx in 0..w {
                    let f = forward.get(sx, sy);
                    let (lx, ly) = (sx as f64 + f[0], sy as f64 + f[1]);
                    if lx < 0.0 || ly < 0.0 || lx > (w - 1) as f64 || ly > (h - 1) as f64 {
                        continue;
                    }
                    let (dx, dy) = (lx - ux as f64, ly - uy as f64);
                    if dx.abs().max(dy.abs()) >= radius {
                        continue;
                    }
                    let wgt = (-(dx * dx + dy * dy) / (sigma * sigma)).exp();
                    num[0] -= wgt * f[0];
                    num[1] -= wgt * f[1];
                    den += wgt;
                }
            }
            if den >= HOLE_WEIGHT {
                out[uy * w + ux] = [num[0] / den, num[1] / den];
                holes[uy * w + ux] = false;
            }
        }
    }
    (out, holes)
}

/// Brute-force medoid filter over non-hole candidates in a square window.
pub fn filter_oracle(
    flow: &FlowField,
    holes: &[bool],
    radius: usize,
    threshold: f64,
) -> Vec<[f64; 2]> {
    let (w, h) = (flow.width(), flow.height());
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let mut cands = Vec::new();
            for yy in 0..h {
                for xx in 0..w {
                    if xx.abs_diff(x) <= radius && yy.abs_diff(y) <= radius && !holes[yy * w + xx] {
                        cands.push(flow.get(xx, yy));
                    }
                }
            }
            let dist =
                |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
            let mut best: Option<([f64; 2], f64)> = None;
            for &c in &cands {
                let s: f64 = cands.iter().map(|&o| dist(c, o)).sum();
                if best.is_none_or(|(_, b)| s < b) {
                    best = Some((c, s));
                }
            }
            let here = flow.get(x, y);
            out.push(match best {
                None => [0.0, 0.0],
                Some((m, _)) if holes[y * w + x] || dist(here, m) > threshold => m,
                Some(_) => here,
            });
        }
    }
    out
}
