use rayon::prelude::*;

use super::PointList;
use crate::imgio::Image;
use crate::plane::Plane;

/// Pyramidal Lucas-Kanade settings.
#[derive(Clone, Debug, PartialEq)]
pub struct LkParams {
    pub levels: usize,
    /// Odd window side length.
    pub window: usize,
    pub max_iterations: usize,
    /// Stop when an update is shorter than this, pixels.
    pub epsilon: f64,
    /// Windows whose mean gradient tensor has a smaller minimum eigenvalue
    /// (0..255 intensity units squared) are untrackable.
    pub min_eigenvalue: f64,
}

impl Default for LkParams {
    fn default() -> Self {
        LkParams {
            levels: 3,
            window: 21,
            max_iterations: 30,
            epsilon: 0.01,
            min_eigenvalue: 1e-3,
        }
    }
}

struct Level {
    image: Plane,
    gx: Plane,
    gy: Plane,
}

fn build_pyramid(image: &Image, levels: usize) -> Vec<Level> {
    let mut planes = vec![Plane::luma_scaled(image, 255.0)];
    for _ in 1..levels {
        let prev = planes.last().unwrap();
        if prev.width < 8 || prev.height < 8 {
            break;
        }
        planes.push(prev.downsample_half());
    }
    planes
        .into_iter()
        .map(|image| {
            let (gx, gy) = image.central_gradients();
            let (w, h) = (image.width, image.height);
            Level {
                image,
                gx: Plane::new(w, h, gx),
                gy: Plane::new(w, h, gy),
            }
        })
        .collect()
}

/// Tracks each point of `points` from `from` into `to`.
///
/// Points that start or end outside the frame, sit on a textureless window,
/// or fail to converge come back with `valid = false`.
pub fn track_points(from: &Image, to: &Image, points: &PointList, params: &LkParams) -> PointList {
    let levels = params.levels.max(1);
    let src = build_pyramid(from, levels);
    let dst = build_pyramid(to, levels);
    let (w, h) = (from.width() as f64, from.height() as f64);
    let tracked: Vec<(Option<[f64; 2]>, bool)> = points
        .points
        .par_iter()
        .zip(points.valid.par_iter())
        .map(|(&p, &ok)| {
            let inside =
                |q: [f64; 2]| q[0] >= 0.0 && q[1] >= 0.0 && q[0] <= w - 1.0 && q[1] <= h - 1.0;
            if !ok || !inside(p) || from.width() != to.width() || from.height() != to.height() {
                return (None, false);
            }
            match track_one(&src, &dst, p, params) {
                Some(q) if inside(q) => (Some(q), true),
                Some(q) => (Some(q), false),
                None => (None, false),
            }
        })
        .collect();
    PointList {
        points: tracked
            .iter()
            .zip(&points.points)
            .map(|((q, _), p)| q.unwrap_or(*p))
            .collect(),
        valid: tracked.iter().map(|(_, v)| *v).collect(),
    }
}

fn track_one(src: &[Level], dst: &[Level], point: [f64; 2], params: &LkParams) -> Option<[f64; 2]> {
    let half = (params.window / 2) as isize;
    let n = ((2 * half + 1) * (2 * half + 1)) as f64;
    let mut guess = [0.0f64; 2];
    for level in (0..src.len()).rev() {
        let (s, d) = (&src[level], &dst[level]);
        let scale = (1u32 << level) as f64;
        let p = [
            (point[0] + 0.5) / scale - 0.5,
            (point[1] + 0.5) / scale - 0.5,
        ];

        let mut template = Vec::with_capacity(n as usize);
        let (mut gxx, mut gxy, mut gyy) = (0.0, 0.0, 0.0);
        for j in -half..=half {
            for i in -half..=half {
                let (x, y) = (p[0] + i as f64, p[1] + j as f64);
                let ix = s.gx.sample(x, y);
                let iy = s.gy.sample(x, y);
                gxx += ix * ix;
                gxy += ix * iy;
                gyy += iy * iy;
                template.push((s.image.sample(x, y), ix, iy));
            }
        }
        let det = gxx * gyy - gxy * gxy;
        let min_eig = 0.5 * (gxx + gyy) - (0.25 * (gxx - gyy).powi(2) + gxy * gxy).sqrt();
        if min_eig / n < params.min_eigenvalue || det <= 0.0 {
            return None;
        }

        let mut nu = [0.0f64; 2];
        for _ in 0..params.max_iterations {
            let (mut bx, mut by) = (0.0, 0.0);
            let mut k = 0;
            for j in -half..=half {
                for i in -half..=half {
                    let (t, ix, iy) = template[k];
                    k += 1;
                    let x = p[0] + guess[0] + nu[0] + i as f64;
                    let y = p[1] + guess[1] + nu[1] + j as f64;
                    let diff = t - d.image.sample(x, y);
                    bx += diff * ix;
                    by += diff * iy;
                }
            }
            let eta = [(gyy * bx - gxy * by) / det, (gxx * by - gxy * bx) / det];
            nu[0] += eta[0];
            nu[1] += eta[1];
            if !(nu[0].is_finite() && nu[1].is_finite()) {
                return None;
            }
            if eta[0].hypot(eta[1]) < params.epsilon {
                break;
            }
        }
        guess = if level > 0 {
            [2.0 * (guess[0] + nu[0]), 2.0 * (guess[1] + nu[1])]
        } else {
            [guess[0] + nu[0], guess[1] + nu[1]]
        };
    }
    Some([point[0] + guess[0], point[1] + guess[1]])
}
