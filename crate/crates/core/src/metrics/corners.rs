use super::PointList;
use crate::imgio::Image;
use crate::plane::Plane;

#[derive(Clone, Debug, PartialEq)]
pub struct CornerParams {
    pub max_points: usize,
    /// Minimum score as a fraction of the strongest response.
    pub quality: f64,
    /// Minimum Euclidean spacing between accepted corners, pixels.
    pub min_distance: f64,
}

impl Default for CornerParams {
    fn default() -> Self {
        CornerParams {
            max_points: 10_000,
            quality: 0.01,
            min_distance: 8.0,
        }
    }
}

/// Shi-Tomasi corners: local maxima of the structure-tensor minimum
/// eigenvalue, strongest first, thinned greedily by `min_distance`.
///
/// A constant image has no response and yields an empty list.
pub fn detect_corners(
    image: &Image,
    max_points: usize,
    quality: f64,
    min_distance: f64,
) -> PointList {
    let plane = Plane::luma_scaled(image, 1.0);
    let (w, h) = (plane.width, plane.height);
    let score = min_eigenvalue_map(&plane);
    let best = score.iter().copied().fold(0.0, f64::max);
    if best <= 1e-12 || max_points == 0 {
        return PointList::default();
    }
    let threshold = quality * best;

    let at = |x: isize, y: isize| -> Option<f64> {
        (x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h)
            .then(|| score[y as usize * w + x as usize])
    };
    let mut peaks: Vec<(usize, f64)> = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let s = score[y * w + x];
            if s <= 0.0 || s < threshold {
                continue;
            }
            let is_max = (-1..=1).all(|dy| {
                (-1..=1).all(|dx| at(x as isize + dx, y as isize + dy).is_none_or(|n| n <= s))
            });
            if is_max {
                peaks.push((y * w + x, s));
            }
        }
    }
    // stable: equal scores keep row-major order
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1));

    let min_d2 = min_distance * min_distance;
    let mut accepted: Vec<(usize, usize)> = Vec::new();
    for (idx, _) in peaks {
        let (x, y) = (idx % w, idx / w);
        let far = accepted.iter().all(|&(ax, ay)| {
            let dx = ax as f64 - x as f64;
            let dy = ay as f64 - y as f64;
            dx * dx + dy * dy >= min_d2
        });
        if far {
            accepted.push((x, y));
            if accepted.len() == max_points {
                break;
            }
        }
    }

    let points = accepted
        .into_iter()
        .map(|(x, y)| {
            let c = score[y * w + x];
            let dx = match (
                at(x as isize - 1, y as isize),
                at(x as isize + 1, y as isize),
            ) {
                (Some(l), Some(r)) => parabolic_offset(l, c, r),
                _ => 0.0,
            };
            let dy = match (
                at(x as isize, y as isize - 1),
                at(x as isize, y as isize + 1),
            ) {
                (Some(u), Some(d)) => parabolic_offset(u, c, d),
                _ => 0.0,
            };
            [x as f64 + dx, y as f64 + dy]
        })
        .collect();
    PointList::new(points)
}

/// Vertex of the parabola through three equally spaced samples, relative to
/// the middle one and limited to half a pixel.
fn parabolic_offset(left: f64, center: f64, right: f64) -> f64 {
    let curvature = left - 2.0 * center + right;
    if curvature >= 0.0 {
        return 0.0;
    }
    (0.5 * (left - right) / curvature).clamp(-0.5, 0.5)
}

/// Minimum eigenvalue of the 3x3 box-summed structure tensor of Sobel
/// gradients.
fn min_eigenvalue_map(plane: &Plane) -> Vec<f64> {
    let (w, h) = (plane.width, plane.height);
    let (gx, gy) = plane.sobel();
    let products = |f: &dyn Fn(usize) -> f64| Plane::new(w, h, (0..w * h).map(f).collect());
    let a = products(&|i| gx[i] * gx[i]);
    let b = products(&|i| gx[i] * gy[i]);
    let c = products(&|i| gy[i] * gy[i]);
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let (mut sa, mut sb, mut sc) = (0.0, 0.0, 0.0);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    sa += a.get_clamped(x + dx, y + dy);
                    sb += b.get_clamped(x + dx, y + dy);
                    sc += c.get_clamped(x + dx, y + dy);
                }
            }
            let half_trace = 0.5 * (sa + sc);
            let half_diff = 0.5 * (sa - sc);
            let lambda = half_trace - (half_diff * half_diff + sb * sb).sqrt();
            out.push(lambda.max(0.0));
        }
    }
    out
}
