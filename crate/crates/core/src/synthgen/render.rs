use rayon::prelude::*;

use super::scene::{SceneSpec, Shape, Sprite};
use super::texture::value_noise;
use crate::error::{Error, Result, StageExt};
use crate::flowest::QuartetFlows;
use crate::imgio::{FlowField, Image};

/// Target times `0.125, 0.25, ..., 0.875`.
pub const DEFAULT_TARGETS: [f64; 7] = [0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875];

/// Minimum pixel coverage for a pixel to belong to a sprite's flow support.
const SUPPORT_COVERAGE: f64 = 0.01;

/// Alpha and color of a sprite at a point given relative to its center.
fn sprite_sample(shape: &Shape, dx: f64, dy: f64) -> (f64, f64) {
    match *shape {
        Shape::GaussianBlob { sigma, value } => {
            let alpha = (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp();
            (alpha, value)
        }
        Shape::TexturedDisc { radius, seed } => {
            if dx * dx + dy * dy <= radius * radius {
                (1.0, value_noise(seed, dx, dy))
            } else {
                (0.0, 0.0)
            }
        }
    }
}

/// Subsample offsets within a pixel, centered on the pixel center.
fn subsample_offsets(factor: usize) -> Vec<f64> {
    (0..factor)
        .map(|i| (i as f64 + 0.5) / factor as f64 - 0.5)
        .collect()
}

/// Whether a sprite can touch the pixel at `(x, y)` given its center.
#[inline]
fn may_touch(shape: &Shape, center: [f64; 2], x: usize, y: usize) -> bool {
    match shape {
        // blobs have unbounded support
        Shape::GaussianBlob { .. } => true,
        Shape::TexturedDisc { radius, .. } => {
            let reach = radius + 1.0;
            (x as f64 - center[0]).abs() <= reach && (y as f64 - center[1]).abs() <= reach
        }
    }
}

/// Renders the scene at time `t` as a gray image.
pub fn render_frame(scene: &SceneSpec, t: f64) -> Result<Image> {
    scene.validate()?;
    scene.check_margins(t)?;
    let (w, h) = (scene.width, scene.height);
    let offsets = subsample_offsets(scene.supersample);
    let norm = 1.0 / (offsets.len() * offsets.len()) as f64;
    let centers: Vec<[f64; 2]> = scene.sprites.iter().map(|s| s.position(t)).collect();
    let mut data = vec![0.0; w * h];
    data.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
        for (x, out) in row.iter_mut().enumerate() {
            let touching: Vec<(&Sprite, [f64; 2])> = scene
                .sprites
                .iter()
                .zip(&centers)
                .filter(|(s, c)| may_touch(&s.shape, **c, x, y))
                .map(|(s, c)| (s, *c))
                .collect();
            if touching.is_empty() {
                *out = scene.background;
                continue;
            }
            let mut acc = 0.0;
            for oy in &offsets {
                for ox in &offsets {
                    let (sx, sy) = (x as f64 + ox, y as f64 + oy);
                    let mut v = scene.background;
                    for (sprite, c) in &touching {
                        let (alpha, color) = sprite_sample(&sprite.shape, sx - c[0], sy - c[1]);
                        v = v * (1.0 - alpha) + color * alpha;
                    }
                    acc += v;
                }
            }
            *out = acc * norm;
        }
    });
    Image::new(w, h, 1, data)
}

/// Mean alpha of one sprite over each pixel's subsamples at time `t`.
pub fn sprite_coverage(scene: &SceneSpec, sprite: &Sprite, t: f64) -> Vec<f64> {
    let (w, h) = (scene.width, scene.height);
    let offsets = subsample_offsets(scene.supersample);
    let norm = 1.0 / (offsets.len() * offsets.len()) as f64;
    let c = sprite.position(t);
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            if !may_touch(&sprite.shape, c, x, y) {
                continue;
            }
            let mut acc = 0.0;
            for oy in &offsets {
                for ox in &offsets {
                    acc +=
                        sprite_sample(&sprite.shape, x as f64 + ox - c[0], y as f64 + oy - c[1]).0;
                }
            }
            out[y * w + x] = acc * norm;
        }
    }
    out
}

/// Exact flow from `t0` to `t1`: each sprite's displacement over the pixels
/// it covers at `t0` (coverage above 0.01), zero on the background.
///
/// Fails when two sprites share a support pixel.
pub fn analytic_flow(scene: &SceneSpec, t0: f64, t1: f64) -> Result<FlowField> {
    scene.validate()?;
    scene.check_margins(t0)?;
    scene.check_margins(t1)?;
    let (w, h) = (scene.width, scene.height);
    let mut flow = vec![[0.0; 2]; w * h];
    let mut owner: Vec<Option<usize>> = vec![None; w * h];
    for (i, sprite) in scene.sprites.iter().enumerate() {
        let d = sprite.displacement(t0, t1);
        for (p, cov) in sprite_coverage(scene, sprite, t0).into_iter().enumerate() {
            if cov <= SUPPORT_COVERAGE {
                continue;
            }
            if let Some(j) = owner[p] {
                return Err(Error::invalid(format!(
                    "sprites {j} and {i} overlap at ({}, {}) at t={t0}",
                    p % w,
                    p / w
                )));
            }
            owner[p] = Some(i);
            flow[p] = d;
        }
    }
    FlowField::new(w, h, flow)
}

/// Frames at `-1, 0, 1, 2`, targets, and the four ground-truth flows.
#[derive(Clone, Debug)]
pub struct RenderedQuartet {
    /// Frames at times `-1, 0, 1, 2`.
    pub frames: [Image; 4],
    pub targets: Vec<(f64, Image)>,
    pub flows: QuartetFlows,
}

impl RenderedQuartet {
    pub fn frame_refs(&self) -> [&Image; 4] {
        [
            &self.frames[0],
            &self.frames[1],
            &self.frames[2],
            &self.frames[3],
        ]
    }
}

pub fn render_quartet_with_targets(
    scene: &SceneSpec,
    target_times: &[f64],
) -> Result<RenderedQuartet> {
    let frame = |t: f64| render_frame(scene, t).stage(&format!("render t={t}"));
    let frames = [frame(-1.0)?, frame(0.0)?, frame(1.0)?, frame(2.0)?];
    let targets = target_times
        .iter()
        .map(|&t| Ok((t, frame(t)?)))
        .collect::<Result<Vec<_>>>()?;
    let flow =
        |a: f64, b: f64| analytic_flow(scene, a, b).stage(&format!("analytic flow {a}->{b}"));
    let flows = QuartetFlows {
        f0_to_1: flow(0.0, 1.0)?,
        f0_to_m1: flow(0.0, -1.0)?,
        f1_to_0: flow(1.0, 0.0)?,
        f1_to_2: flow(1.0, 2.0)?,
    };
    Ok(RenderedQuartet {
        frames,
        targets,
        flows,
    })
}

/// Centroid of `|I - background|` over luma, or `None` for an empty image.
pub fn intensity_centroid(image: &Image, background: f64) -> Option<[f64; 2]> {
    let luma = crate::imgio::luma(image);
    let w = image.width();
    let (mut sx, mut sy, mut sw) = (0.0, 0.0, 0.0);
    for (i, v) in luma.iter().enumerate() {
        let wt = (v - background).abs();
        sx += wt * (i % w) as f64;
        sy += wt * (i / w) as f64;
        sw += wt;
    }
    (sw > 0.0).then(|| [sx / sw, sy / sw])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadmodel::fit_quadratic;

    fn blob_scene(p0: [f64; 2], v: [f64; 2], a: [f64; 2], sigma: f64) -> SceneSpec {
        SceneSpec::new(40, 24).with_sprite(Sprite {
            p0,
            velocity: v,
            acceleration: a,
            shape: Shape::GaussianBlob { sigma, value: 1.0 },
        })
    }

    fn near(p: [f64; 2], q: [f64; 2], tol: f64) -> bool {
        (p[0] - q[0]).abs() <= tol && (p[1] - q[1]).abs() <= tol
    }

    #[test]
    fn blob_centroids_follow_kinematics() {
        let scene = blob_scene([10.0, 10.0], [4.0, 0.0], [2.0, 0.0], 1.0);
        for (t, expect) in [
            (0.0, [10.0, 10.0]),
            (1.0, [15.0, 10.0]),
            (-1.0, [7.0, 10.0]),
        ] {
            let c = intensity_centroid(&render_frame(&scene, t).unwrap(), 0.0).unwrap();
            assert!(near(c, expect, 0.05), "t={t}: {c:?}");
        }
    }

    #[test]
    fn margin_violation_is_an_error() {
        let scene = blob_scene([10.0, 10.0], [4.0, 0.0], [2.0, 0.0], 1.0);
        assert!(render_frame(&scene, 4.0).is_err());
    }

    #[test]
    fn analytic_flow_values() {
        let scene = SceneSpec::new(64, 48).with_sprite(Sprite {
            p0: [30.0, 24.0],
            velocity: [4.0, 0.0],
            acceleration: [2.0, 0.0],
            shape: Shape::TexturedDisc {
                radius: 8.0,
                seed: 5,
            },
        });
        let f01 = analytic_flow(&scene, 0.0, 1.0).unwrap();
        let f0m1 = analytic_flow(&scene, 0.0, -1.0).unwrap();
        assert_eq!(f01.get(30, 24), [5.0, 0.0]);
        assert_eq!(f0m1.get(30, 24), [-3.0, 0.0]);
        assert_eq!(f01.get(2, 2), [0.0, 0.0]);
        let mid = fit_quadratic(&f01, &f0m1).unwrap().predict(0.5).unwrap();
        assert_eq!(mid.get(30, 24), [2.25, 0.0]);
    }

    #[test]
    fn overlapping_supports_are_rejected() {
        let disc = |x: f64, seed| Sprite {
            p0: [x, 30.0],
            velocity: [0.0, 0.0],
            acceleration: [0.0, 0.0],
            shape: Shape::TexturedDisc { radius: 6.0, seed },
        };
        let scene = SceneSpec::new(80, 60)
            .with_sprite(disc(32.0, 1))
            .with_sprite(disc(40.0, 2));
        assert!(analytic_flow(&scene, 0.0, 1.0).is_err());
    }

    #[test]
    fn static_scene_frames_identical() {
        let scene = blob_scene([20.0, 12.0], [0.0, 0.0], [0.0, 0.0], 1.5);
        let q = render_quartet_with_targets(&scene, &DEFAULT_TARGETS).unwrap();
        for f in &q.frames {
            assert_eq!(f, &q.frames[0]);
        }
        for (_, img) in &q.targets {
            assert_eq!(img, &q.frames[0]);
        }
    }

    #[test]
    fn targets_lie_on_the_parabola() {
        let sprite = Sprite {
            p0: [22.0, 20.0],
            velocity: [3.0, -1.0],
            acceleration: [2.0, 1.5],
            shape: Shape::GaussianBlob {
                sigma: 1.5,
                value: 0.9,
            },
        };
        let scene = SceneSpec {
            width: 48,
            height: 40,
            background: 0.1,
            supersample: 4,
            sprites: vec![sprite.clone()],
        };
        let q = render_quartet_with_targets(&scene, &DEFAULT_TARGETS).unwrap();
        assert_eq!(q.targets.len(), 7);
        for (t, img) in &q.targets {
            let c = intensity_centroid(img, 0.1).unwrap();
            assert!(near(c, sprite.position(*t), 0.05), "t={t}: {c:?}");
        }
    }

    #[test]
    fn textured_renders_are_reproducible() {
        let scene = SceneSpec::new(64, 64).with_sprite(Sprite {
            p0: [32.0, 32.0],
            velocity: [1.0, 0.5],
            acceleration: [-1.0, 0.0],
            shape: Shape::TexturedDisc {
                radius: 10.0,
                seed: 99,
            },
        });
        let a = render_quartet_with_targets(&scene, &[0.5]).unwrap();
        let b = render_quartet_with_targets(&scene, &[0.5]).unwrap();
        assert_eq!(a.frames, b.frames);
        assert_eq!(a.targets[0].1, b.targets[0].1);
        assert_eq!(a.flows, b.flows);
    }
}
