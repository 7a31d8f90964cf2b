//! Synthetic scenes with exactly known constant-acceleration motion.
//!
//! Sprites translate rigidly along `p(t) = p0 + v t + (a/2) t^2`, so every
//! rendered frame and every flow between two times is known in closed form.

mod render;
mod scene;
mod texture;

pub use render::{
    analytic_flow, intensity_centroid, render_frame, render_quartet_with_targets, sprite_coverage,
    RenderedQuartet, DEFAULT_TARGETS,
};
pub use scene::{SceneSpec, Shape, Sprite};
