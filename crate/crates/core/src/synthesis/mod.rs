//! Backward warping, fusion, and the end-to-end interpolation pipeline.

mod fuse;
mod pipeline;
mod warp;

pub use fuse::{fuse, FusionMask};
pub use pipeline::{
    interpolate, interpolate_many, InterpConfig, Interpolation, Interpolator, SideResult,
};
pub use warp::{backward_warp, Warped};
