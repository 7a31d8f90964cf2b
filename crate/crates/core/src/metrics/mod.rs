//! Frame quality metrics and the feature-shift metric (ASFP).

mod asfp;
mod corners;
mod quality;
mod tracking;

pub use asfp::{asfp, asfp_for_frames, AsfpParams};
pub use corners::{detect_corners, CornerParams};
pub use quality::{compute_quality, psnr, ssim, Quality, PSNR_CAP};
pub use tracking::{track_points, LkParams};

/// Subpixel point positions with per-point validity.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointList {
    pub points: Vec<[f64; 2]>,
    pub valid: Vec<bool>,
}

impl PointList {
    /// All points valid.
    pub fn new(points: Vec<[f64; 2]>) -> Self {
        let valid = vec![true; points.len()];
        PointList { points, valid }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
