use super::PointList;
use super::{detect_corners, track_points, CornerParams, LkParams};
use crate::error::{Error, Result};
use crate::imgio::Image;

/// Average Euclidean distance between corresponding points, over indices
/// valid in both lists.
pub fn asfp(reference: &PointList, predicted: &PointList) -> Result<f64> {
    if reference.len() != predicted.len() {
        return Err(Error::dims(format!(
            "point lists have {} and {} entries",
            reference.len(),
            predicted.len()
        )));
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for i in 0..reference.len() {
        if reference.valid[i] && predicted.valid[i] {
            let (a, b) = (reference.points[i], predicted.points[i]);
            total += (a[0] - b[0]).hypot(a[1] - b[1]);
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::invalid("no point is valid in both lists"));
    }
    Ok(total / count as f64)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AsfpParams {
    pub corners: CornerParams,
    pub tracker: LkParams,
}

/// Detects corners on `base` (the true frame 0), tracks them into the true
/// and the predicted intermediate frame, and scores the shift between the
/// two tracks.
pub fn asfp_for_frames(
    base: &Image,
    truth: &Image,
    predicted: &Image,
    params: &AsfpParams,
) -> Result<f64> {
    if !base.same_shape(truth) || !base.same_shape(predicted) {
        return Err(Error::dims("ASFP frames must share dimensions"));
    }
    let c = &params.corners;
    let seeds = detect_corners(base, c.max_points, c.quality, c.min_distance);
    if seeds.is_empty() {
        return Err(Error::invalid("no corners found on the base frame"));
    }
    let on_truth = track_points(base, truth, &seeds, &params.tracker);
    let on_pred = track_points(base, predicted, &seeds, &params.tracker);
    asfp(&on_truth, &on_pred)
}
