use rayon::prelude::*;

use super::{backward_warp, fuse, FusionMask, Warped};
use crate::error::{Error, Result, StageExt};
use crate::filtering::{self, filter_flow};
use crate::flowest::{flows_for_quartet, FlowProvider, QuartetFlows};
use crate::imgio::{FlowField, Image};
use crate::quadmodel::{fit_quadratic, predict_linear, MotionModel, QuadraticMotion};
use crate::reversal::{self, reverse_flow, ReversalResult};

/// Settings for [`interpolate`].
#[derive(Clone, Debug)]
pub struct InterpConfig {
    pub model: MotionModel,
    /// Gaussian width of the reversal splat.
    pub sigma: f64,
    /// Chebyshev reach of the reversal splat.
    pub radius: f64,
    /// Medoid filter neighborhood radius.
    pub filter_radius: usize,
    /// Distance from the medoid beyond which a flow value is replaced.
    pub filter_threshold: f64,
    pub provider: FlowProvider,
}

impl Default for InterpConfig {
    fn default() -> Self {
        InterpConfig {
            model: MotionModel::Quadratic,
            sigma: reversal::DEFAULT_SIGMA,
            radius: reversal::DEFAULT_RADIUS,
            filter_radius: filtering::DEFAULT_RADIUS,
            filter_threshold: filtering::DEFAULT_THRESHOLD,
            provider: FlowProvider::default(),
        }
    }
}

/// Intermediate products for one source frame.
#[derive(Clone, Debug)]
pub struct SideResult {
    /// Forward flow from the source frame to time `t`.
    pub forward: FlowField,
    pub reversal: ReversalResult,
    /// Filtered backward flow used for warping.
    pub backward: FlowField,
    pub warped: Warped,
}

impl SideResult {
    /// Pixels where the side has flow support and samples inside the frame.
    pub fn usable(&self) -> Vec<bool> {
        self.reversal
            .holes
            .data()
            .iter()
            .zip(&self.warped.valid)
            .map(|(&hole, &valid)| !hole && valid)
            .collect()
    }
}

/// Full result of interpolating one time step.
#[derive(Clone, Debug)]
pub struct Interpolation {
    pub t: f64,
    pub frame: Image,
    /// Warp of frame 0.
    pub side0: SideResult,
    /// Warp of frame 1.
    pub side1: SideResult,
    pub mask: FusionMask,
}

/// Motion of one source frame towards the other.
#[derive(Clone, Debug)]
enum SideMotion {
    Quadratic(QuadraticMotion),
    Linear(FlowField),
}

impl SideMotion {
    fn fit(model: MotionModel, toward: &FlowField, away: &FlowField) -> Result<Self> {
        Ok(match model {
            MotionModel::Quadratic => SideMotion::Quadratic(fit_quadratic(toward, away)?),
            MotionModel::Linear => SideMotion::Linear(toward.clone()),
        })
    }

    fn predict(&self, t: f64) -> Result<FlowField> {
        match self {
            SideMotion::Quadratic(qm) => qm.predict(t),
            SideMotion::Linear(f) => predict_linear(f, t),
        }
    }
}

/// Flows fitted once for a quartet, reusable across many `t`.
///
/// Frames `-1` and `2` only shape the motion estimate; output pixels come
/// from frames `0` and `1`.
pub struct Interpolator<'a> {
    first: &'a Image,
    second: &'a Image,
    config: InterpConfig,
    side0: SideMotion,
    side1: SideMotion,
}

impl<'a> Interpolator<'a> {
    pub fn new(frames: [&'a Image; 4], config: &InterpConfig) -> Result<Self> {
        let [_, first, second, _] = frames;
        for f in &frames[1..] {
            if !f.same_shape(frames[0]) {
                return Err(
                    Error::dims("input frames differ in size or channel count").in_stage("input")
                );
            }
        }
        let flows = flows_for_quartet(&config.provider, frames).stage("flow estimation")?;
        Self::with_flows(first, second, &flows, config)
    }

    /// Uses given flows, ignoring `config.provider`.
    pub fn with_flows(
        first: &'a Image,
        second: &'a Image,
        flows: &QuartetFlows,
        config: &InterpConfig,
    ) -> Result<Self> {
        // side 1 runs in reversed time: frame 1 is the origin, frame 0 sits at
        // +1 and frame 2 at -1, so the target is at 1 - t
        let side0 = SideMotion::fit(config.model, &flows.f0_to_1, &flows.f0_to_m1)
            .stage("motion fit (side 0)")?;
        let side1 = SideMotion::fit(config.model, &flows.f1_to_0, &flows.f1_to_2)
            .stage("motion fit (side 1)")?;
        Ok(Interpolator {
            first,
            second,
            config: config.clone(),
            side0,
            side1,
        })
    }

    pub fn frame_at(&self, t: f64) -> Result<Image> {
        Ok(self.detailed(t)?.frame)
    }

    pub fn detailed(&self, t: f64) -> Result<Interpolation> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::invalid(format!("t must be in (0, 1), got {t}")).in_stage("input"));
        }
        let (side0, side1) = rayon::join(
            || self.side(&self.side0, self.first, t, "side 0"),
            || self.side(&self.side1, self.second, 1.0 - t, "side 1"),
        );
        let (side0, side1) = (side0?, side1?);
        let (w, h) = (self.first.width(), self.first.height());
        let mask =
            FusionMask::from_usability(w, h, &side0.usable(), &side1.usable()).stage("fusion")?;
        let frame = fuse(&side0.warped.image, &side1.warped.image, &mask, t).stage("fusion")?;
        Ok(Interpolation {
            t,
            frame,
            side0,
            side1,
            mask,
        })
    }

    fn side(&self, motion: &SideMotion, source: &Image, t: f64, label: &str) -> Result<SideResult> {
        let cfg = &self.config;
        let forward = motion
            .predict(t)
            .stage(&format!("flow prediction ({label})"))?;
        let reversal = reverse_flow(&forward, cfg.sigma, cfg.radius)
            .stage(&format!("flow reversal ({label})"))?;
        let backward = filter_flow(
            &reversal.flow,
            &reversal.holes,
            cfg.filter_radius,
            cfg.filter_threshold,
        )
        .stage(&format!("flow filtering ({label})"))?;
        let warped = backward_warp(source, &backward).stage(&format!("warping ({label})"))?;
        Ok(SideResult {
            forward,
            reversal,
            backward,
            warped,
        })
    }
}

/// Synthesizes the frame at time `t` in `(0, 1)` from frames at `-1, 0, 1, 2`.
pub fn interpolate(frames: [&Image; 4], t: f64, config: &InterpConfig) -> Result<Image> {
    Interpolator::new(frames, config)?.frame_at(t)
}

/// Synthesizes one frame per entry of `times`, sharing the flow work.
pub fn interpolate_many(
    frames: [&Image; 4],
    times: &[f64],
    config: &InterpConfig,
) -> Result<Vec<Image>> {
    let interp = Interpolator::new(frames, config)?;
    times
        .par_iter()
        .map(|&t| interp.frame_at(t).map_err(|e| e.in_stage(format!("t={t}"))))
        .collect()
}
