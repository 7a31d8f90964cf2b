use std::path::PathBuf;

use super::{estimate_flow, HornSchunckParams};
use crate::error::{Error, Result};
use crate::imgio::{read_flo, FlowField, Image};

/// The four pairwise flows consumed by the interpolation pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct QuartetFlows {
    /// Frame 0 to frame 1.
    pub f0_to_1: FlowField,
    /// Frame 0 to frame -1.
    pub f0_to_m1: FlowField,
    /// Frame 1 to frame 0.
    pub f1_to_0: FlowField,
    /// Frame 1 to frame 2.
    pub f1_to_2: FlowField,
}

impl QuartetFlows {
    /// `(source, target, flow)` for each pair, in a fixed order.
    pub fn pairs(&self) -> [(i32, i32, &FlowField); 4] {
        [
            (0, 1, &self.f0_to_1),
            (0, -1, &self.f0_to_m1),
            (1, 0, &self.f1_to_0),
            (1, 2, &self.f1_to_2),
        ]
    }

    fn check_size(&self, width: usize, height: usize) -> Result<()> {
        for (src, dst, flow) in self.pairs() {
            if !flow.same_size(width, height) {
                return Err(Error::dims(format!(
                    "flow {src}->{dst} is {}x{}, frames are {width}x{height}",
                    flow.width(),
                    flow.height()
                ))
                .in_stage(format!("flow {src}->{dst}")));
            }
        }
        Ok(())
    }
}

/// Where pairwise flows come from.
#[derive(Clone, Debug)]
pub enum FlowProvider {
    /// Built-in pyramidal Horn-Schunck.
    Estimator(HornSchunckParams),
    /// `.flo` files; `{src}` and `{dst}` in the template are replaced by frame
    /// indices in `{-1, 0, 1, 2}`, e.g. `flows/flow_{src}to{dst}.flo`.
    Files { template: String },
    /// Flows already in memory, e.g. analytic ground truth.
    Precomputed(Box<QuartetFlows>),
}

impl Default for FlowProvider {
    fn default() -> Self {
        FlowProvider::Estimator(HornSchunckParams::default())
    }
}

impl FlowProvider {
    /// Expands the files-mode template for one frame pair.
    pub fn resolve(template: &str, src: i32, dst: i32) -> PathBuf {
        PathBuf::from(
            template
                .replace("{src}", &src.to_string())
                .replace("{dst}", &dst.to_string()),
        )
    }
}

/// Flows `0->1`, `0->-1`, `1->0`, `1->2` for frames at times `-1, 0, 1, 2`.
pub fn flows_for_quartet(provider: &FlowProvider, frames: [&Image; 4]) -> Result<QuartetFlows> {
    let [prev, first, second, next] = frames;
    let (w, h) = (first.width(), first.height());
    for (i, f) in frames.iter().enumerate() {
        if f.width() != w || f.height() != h {
            return Err(Error::dims(format!(
                "frame {} is {}x{}, frame 0 is {w}x{h}",
                i as i32 - 1,
                f.width(),
                f.height()
            )));
        }
    }

    let flows = match provider {
        FlowProvider::Estimator(params) => {
            let run = |src: &Image, dst: &Image, a: i32, b: i32| {
                estimate_flow(src, dst, params).map_err(|e| e.in_stage(format!("flow {a}->{b}")))
            };
            let ((f0_to_1, f0_to_m1), (f1_to_0, f1_to_2)) = rayon::join(
                || rayon::join(|| run(first, second, 0, 1), || run(first, prev, 0, -1)),
                || rayon::join(|| run(second, first, 1, 0), || run(second, next, 1, 2)),
            );
            QuartetFlows {
                f0_to_1: f0_to_1?,
                f0_to_m1: f0_to_m1?,
                f1_to_0: f1_to_0?,
                f1_to_2: f1_to_2?,
            }
        }
        FlowProvider::Files { template } => {
            let load = |a: i32, b: i32| {
                read_flo(FlowProvider::resolve(template, a, b))
                    .map_err(|e| e.in_stage(format!("flow {a}->{b}")))
            };
            QuartetFlows {
                f0_to_1: load(0, 1)?,
                f0_to_m1: load(0, -1)?,
                f1_to_0: load(1, 0)?,
                f1_to_2: load(1, 2)?,
            }
        }
        FlowProvider::Precomputed(flows) => (**flows).clone(),
    };
    flows.check_size(w, h)?;
    Ok(flows)
}
