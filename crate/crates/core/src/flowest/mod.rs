//! Pairwise flow fields for the four input frames.
//!
//! Flow comes from the built-in pyramidal Horn-Schunck estimator, from `.flo`
//! files named by a path template, or from fields already held in memory.

mod horn_schunck;
mod provider;

pub use horn_schunck::{estimate_flow, HornSchunckParams};
pub use provider::{flows_for_quartet, FlowProvider, QuartetFlows};
