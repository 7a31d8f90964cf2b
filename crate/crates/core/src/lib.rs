//! Frame interpolation with a per-pixel quadratic motion model.
//!
//! Four consecutive frames `I[-1], I[0], I[1], I[2]` are turned into an
//! intermediate frame at any `t` in `(0, 1)`:
//!
//! 1. pairwise flows are estimated ([`flowest`]) or loaded from `.flo` files,
//! 2. velocity and acceleration are fitted per pixel and the forward flow to
//!    time `t` is predicted ([`quadmodel`]),
//! 3. the forward flow is splatted into a backward flow with hole reporting
//!    ([`reversal`]),
//! 4. spikes are removed and holes are filled with a medoid filter
//!    ([`filtering`]),
//! 5. `I[0]` and `I[1]` are backward-warped and fused ([`synthesis`]).
//!
//! [`synthgen`] renders scenes with exactly known kinematics and [`metrics`]
//! scores the results.

pub mod cli;
pub mod error;
pub mod filtering;
pub mod flowest;
pub mod imgio;
pub mod metrics;
pub(crate) mod plane;
pub mod quadmodel;
pub mod reversal;
pub mod synthesis;
pub mod synthgen;

pub use error::{Error, Result};
pub use imgio::{FlowField, HoleMask, Image};
