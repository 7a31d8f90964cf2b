//! Per-pixel motion models for predicting the flow from frame 0 to time `t`.
//!
//! Times are in frame units: the inputs sit at `-1, 0, 1, 2`. Under constant
//! acceleration the displacement of a pixel is `v t + (a/2) t^2`, and the two
//! flows `f(0->1)` and `f(0->-1)` determine `v` and `a/2` exactly.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::imgio::FlowField;

/// Which model predicts the intermediate flow.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MotionModel {
    /// Constant acceleration, fitted from the flows to both neighbors.
    #[default]
    Quadratic,
    /// Constant velocity, `t * f(0->1)`.
    Linear,
}

impl fmt::Display for MotionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MotionModel::Quadratic => "quadratic",
            MotionModel::Linear => "linear",
        })
    }
}

impl FromStr for MotionModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadratic" => Ok(MotionModel::Quadratic),
            "linear" => Ok(MotionModel::Linear),
            other => Err(Error::invalid(format!("unknown motion model {other:?}"))),
        }
    }
}

/// Velocity and half-acceleration per pixel.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticMotion {
    /// `(f(0->1) - f(0->-1)) / 2`, pixels per frame.
    pub velocity: FlowField,
    /// `(f(0->1) + f(0->-1)) / 2`, pixels per frame squared.
    pub half_acceleration: FlowField,
}

/// Fits the constant-acceleration model from the flows to the next and the
/// previous frame.
pub fn fit_quadratic(f0_to_1: &FlowField, f0_to_m1: &FlowField) -> Result<QuadraticMotion> {
    let velocity = f0_to_1.zip_map(f0_to_m1, |a, b| [(a[0] - b[0]) / 2.0, (a[1] - b[1]) / 2.0])?;
    let half_acceleration =
        f0_to_1.zip_map(f0_to_m1, |a, b| [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0])?;
    Ok(QuadraticMotion {
        velocity,
        half_acceleration,
    })
}

impl QuadraticMotion {
    /// Forward flow `f(0->t) = (a/2) t^2 + v t`.
    pub fn predict(&self, t: f64) -> Result<FlowField> {
        predict_flow(self, t)
    }
}

pub fn predict_flow(motion: &QuadraticMotion, t: f64) -> Result<FlowField> {
    check_time(t)?;
    let t2 = t * t;
    motion.half_acceleration.zip_map(&motion.velocity, |a, v| {
        [a[0] * t2 + v[0] * t, a[1] * t2 + v[1] * t]
    })
}

/// Forward flow under constant velocity, `t * f(0->1)`.
pub fn predict_linear(f0_to_1: &FlowField, t: f64) -> Result<FlowField> {
    check_time(t)?;
    f0_to_1.map(|f| [f[0] * t, f[1] * t])
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("time must be finite, got {t}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn constant(v: [f64; 2]) -> FlowField {
        FlowField::constant(3, 2, v).unwrap()
    }

    #[test]
    fn fit_examples() {
        let qm = fit_quadratic(&constant([2.0, 0.0]), &constant([0.0, 0.0])).unwrap();
        assert_eq!(qm.velocity, constant([1.0, 0.0]));
        assert_eq!(qm.half_acceleration, constant([1.0, 0.0]));
        assert_eq!(qm.predict(0.5).unwrap(), constant([0.75, 0.0]));

        let uniform = fit_quadratic(&constant([3.0, -1.0]), &constant([-3.0, 1.0])).unwrap();
        assert_eq!(uniform.half_acceleration, constant([0.0, 0.0]));

        let still = fit_quadratic(&constant([0.0, 0.0]), &constant([0.0, 0.0])).unwrap();
        assert_eq!(still.velocity.max_abs(), 0.0);
        assert_eq!(still.half_acceleration.max_abs(), 0.0);
    }

    #[test]
    fn linear_examples() {
        let f = constant([4.0, -2.0]);
        assert_eq!(predict_linear(&f, 0.25).unwrap(), constant([1.0, -0.5]));
        assert_eq!(predict_linear(&f, 0.0).unwrap().max_abs(), 0.0);
        assert_eq!(predict_linear(&f, 1.0).unwrap(), f);
    }

    #[test]
    fn errors() {
        assert!(fit_quadratic(&constant([0.0; 2]), &FlowField::zeros(2, 2).unwrap()).is_err());
        let qm = fit_quadratic(&constant([1.0; 2]), &constant([1.0; 2])).unwrap();
        assert!(qm.predict(f64::NAN).is_err());
        assert!(predict_linear(&constant([1.0; 2]), f64::INFINITY).is_err());
    }

    #[test]
    fn model_names() {
        assert_eq!(
            "linear".parse::<MotionModel>().unwrap(),
            MotionModel::Linear
        );
        assert_eq!(MotionModel::Quadratic.to_string(), "quadratic");
        assert!("cubic".parse::<MotionModel>().is_err());
    }

    fn field(w: usize, h: usize) -> impl Strategy<Value = FlowField> {
        proptest::collection::vec([-50.0f64..50.0, -50.0f64..50.0], w * h)
            .prop_map(move |d| FlowField::new(w, h, d).unwrap())
    }

    proptest! {
        #[test]
        fn reconstructs_endpoints((a, b) in (1usize..8, 1usize..8).prop_flat_map(|(w, h)| (field(w, h), field(w, h)))) {
            let qm = fit_quadratic(&a, &b).unwrap();
            for (t, expect) in [(1.0, &a), (-1.0, &b)] {
                let p = qm.predict(t).unwrap();
                for (x, y) in p.data().iter().zip(expect.data()) {
                    prop_assert!((x[0] - y[0]).abs() <= 1e-12 && (x[1] - y[1]).abs() <= 1e-12);
                }
            }
        }

        #[test]
        fn symmetric_flows_degenerate_to_linear(a in field(4, 3), t in -1.0f64..1.0) {
            let neg = a.map(|f| [-f[0], -f[1]]).unwrap();
            let q = fit_quadratic(&a, &neg).unwrap().predict(t).unwrap();
            let l = predict_linear(&a, t).unwrap();
            for (x, y) in q.data().iter().zip(l.data()) {
                prop_assert!((x[0] - y[0]).abs() <= 1e-12 && (x[1] - y[1]).abs() <= 1e-12);
            }
        }
    }
}
