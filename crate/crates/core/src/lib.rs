//! Exact dyadic step-function models for Haar shifts, sparse operators,
//! local mean oscillation and Muckenhoupt weights.
//!
//! Every function lives on the depth-`N` mesh of a bounded [`Domain`], so
//! averages, operator outputs and norms are finite sums over cells. The
//! numeric core is generic over [`Scalar`] (`f64` or `f32`); the aliases
//! below fix `f64`.

pub mod domain;
pub mod dyadic;
pub mod error;
pub mod operators;
pub mod oscillation;
pub mod scalar;
pub mod step;
pub mod weights;

pub use domain::Domain;
pub use dyadic::{shifted_cover, AxisBox, Cover, DyadicCube};
pub use error::{DyadError, Result};
pub use scalar::Scalar;
pub use step::{StepFunction, VectorStepFunction};
pub use weights::{ap_characteristic, dual_weight, power_weight, ApReport, ApScope, Weight};

pub type Step = StepFunction<f64>;
pub type VectorStep = VectorStepFunction<f64>;
pub type HaarShift = operators::HaarShiftSpec<f64>;
pub type Weight64 = Weight<f64>;
pub type Step32 = StepFunction<f32>;
pub type VectorStep32 = VectorStepFunction<f32>;
