//! Exact Gaussian-process regression for timestamped trajectories.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below are what most callers want.

// `!(a > b)` is used on purpose so NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod demo;
pub mod error;
pub mod gpr;
pub mod kernels;
pub mod means;
pub mod modelspec;
pub mod numlin;
pub mod optimize;
pub mod scalar;
pub mod trajectory;

pub use error::{GpError, Result};
pub use gpr::{sample_prior, GpModel, PredictionKind, PredictionSet};
pub use kernels::{Kernel, MaternOrder, Param};
pub use means::{Coef, MeanFn};
pub use modelspec::{ModelSpec, SpecError, SpecErrorKind};
pub use optimize::{check_gradients, minimize, pack, unpack, OptConfig, OptResult, ParamVector, Termination};
pub use scalar::Scalar;
pub use trajectory::{
    fit_axis, fit_trajectory, interpolate, prepare, Axis, CoordinateDataset, FitOptions, LocatedPrediction,
    Measurement, NoiseMode, PrepConfig, Trajectory, TrajectoryModel,
};

pub type Kernel64 = Kernel<f64>;
pub type MeanFn64 = MeanFn<f64>;
pub type GpModel64 = GpModel<f64>;
pub type PredictionSet64 = PredictionSet<f64>;
pub type GpModel32 = GpModel<f32>;
pub type Kernel32 = Kernel<f32>;
