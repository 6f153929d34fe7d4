//! Faithfulness and stability benchmarks for attribution maps on skeleton
//! graph-convolutional classifiers.
//!
//! The pipeline: skeleton sequences ([`skeleton`], [`synth`]) are cut into
//! windows and turned into position, velocity and bone streams; a small
//! multi-stream GCN ([`model`]) classifies them; [`attribution`] explains
//! the prediction per joint; [`perturb`] displaces joints; [`metrics`] scores
//! the explanations and [`stats`] compares methods.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the common `f64` instantiations.

pub mod attribution;
pub mod metrics;
pub mod model;
pub mod numeric;
pub mod perturb;
mod scalar;
pub mod seed;
pub mod skeleton;
pub mod stats;
pub mod synth;

pub use scalar::Scalar;

pub type Sequence = skeleton::SkeletonSequence<f64>;
pub type Window = skeleton::Window<f64>;
pub type Streams = skeleton::Streams<f64>;
pub type Model = model::ModelInstance<f64>;
pub type Ensemble = model::Ensemble<f64>;
pub type Attribution = attribution::AttributionMap<f64>;
pub type Explainer = attribution::Explainer<f64>;

pub type Sequence32 = skeleton::SkeletonSequence<f32>;
pub type Window32 = skeleton::Window<f32>;
pub type Model32 = model::ModelInstance<f32>;
