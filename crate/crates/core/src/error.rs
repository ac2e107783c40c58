//! Error type shared across the crate.
//!
//! Data-dependent failures (singular matrices, indefinite metrics, invalid
//! parameters) are surfaced as `Error`; dimension misuse between values that
//! a caller constructed is a programming error and panics with a message.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse rational from {0:?}")]
    InvalidRational(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("metric is not positive-definite at {0}")]
    MetricNotPositiveDefinite(String),

    #[error("metric components are not symmetric: g[{i}][{j}] != g[{j}][{i}]")]
    AsymmetricMetric { i: usize, j: usize },

    #[error("tensor is not symmetric at ({i},{j})")]
    AsymmetricTensor { i: usize, j: usize },

    #[error("metric jet of order {got} does not carry the data for this operation (need {need})")]
    InsufficientJetOrder { need: usize, got: usize },

    #[error("jets refer to different points")]
    PointMismatch,

    #[error("metric is not identity-normalized at the evaluation point")]
    NotIdentityNormalized,

    #[error("perturbation step leaves the positive-definite cone (step too large)")]
    StepNotPositiveDefinite,

    #[error("metric degenerates along the integrated path at step {step}")]
    MetricSingularAlongPath { step: usize },

    #[error("curve sample has zero velocity")]
    ZeroVelocitySample,

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error(
        "extra perturbation breaks the axis geodesic: defect in component k={component}: {polynomial}"
    )]
    AxisDefect {
        component: usize,
        polynomial: String,
    },
}
