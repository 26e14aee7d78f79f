use thiserror::Error;

use crate::fiber::ModeFamily;

/// Errors raised by the physics and numerics layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid fiber: {0}")]
    InvalidFiber(String),
    #[error("{family:?}({l},{m}) is below cutoff at omega = {omega:e} rad/s")]
    ModeBelowCutoff {
        family: ModeFamily,
        l: u32,
        m: u32,
        omega: f64,
    },
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("polarization does not match mode family: {0}")]
    PolarizationMismatch(String),
    #[error("axial wavenumber {beta:e} is outside the radiation band |beta| < {limit:e}")]
    EvanescentBeta { beta: f64, limit: f64 },
    #[error("field point r = {r:e} m is not outside the fiber (a = {a:e} m)")]
    InsideFiber { r: f64, a: f64 },
    #[error("saturation parameter s = {0} exceeds the weak-excitation limit")]
    SaturationTooHigh(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("special function failure: {0}")]
    Special(String),
}

pub type Result<T> = std::result::Result<T, Error>;
