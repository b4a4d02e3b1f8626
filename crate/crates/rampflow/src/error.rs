//! Crate-wide error type.

use crate::{ode, quad};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("x = {x} outside profile domain [0, {x_end}]")]
    OutOfDomain { x: f64, x_end: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("inadmissible profile: wall load fails at x = {x}")]
    Inadmissible { x: f64 },
    #[error("degenerate layer at x = {x}: {why}")]
    DegenerateLayer { x: f64, why: String },
    #[error("hypothesis violation: {0}")]
    Hypothesis(String),
    #[error("evaluation beyond blow-up point: x = {x}, layer ends at {x_end}")]
    BeyondBlowUp { x: f64, x_end: f64 },
    #[error("entropy/positivity violation at x = {x}: {detail}")]
    EntropyViolation { x: f64, detail: String },
    #[error("verification: {0}")]
    Verify(String),
    #[error(transparent)]
    Quad(#[from] quad::QuadError),
    #[error(transparent)]
    Ode(#[from] ode::OdeError),
}

pub type Result<T> = std::result::Result<T, Error>;
