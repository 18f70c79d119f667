use thiserror::Error;

use crate::jets::Jet2;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by a jet with zero value: {denominator}")]
    ZeroDenominator { denominator: Jet2 },

    #[error("non-finite parameter {name} = {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("point ({x}, {y}, {z}) lies outside the domain: delta = {delta} <= 0")]
    OutsideDomain { x: f64, y: f64, z: f64, delta: f64 },

    #[error("frame index {0} out of range (expected 1, 2 or 3)")]
    FrameIndex(usize),

    #[error("case {case} does not apply: {reason}")]
    WrongCase { case: &'static str, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("curvature convention self-test failed: {0}")]
    Convention(String),
}
