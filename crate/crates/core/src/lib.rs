//! Frame geometry and Ricci soliton verification for the Lorentzian
//! Bianchi-Cartan-Vranceanu spaces `M(λ, μ)`.
//!
//! * [`jets`]: second-order forward-mode differentiation in `(x, y, z)`.
//! * [`geometry`]: the frame, its brackets, connection, curvature and Ricci tensor.
//! * [`soliton`]: Lie derivative of the metric and soliton residuals.
//! * [`catalog`]: closed-form soliton families and the classification.
//! * [`probe`]: least-squares search for polynomial soliton fields.
//! * [`sampling`]: seeded random parameters, coefficients and test fields.

pub mod catalog;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod jets;
pub mod probe;
pub mod sampling;
pub mod soliton;

pub use error::{Error, Result};
