//! Dense state-vector engine for small labeled composites.

pub mod matrix;
pub mod state;
pub mod unitary;

pub use matrix::{ops, Matrix};
pub use state::{Basis, LossCause, LossLedger, Measurement, Sampler, StateVector, SubsystemSpec, TOLERANCE};
pub use unitary::LocalUnitary;
