//! Simulation and analysis toolkit for counterfactual full-duplex quantum
//! communication built from chained quantum-Zeno gates.

pub mod channels;
pub mod cli;
pub mod error;
pub mod hilbert;
pub mod montecarlo;
pub mod protocols;
pub mod zeno;

pub use error::{Error, Result};
