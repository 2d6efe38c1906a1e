use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{LossCause, LossLedger, StateVector};
use crate::zeno::LossEvent;

/// Subsystem labels used by both protocols.
pub const ELECTRON: &str = "e";
pub const POLARIZATION: &str = "p";
pub const PATH: &str = "c";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DuplexMessage {
    /// Alice → Bob.
    pub b1: u8,
    /// Bob → Alice.
    pub b2: u8,
}

impl DuplexMessage {
    pub fn new(b1: u8, b2: u8) -> Result<Self> {
        if b1 > 1 || b2 > 1 {
            return Err(Error::InvalidArgument(format!("message bits must be 0 or 1, got ({b1}, {b2})")));
        }
        Ok(Self { b1, b2 })
    }

    pub fn all() -> [DuplexMessage; 4] {
        [(0, 0), (0, 1), (1, 0), (1, 1)].map(|(b1, b2)| DuplexMessage { b1, b2 })
    }
}

/// Normalized qubit `a|0> + b|1>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitState {
    pub a: Complex64,
    pub b: Complex64,
}

impl QubitState {
    /// Requires unit norm within 1e-12.
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let n = a.norm_sqr() + b.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        Ok(Self { a, b })
    }

    /// Accepts norms within 1e-9 of one and rescales exactly.
    pub fn normalized(a: Complex64, b: Complex64) -> Result<Self> {
        let n = a.norm_sqr() + b.norm_sqr();
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        let s = n.sqrt().recip();
        Ok(Self { a: a * s, b: b * s })
    }

    pub fn real(a: f64, b: f64) -> Result<Self> {
        Self::normalized(Complex64::new(a, 0.0), Complex64::new(b, 0.0))
    }

    pub fn basis(bit: u8) -> Self {
        let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        if bit == 0 {
            Self { a: one, b: zero }
        } else {
            Self { a: zero, b: one }
        }
    }

    pub fn weight0(&self) -> f64 {
        self.a.norm_sqr()
    }

    pub fn to_state(&self, label: &str) -> StateVector {
        StateVector::qubit(label, self.a, self.b).expect("normalized by construction")
    }

    /// `|<self|other>|²`.
    pub fn fidelity(&self, other: &QubitState) -> f64 {
        (self.a.conj() * other.a + self.b.conj() * other.b).norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TelexMessage {
    /// Alice's state `α|0> + β|1>`.
    pub eta1: QubitState,
    /// Bob's state `γ|0> + δ|1>`.
    pub eta2: QubitState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Decoded,
    Erasure,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolOutcome {
    pub status: Status,
    pub decoded_bits: Option<(u8, u8)>,
    /// (Alice side, Bob side) after decoding.
    pub output_states: Option<(QubitState, QubitState)>,
    pub announcement: Option<u8>,
    pub herald_probability: f64,
    pub closed_form_herald: f64,
    pub coherent_herald: Option<f64>,
    pub ledger: LossLedger,
    pub erasure_cause: Option<LossCause>,
    /// Conditional probability of the reported decode outcome (bits or μ).
    pub outcome_probability: f64,
    /// Telex only: fidelity of (Alice, Bob) outputs with (η₂, η₁).
    pub fidelities: Option<(f64, f64)>,
}

/// Post-selected state at the end of a protocol run, before decoding.
#[derive(Debug, Clone)]
pub struct Heralded {
    pub state: StateVector,
    pub herald_probability: f64,
    pub closed_form_herald: f64,
    pub coherent_herald: Option<f64>,
    pub events: Vec<LossEvent>,
}

impl Heralded {
    pub(crate) fn erasure(&self) -> Option<ProtocolOutcome> {
        (self.herald_probability <= 0.0).then(|| ProtocolOutcome {
            status: Status::Erasure,
            decoded_bits: None,
            output_states: None,
            announcement: None,
            herald_probability: 0.0,
            closed_form_herald: self.closed_form_herald,
            coherent_herald: self.coherent_herald,
            ledger: *self.state.ledger(),
            erasure_cause: Some(self.state.ledger().dominant().unwrap_or(LossCause::AbsorbedByAo)),
            outcome_probability: 0.0,
            fidelities: None,
        })
    }
}
