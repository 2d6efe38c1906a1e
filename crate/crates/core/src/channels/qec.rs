use rand::{Rng, RngCore};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::protocols::QubitState;

/// Full-duplex quantum erasure channel: swaps the pair with probability `ζ_q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QecModel {
    pub zeta_q: f64,
}

impl QecModel {
    pub fn new(zeta_q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&zeta_q) {
            return Err(Error::InvalidArgument(format!("ζ_q = {zeta_q} is not a probability")));
        }
        Ok(Self { zeta_q })
    }

    /// Fidelity of the channel output with the exchanged pair.
    pub fn fidelity(&self) -> f64 {
        self.zeta_q
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QecBranch {
    Swap,
    Erase,
}

pub enum BranchSampler<'a> {
    Forced(QecBranch),
    Random(&'a mut dyn RngCore),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QecOutput {
    /// (Alice side, Bob side) after the exchange.
    Swapped(QubitState, QubitState),
    Erasure,
}

/// Applies the channel to `(η₁ at Alice, η₂ at Bob)`.
pub fn qec_apply(pair: (QubitState, QubitState), model: &QecModel, sampler: BranchSampler<'_>) -> QecOutput {
    let branch = match sampler {
        BranchSampler::Forced(b) => b,
        BranchSampler::Random(rng) => {
            if rng.gen::<f64>() < model.zeta_q {
                QecBranch::Swap
            } else {
                QecBranch::Erase
            }
        }
    };
    match branch {
        QecBranch::Swap => QecOutput::Swapped(pair.1, pair.0),
        QecBranch::Erase => QecOutput::Erasure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair() -> (QubitState, QubitState) {
        (QubitState::basis(0), QubitState::real(0.6, 0.8).unwrap())
    }

    #[test]
    fn certain_channels() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let one = qec_apply(pair(), &QecModel::new(1.0).unwrap(), BranchSampler::Random(&mut rng));
            assert_eq!(one, QecOutput::Swapped(pair().1, pair().0));
            let zero = qec_apply(pair(), &QecModel::new(0.0).unwrap(), BranchSampler::Random(&mut rng));
            assert_eq!(zero, QecOutput::Erasure);
        }
    }

    #[test]
    fn forced_branches() {
        let m = QecModel::new(0.3).unwrap();
        assert!(matches!(qec_apply(pair(), &m, BranchSampler::Forced(QecBranch::Swap)), QecOutput::Swapped(..)));
        assert_eq!(qec_apply(pair(), &m, BranchSampler::Forced(QecBranch::Erase)), QecOutput::Erasure);
        assert_eq!(m.fidelity(), 0.3);
    }
}
