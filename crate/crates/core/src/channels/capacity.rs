use serde::{Deserialize, Serialize};

use super::bec::{CapacityResult, GridPoint};
use crate::error::{Error, Result};
use crate::protocols::TelexMessage;
use crate::zeno::{delta1, lambda3, lambda4, zeta_c, zeta_q};

/// Default search ceiling for integer optimizers: `[1, 4N]`.
pub fn default_ceiling(n: u32) -> u32 {
    n.saturating_mul(4).max(1)
}

/// `C = 2ζ_c = 2λ₂^K` bits per Bell pair.
pub fn duplex_capacity(n: u32, k: u32) -> Result<CapacityResult> {
    Ok(CapacityResult {
        capacity: 2.0 * zeta_c(n, k)?,
        p_star: None,
        parameters: GridPoint { n: Some(n), m: None, k: Some(k) },
    })
}

/// One party's rate, `ζ_c`.
pub fn duplex_unidirectional_rate(n: u32, k: u32) -> Result<f64> {
    zeta_c(n, k)
}

/// Best `K` for fixed `N`: upward scan with early exit on the first decrease.
pub fn optimize_duplex_k(n: u32) -> Result<(u32, CapacityResult)> {
    optimize_duplex_k_with(n, default_ceiling(n))
}

pub fn optimize_duplex_k_with(n: u32, ceiling: u32) -> Result<(u32, CapacityResult)> {
    let mut best = (1, zeta_c(n, 1)?);
    let mut prev = best.1;
    for k in 2..=ceiling {
        let z = zeta_c(n, k)?;
        if z > best.1 {
            best = (k, z);
        } else if z < prev {
            break;
        }
        prev = z;
    }
    Ok((best.0, duplex_capacity(n, best.0)?))
}

/// Exhaustive argmax of `ζ_c` over `K ∈ [1, ceiling]`; ties go to the smaller `K`.
pub fn exhaustive_duplex_k(n: u32, ceiling: u32) -> Result<u32> {
    let mut best = (1, f64::NEG_INFINITY);
    for k in 1..=ceiling.max(1) {
        let z = zeta_c(n, k)?;
        if z > best.1 {
            best = (k, z);
        }
    }
    Ok(best.0)
}

/// Message weights that fix the telex efficiency: `|α|²` and `|γ|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MessageWeights {
    pub alpha_sq: f64,
    pub gamma_sq: f64,
}

impl MessageWeights {
    pub fn new(alpha_sq: f64, gamma_sq: f64) -> Result<Self> {
        delta1(alpha_sq, gamma_sq)?;
        Ok(Self { alpha_sq, gamma_sq })
    }

    pub fn of(m: &TelexMessage) -> Self {
        Self { alpha_sq: m.eta1.weight0(), gamma_sq: m.eta2.weight0() }
    }

    pub fn delta1(&self) -> f64 {
        delta1(self.alpha_sq, self.gamma_sq).expect("validated")
    }
}

/// `ζ_q = λ₃ λ₄^K`.
pub fn telex_efficiency(m: &TelexMessage, mm: u32, n: u32, k: u32) -> Result<f64> {
    let w = MessageWeights::of(m);
    zeta_q(w.alpha_sq, w.gamma_sq, mm, n, k)
}

/// `Q = 2·max(0, 2ζ_q − 1)` qubits per electron-photon pair.
pub fn telex_capacity(zeta_q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&zeta_q) {
        return Err(Error::InvalidArgument(format!("ζ_q = {zeta_q} is not a probability")));
    }
    Ok(2.0 * (2.0 * zeta_q - 1.0).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// `M★ = argmax λ₃`, `K★ = argmax λ₄^K` independently.
    Separable,
    /// Full 2-D scan of `λ₃ λ₄^K`.
    Joint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TelexOptimum {
    pub n: u32,
    pub m_star: u32,
    pub k_star: u32,
    pub zeta_q: f64,
    pub q: f64,
}

fn argmax(values: impl Iterator<Item = (u32, f64)>) -> (u32, f64) {
    values.fold((1, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best })
}

pub fn optimize_telex(n: u32, w: MessageWeights, strategy: Strategy) -> Result<TelexOptimum> {
    optimize_telex_with(n, w, strategy, default_ceiling(n))
}

pub fn optimize_telex_with(n: u32, w: MessageWeights, strategy: Strategy, ceiling: u32) -> Result<TelexOptimum> {
    let ceiling = ceiling.max(1);
    let d1 = w.delta1();
    let l3 = (1..=ceiling).map(|m| Ok((m, lambda3(w.alpha_sq, m, n)?))).collect::<Result<Vec<_>>>()?;
    let l4k = (1..=ceiling).map(|k| Ok((k, lambda4(d1, n, k)?.powi(k as i32)))).collect::<Result<Vec<_>>>()?;
    let (m_star, k_star, z) = match strategy {
        Strategy::Separable => {
            let (m, a) = argmax(l3.iter().copied());
            let (k, b) = argmax(l4k.iter().copied());
            (m, k, a * b)
        }
        Strategy::Joint => {
            let mut best = (1, 1, f64::NEG_INFINITY);
            for &(m, a) in &l3 {
                for &(k, b) in &l4k {
                    if a * b > best.2 {
                        best = (m, k, a * b);
                    }
                }
            }
            best
        }
    };
    Ok(TelexOptimum { n, m_star, k_star, zeta_q: z, q: telex_capacity(z.clamp(0.0, 1.0))? })
}
