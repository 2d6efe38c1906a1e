//! Closed-form herald probabilities.
//!
//! The general helpers take branch weights relative to the gate input:
//! `presence` is the weight on which the AO blocks, `absence` the weight on
//! which it is transparent.

use super::params::theta;
use crate::error::{Error, Result};

fn probability(name: &str, v: f64) -> Result<f64> {
    if !(-1e-12..=1.0 + 1e-12).contains(&v) || v.is_nan() {
        return Err(Error::InvalidArgument(format!("{name} = {v} is not a probability")));
    }
    Ok(v.clamp(0.0, 1.0))
}

fn cycles(name: &str, v: u32) -> Result<i32> {
    if v == 0 {
        return Err(Error::InvalidArgument(format!("{name} must be at least 1")));
    }
    i32::try_from(v).map_err(|_| Error::InvalidArgument(format!("{name} = {v} is too large")))
}

fn sin_sq(x: f64) -> f64 {
    let s = x.sin();
    s * s
}

/// QZ chain with quantum AO: `(1 − P sin²θ_N)^N`.
pub fn qz_herald(presence: f64, n: u32) -> Result<f64> {
    let p = probability("presence weight", presence)?;
    let ni = cycles("N", n)?;
    Ok((1.0 - p * sin_sq(theta(n))).powi(ni))
}

/// CQZ chain: `(1 − A sin²θ_M)^M · Π_m [1 − P sin²(mθ_M) sin²θ_N]^N`.
pub fn cqz_herald(absence: f64, presence: f64, m: u32, n: u32) -> Result<f64> {
    let a = probability("absence weight", absence)?;
    let p = probability("presence weight", presence)?;
    let mi = cycles("M", m)?;
    let ni = cycles("N", n)?;
    let (tm, tn) = (theta(m), theta(n));
    let outer = (1.0 - a * sin_sq(tm)).powi(mi);
    let inner: f64 = (1..=m).map(|i| (1.0 - p * sin_sq(i as f64 * tm) * sin_sq(tn)).powi(ni)).product();
    Ok(outer * inner)
}

/// MQZ with redirect: `(1 − P sin²θ_N)^N · (1 − A)`.
pub fn mqz_herald(presence: f64, absence: f64, n: u32) -> Result<f64> {
    let a = probability("absence weight", absence)?;
    Ok(qz_herald(presence, n)? * (1.0 - a))
}

/// `cos^{2M} θ_M`.
pub fn lambda0(m: u32) -> Result<f64> {
    cqz_herald(1.0, 0.0, m, 1)
}

/// `Π_{i=1}^{M} [1 − sin²(iθ_M) sin²θ_N]^N`.
pub fn lambda1(m: u32, n: u32) -> Result<f64> {
    cqz_herald(0.0, 1.0, m, n)
}

/// `(1 − Δ₀ sin²θ_N)^N · Δ₀`.
pub fn mqz_closed_form(delta0: f64, n: u32) -> Result<f64> {
    let d = probability("Δ0", delta0)?;
    mqz_herald(d, 1.0 - d, n)
}

/// `(1 − ½cos²θ_K sin²θ_N)^N · (1 − ½ sin²θ_K)`.
pub fn lambda2(n: u32, k: u32) -> Result<f64> {
    cycles("K", k)?;
    let tk = theta(k);
    mqz_herald(0.5 * (1.0 - sin_sq(tk)), 0.5 * sin_sq(tk), n)
}

/// `(1 − |α|² sin²θ_M)^M · Π_m [1 − |β|² sin²(mθ_M) sin²θ_N]^N`.
pub fn lambda3(alpha_sq: f64, m: u32, n: u32) -> Result<f64> {
    let a = probability("|α|²", alpha_sq)?;
    cqz_herald(a, 1.0 - a, m, n)
}

/// `(1 − Δ₁ cos²θ_K sin²θ_N)^N · (1 − Δ₁ sin²θ_K)`.
pub fn lambda4(delta1: f64, n: u32, k: u32) -> Result<f64> {
    let d = probability("Δ1", delta1)?;
    cycles("K", k)?;
    let tk = theta(k);
    mqz_herald(d * (1.0 - sin_sq(tk)), d * sin_sq(tk), n)
}

/// Duplex transfer efficiency `λ₂^K`.
pub fn zeta_c(n: u32, k: u32) -> Result<f64> {
    Ok(lambda2(n, k)?.powi(cycles("K", k)?))
}

/// `Δ₁ = |αγ|² + |βδ|²`.
pub fn delta1(alpha_sq: f64, gamma_sq: f64) -> Result<f64> {
    let a = probability("|α|²", alpha_sq)?;
    let g = probability("|γ|²", gamma_sq)?;
    Ok(a * g + (1.0 - a) * (1.0 - g))
}

/// Telex transfer efficiency `λ₃ · λ₄^K`.
pub fn zeta_q(alpha_sq: f64, gamma_sq: f64, m: u32, n: u32, k: u32) -> Result<f64> {
    let d1 = delta1(alpha_sq, gamma_sq)?;
    Ok(lambda3(alpha_sq, m, n)? * lambda4(d1, n, k)?.powi(cycles("K", k)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_evaluated_values() {
        assert!((lambda0(2).unwrap() - 0.25).abs() < 1e-12);
        assert!((lambda1(2, 2).unwrap() - 0.140625).abs() < 1e-12);
        assert!((lambda2(1, 1).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(lambda1(1, 1).unwrap(), 0.0);
        for (n, k) in [(1, 1), (7, 3), (100, 10)] {
            assert_eq!(lambda4(0.0, n, k).unwrap(), 1.0);
        }
    }

    #[test]
    fn qz_presence_is_cos_power() {
        assert!((qz_herald(1.0, 2).unwrap() - 0.25).abs() < 1e-12);
        assert!(qz_herald(1.0, 1).unwrap() < 1e-30);
    }

    #[test]
    fn lambda3_reduces_at_basis_states() {
        for (m, n) in [(2, 2), (10, 100), (5, 3)] {
            assert!((lambda3(1.0, m, n).unwrap() - lambda0(m).unwrap()).abs() < 1e-12);
            assert!((lambda3(0.0, m, n).unwrap() - lambda1(m, n).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn mqz_reductions() {
        assert_eq!(mqz_closed_form(0.0, 10).unwrap(), 0.0);
        assert!((mqz_closed_form(1.0, 10).unwrap() - qz_herald(1.0, 10).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(lambda0(0).is_err());
        assert!(lambda3(1.5, 2, 2).is_err());
        assert!(lambda4(-0.1, 2, 2).is_err());
        assert!(mqz_closed_form(f64::NAN, 2).is_err());
    }

    #[test]
    fn large_cycle_counts_approach_one() {
        assert!(lambda0(10_000).unwrap() >= 0.99);
        assert!(lambda2(10_000, 10_000).unwrap() >= 0.99);
        assert!(lambda4(0.5, 10_000, 10_000).unwrap() >= 0.99);
        // The inner-chain product behaves like exp(−π²M/8N): it needs N ≫ M.
        assert!(lambda1(50, 10_000).unwrap() >= 0.99);
        assert!(lambda3(0.5, 300, 100_000).unwrap() >= 0.99);
        assert!(lambda1(10_000, 10_000).unwrap() < 0.3);
    }
}
