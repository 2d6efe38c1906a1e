//! Reference values, compared against formula-exact evaluation.

use serde::Serialize;

use super::bec::{bec_capacity, AsymmetricBec};
use super::capacity::{optimize_duplex_k, optimize_telex, MessageWeights, Strategy};
use crate::error::Result;
use crate::zeno::{lambda0, lambda1, zeta_q};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// `|formula − reference| ≤ tolerance`.
    Within,
    /// `formula ≥ reference − tolerance`.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceCheck {
    pub id: &'static str,
    pub quantity: &'static str,
    pub formula_value: f64,
    pub reference_value: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub within: bool,
}

impl ReferenceCheck {
    pub fn new(id: &'static str, quantity: &'static str, formula: f64, reference: f64, tolerance: f64) -> Self {
        let abs_diff = (formula - reference).abs();
        Self {
            id,
            quantity,
            formula_value: formula,
            reference_value: reference,
            abs_diff,
            tolerance,
            comparison: Comparison::Within,
            within: abs_diff <= tolerance,
        }
    }

    pub fn at_least(id: &'static str, quantity: &'static str, formula: f64, reference: f64) -> Self {
        Self {
            id,
            quantity,
            formula_value: formula,
            reference_value: reference,
            abs_diff: (formula - reference).abs(),
            tolerance: 0.0,
            comparison: Comparison::AtLeast,
            within: formula >= reference,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub checks: Vec<ReferenceCheck>,
}

impl DiscrepancyReport {
    pub fn misses(&self) -> impl Iterator<Item = &ReferenceCheck> {
        self.checks.iter().filter(|c| !c.within)
    }

    pub fn get(&self, id: &str, quantity: &str) -> Option<&ReferenceCheck> {
        self.checks.iter().find(|c| c.id == id && c.quantity == quantity)
    }
}

/// CQZ channel at `M = 2` and the given `N`.
pub fn cqz_bec_checks(id: &'static str, n: u32, c_ref: f64, p_ref: f64) -> Result<Vec<ReferenceCheck>> {
    let r = bec_capacity(&AsymmetricBec::new(lambda0(2)?, lambda1(2, n)?)?);
    Ok(vec![
        ReferenceCheck::new(id, "capacity", r.capacity, c_ref, 0.05),
        ReferenceCheck::new(id, "p_star", r.p_star.unwrap_or(f64::NAN), p_ref, 0.05),
    ])
}

/// Largest duplex capacity over `N ≤ n_max` with optimal `K`.
pub fn best_duplex_capacity(n_max: u32) -> Result<(u32, u32, f64)> {
    let mut best = (1, 1, f64::NEG_INFINITY);
    for n in 1..=n_max {
        let (k, r) = optimize_duplex_k(n)?;
        if r.capacity > best.2 {
            best = (n, k, r.capacity);
        }
    }
    Ok(best)
}

/// Every reference target with its formula-exact counterpart.
pub fn discrepancy_report() -> Result<DiscrepancyReport> {
    let mut checks = Vec::new();
    checks.push(ReferenceCheck::new("telex-zeta-n100-half", "zeta_q", zeta_q(0.5, 0.5, 10, 100, 10)?, 0.659, 0.02));
    checks.push(ReferenceCheck::new(
        "telex-zeta-n100-classical",
        "zeta_q",
        zeta_q(0.0, 1.0, 10, 100, 10)?,
        0.903,
        0.05,
    ));
    let opt = optimize_telex(218, MessageWeights::new(0.5, 0.5)?, Strategy::Separable)?;
    checks.push(ReferenceCheck::new("telex-opt-n218", "m_star", opt.m_star as f64, 21.0, 2.0));
    checks.push(ReferenceCheck::new("telex-opt-n218", "k_star", opt.k_star as f64, 15.0, 2.0));
    checks.push(ReferenceCheck::new("telex-opt-n218", "q", opt.q, 1.0, 0.05));
    let opt = optimize_telex(100, MessageWeights::new(0.5, 0.5)?, Strategy::Separable)?;
    checks.push(ReferenceCheck::new("telex-opt-n100", "m_star", opt.m_star as f64, 10.0, 2.0));
    checks.push(ReferenceCheck::new("telex-opt-n100", "k_star", opt.k_star as f64, 10.0, 2.0));
    checks.extend(cqz_bec_checks("cqz-bec-m2-n2", 2, 0.1515, 0.606)?);
    checks.extend(cqz_bec_checks("cqz-bec-m2-n81", 81, 0.8, 0.466)?);
    let (_, _, c) = best_duplex_capacity(512)?;
    checks.push(ReferenceCheck::at_least("duplex-best-n512", "capacity", c, 1.8));
    Ok(DiscrepancyReport { checks })
}
