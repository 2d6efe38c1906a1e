use std::f64::consts::LN_2;

use serde::Serialize;

use crate::error::{Error, Result};

/// Binary erasure channel whose two inputs survive with different probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymmetricBec {
    /// Herald probability of input 0.
    pub lambda0: f64,
    /// Herald probability of input 1.
    pub lambda1: f64,
}

impl AsymmetricBec {
    pub fn new(lambda0: f64, lambda1: f64) -> Result<Self> {
        for (name, v) in [("λ0", lambda0), ("λ1", lambda1)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidArgument(format!("{name} = {v} is not a probability")));
            }
        }
        Ok(Self { lambda0, lambda1 })
    }

    /// Erasure probability `q = (1−p)(1−λ₀) + p(1−λ₁)`.
    pub fn erasure_probability(&self, p: f64) -> f64 {
        (1.0 - p) * (1.0 - self.lambda0) + p * (1.0 - self.lambda1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct GridPoint {
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub k: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CapacityResult {
    pub capacity: f64,
    pub p_star: Option<f64>,
    pub parameters: GridPoint,
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Binary entropy in bits, with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    -xlog2x(p) - xlog2x(1.0 - p)
}

/// `I(A;B) = h(p) − q·h(p(1−λ₁)/q)` in bits.
pub fn bec_mutual_information(p: f64, ch: &AsymmetricBec) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let q = ch.erasure_probability(p);
    let inner = if q > 0.0 { q * binary_entropy((p * (1.0 - ch.lambda1) / q).clamp(0.0, 1.0)) } else { 0.0 };
    (binary_entropy(p) - inner).max(0.0)
}

fn xlog(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * y.ln()
    }
}

/// `∂I/∂p` in bits, for `p ∈ (0, 1)`.
pub fn bec_mutual_information_derivative(p: f64, ch: &AsymmetricBec) -> f64 {
    let a = 1.0 - ch.lambda0;
    let b = 1.0 - ch.lambda1;
    let q = ch.erasure_probability(p);
    let mut d = ((1.0 - p) / p).ln();
    if q > 0.0 {
        d += xlog(b, p * b / q) - xlog(a, (1.0 - p) * a / q);
    }
    d / LN_2
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximizes a unimodal function on `[lo, hi]`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Capacity and capacity-achieving input distribution `p★ = P(input 1)`.
///
/// Golden-section search brackets the maximum to 1e-10; the stationary point
/// is then polished by bisection on the analytic derivative.
pub fn bec_capacity(ch: &AsymmetricBec) -> CapacityResult {
    let f = |p: f64| bec_mutual_information(p, ch);
    let p_gs = golden_section_max(f, 0.0, 1.0, 1e-10);
    let df = |p: f64| bec_mutual_information_derivative(p, ch);
    let (eps_lo, eps_hi) = (1e-300, 1.0 - f64::EPSILON);
    let p_star = if df(eps_hi) >= 0.0 {
        1.0
    } else if df(eps_lo) <= 0.0 {
        0.0
    } else {
        let (mut lo, mut hi) = ((p_gs - 1e-6).max(eps_lo), (p_gs + 1e-6).min(eps_hi));
        if df(lo) < 0.0 {
            lo = eps_lo;
        }
        if df(hi) > 0.0 {
            hi = eps_hi;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if df(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * mid {
                break;
            }
        }
        0.5 * (lo + hi)
    };
    let (p_star, capacity) = if f(p_star) >= f(p_gs) { (p_star, f(p_star)) } else { (p_gs, f(p_gs)) };
    CapacityResult { capacity, p_star: Some(p_star), parameters: GridPoint::default() }
}

/// Largest second difference `I(p−h) − 2I(p) + I(p+h)` over a grid of step `h`;
/// non-positive (up to rounding) when `I` is concave.
pub fn max_second_difference(ch: &AsymmetricBec, h: f64) -> f64 {
    let steps = (1.0 / h).round() as usize;
    (1..steps)
        .map(|i| {
            let p = i as f64 * h;
            bec_mutual_information(p - h, ch) - 2.0 * bec_mutual_information(p, ch) + bec_mutual_information(p + h, ch)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}
