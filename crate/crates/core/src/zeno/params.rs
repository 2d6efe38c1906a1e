use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cycle counts: inner `n`, outer `m` and protocol-level gate count `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZenoParams {
    pub n: u32,
    pub m: u32,
    pub k: u32,
}

impl ZenoParams {
    pub fn new(n: u32, m: u32, k: u32) -> Result<Self> {
        for (name, v) in [("N", n), ("M", m), ("K", k)] {
            if v == 0 {
                return Err(Error::InvalidArgument(format!("{name} must be at least 1")));
            }
        }
        Ok(Self { n, m, k })
    }

    pub fn theta_n(&self) -> f64 {
        theta(self.n)
    }

    pub fn theta_m(&self) -> f64 {
        theta(self.m)
    }

    pub fn theta_k(&self) -> f64 {
        theta(self.k)
    }
}

/// `π / (2x)`.
pub fn theta(cycles: u32) -> f64 {
    FRAC_PI_2 / cycles as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_counts() {
        assert!(ZenoParams::new(0, 1, 1).is_err());
        assert!(ZenoParams::new(1, 1, 0).is_err());
    }

    #[test]
    fn single_cycle_angle_is_right_angle() {
        assert_eq!(ZenoParams::new(1, 1, 1).unwrap().theta_n(), FRAC_PI_2);
    }
}
