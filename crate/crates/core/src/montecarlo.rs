//! Seeded trajectory sampling of the cycle-level loss events.
//!
//! Each trial draws from its own ChaCha8 stream (master seed, stream = trial
//! index), so counts do not depend on scheduling or worker count.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::protocols::{
    duplex_decode_distribution, duplex_heralded, telex_decode, telex_heralded, telex_pre_announcement, Announcement,
    DuplexMessage, TelexMessage,
};
use crate::zeno::{LossEvent, Mode, ZenoParams};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

pub const SUCCESS_CORRECT: &str = "success:correct";
pub const SUCCESS_INCORRECT: &str = "success:incorrect";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProtocolConfig {
    Duplex { message: DuplexMessage, params: ZenoParams },
    Telex { message: TelexMessage, params: ZenoParams },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateEstimate {
    pub rate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialEnsemble {
    pub trials: u64,
    pub seed: u64,
    pub counts: BTreeMap<String, u64>,
    pub empirical_rates: BTreeMap<String, RateEstimate>,
    /// Cycle-exact herald the trials sample from.
    pub expected_herald: f64,
}

impl TrialEnsemble {
    pub fn count(&self, tag: &str) -> u64 {
        self.counts.get(tag).copied().unwrap_or(0)
    }

    pub fn successes(&self) -> u64 {
        self.count(SUCCESS_CORRECT) + self.count(SUCCESS_INCORRECT)
    }

    pub fn success_rate(&self) -> f64 {
        self.successes() as f64 / self.trials as f64
    }

    /// Erasures booked at the given stage, any cause.
    pub fn erasures_at(&self, stage: &str) -> u64 {
        let prefix = format!("erasure:{stage}:");
        self.counts.iter().filter(|(t, _)| t.starts_with(&prefix)).map(|(_, c)| c).sum()
    }

    /// Normal-approximation z-score of the success rate against the expected herald.
    pub fn z_score(&self) -> f64 {
        let p = self.expected_herald;
        let sd = (p * (1.0 - p) / self.trials as f64).sqrt();
        let diff = self.success_rate() - p;
        if sd == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / sd
        }
    }

    /// Fails with the z-score when the success rate is more than `sigmas` off.
    pub fn check_consistency(&self, sigmas: f64) -> Result<f64> {
        let z = self.z_score();
        if z.abs() > sigmas {
            return Err(Error::InvalidArgument(format!(
                "empirical herald {} deviates from {} by z = {z:.3}",
                self.success_rate(),
                self.expected_herald
            )));
        }
        Ok(z)
    }
}

/// Wilson score interval for `k` successes out of `n`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Precomputed per-run quantities shared by every trial.
struct Plan {
    tags: Vec<String>,
    /// (conditional probability, tag index) per loss event, in order.
    events: Vec<(f64, usize)>,
    /// Cumulative distribution over decode outcomes, with correctness.
    decode: Vec<(f64, bool)>,
    herald: f64,
}

fn plan(config: &ProtocolConfig) -> Result<Plan> {
    let (heralded, decode) = match config {
        ProtocolConfig::Duplex { message, params } => {
            let h = duplex_heralded(*message, params, Mode::Cycle)?;
            let mut decode = Vec::new();
            if h.herald_probability > 0.0 {
                let dist = duplex_decode_distribution(&h.state)?;
                for b1 in 0..2u8 {
                    for b2 in 0..2u8 {
                        decode.push((dist[b1 as usize][b2 as usize], (b1, b2) == (message.b1, message.b2)));
                    }
                }
            }
            (h, decode)
        }
        ProtocolConfig::Telex { message, params } => {
            let h = telex_heralded(message, params, Mode::Cycle)?;
            let mut decode = Vec::new();
            if h.herald_probability > 0.0 {
                let psi4 = telex_pre_announcement(&h.state)?;
                for mu in 0..2u8 {
                    match telex_decode(&psi4, Announcement::Forced(mu)) {
                        Ok(d) => {
                            let fa = d.alice.fidelity(&message.eta2) * d.purities.0;
                            let fb = d.bob.fidelity(&message.eta1) * d.purities.1;
                            decode.push((d.probability, fa >= 1.0 - 1e-9 && fb >= 1.0 - 1e-9));
                        }
                        Err(Error::ImpossibleOutcome { .. }) => decode.push((0.0, false)),
                        Err(e) => return Err(e),
                    }
                }
            }
            (h, decode)
        }
    };
    let mut tags = vec![SUCCESS_CORRECT.to_string(), SUCCESS_INCORRECT.to_string()];
    let events = heralded
        .events
        .iter()
        .map(|e: &LossEvent| {
            let tag = format!("erasure:{}:{}", e.stage, e.cause);
            let idx = tags.iter().position(|t| *t == tag).unwrap_or_else(|| {
                tags.push(tag);
                tags.len() - 1
            });
            (e.probability, idx)
        })
        .collect();
    let mut acc = 0.0;
    let decode = decode
        .into_iter()
        .map(|(p, ok)| {
            acc += p;
            (acc, ok)
        })
        .collect();
    Ok(Plan { tags, events, decode, herald: heralded.herald_probability })
}

fn run_trial(plan: &Plan, seed: u64, trial: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    for &(p, tag) in &plan.events {
        if rng.gen::<f64>() < p {
            return tag;
        }
    }
    let u: f64 = rng.gen();
    let ok = plan.decode.iter().find(|(cum, _)| u < *cum).or(plan.decode.last()).map(|&(_, ok)| ok).unwrap_or(false);
    if ok {
        0
    } else {
        1
    }
}

/// Samples `trials` runs using every available core.
pub fn sample_protocol(config: &ProtocolConfig, trials: u64, seed: u64) -> Result<TrialEnsemble> {
    sample_protocol_with_workers(config, trials, seed, 0)
}

/// As [`sample_protocol`], on a pool of `workers` threads (0 = default).
pub fn sample_protocol_with_workers(
    config: &ProtocolConfig,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<TrialEnsemble> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let plan = plan(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let ntags = plan.tags.len();
    let tallies = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .fold(
                || vec![0u64; ntags],
                |mut acc, t| {
                    acc[run_trial(&plan, seed, t)] += 1;
                    acc
                },
            )
            .reduce(
                || vec![0u64; ntags],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
    });
    let mut counts = BTreeMap::new();
    let mut empirical_rates = BTreeMap::new();
    for (tag, &count) in plan.tags.iter().zip(&tallies) {
        let (lo, hi) = wilson_interval(count, trials, Z95);
        counts.insert(tag.clone(), count);
        empirical_rates
            .insert(tag.clone(), RateEstimate { rate: count as f64 / trials as f64, wilson_low: lo, wilson_high: hi });
    }
    Ok(TrialEnsemble { trials, seed, counts, empirical_rates, expected_herald: plan.herald })
}
