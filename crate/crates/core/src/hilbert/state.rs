use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::unitary::LocalUnitary;
use crate::error::{Error, Result};

/// Tolerance for every norm and unitarity check.
pub const TOLERANCE: f64 = 1e-12;

/// One factor of a composite system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsystemSpec {
    pub label: String,
    pub dimension: usize,
}

impl SubsystemSpec {
    pub fn new(label: impl Into<String>, dimension: usize) -> Result<Self> {
        let label = label.into();
        if dimension < 2 {
            return Err(Error::InvalidDimension { label, dimension });
        }
        Ok(Self { label, dimension })
    }

    pub fn qubit(label: impl Into<String>) -> Self {
        Self { label: label.into(), dimension: 2 }
    }
}

/// Where removed probability went.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossCause {
    AbsorbedByAo,
    DiscardedAtDetector,
    RedirectedNoncounterfactual,
}

impl LossCause {
    pub const ALL: [LossCause; 3] =
        [LossCause::AbsorbedByAo, LossCause::DiscardedAtDetector, LossCause::RedirectedNoncounterfactual];

    pub fn tag(self) -> &'static str {
        match self {
            LossCause::AbsorbedByAo => "absorbed-by-ao",
            LossCause::DiscardedAtDetector => "discarded-at-detector",
            LossCause::RedirectedNoncounterfactual => "redirected-noncounterfactual",
        }
    }

    fn slot(self) -> usize {
        match self {
            LossCause::AbsorbedByAo => 0,
            LossCause::DiscardedAtDetector => 1,
            LossCause::RedirectedNoncounterfactual => 2,
        }
    }
}

impl fmt::Display for LossCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Accumulated lost probability per cause.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LossLedger([f64; 3]);

impl LossLedger {
    pub fn get(&self, cause: LossCause) -> f64 {
        self.0[cause.slot()]
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&v| v == 0.0)
    }

    pub(crate) fn add(&mut self, cause: LossCause, amount: f64) {
        let slot = &mut self.0[cause.slot()];
        *slot = (*slot + amount.max(0.0)).min(1.0);
    }

    /// Entry-wise `self − earlier`.
    pub fn since(&self, earlier: &LossLedger) -> LossLedger {
        let mut out = [0.0; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (self.0[i] - earlier.0[i]).max(0.0);
        }
        LossLedger(out)
    }

    pub fn iter(&self) -> impl Iterator<Item = (LossCause, f64)> + '_ {
        LossCause::ALL.into_iter().map(move |c| (c, self.get(c)))
    }

    /// Cause with the largest share, if anything was lost.
    pub fn dominant(&self) -> Option<LossCause> {
        self.iter().filter(|(_, v)| *v > 0.0).max_by(|a, b| a.1.total_cmp(&b.1)).map(|(c, _)| c)
    }
}

/// Measurement basis for [`StateVector::measure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Computational,
    /// `{|+>, |->}` for a qubit; outcome 0 is `|+>`.
    Hadamard,
}

/// How a measurement picks its outcome.
pub enum Sampler<'a> {
    Forced(usize),
    Random(&'a mut dyn rand::RngCore),
}

#[derive(Debug, Clone)]
pub struct Measurement {
    pub outcome: usize,
    pub probability: f64,
    pub post_state: StateVector,
}

/// Sub-normalized amplitudes over a labeled composite, plus a loss ledger.
///
/// Basis index order is row-major: the first subsystem is the most
/// significant digit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    subsystems: Vec<SubsystemSpec>,
    amplitudes: Vec<Complex64>,
    ledger: LossLedger,
}

impl StateVector {
    /// Builds a normalized state; amplitudes must have unit norm within 1e-9
    /// and are rescaled to exactly unit norm.
    pub fn new(subsystems: Vec<SubsystemSpec>, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_labels(&subsystems)?;
        let dim: usize = subsystems.iter().map(|s| s.dimension).product();
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: amplitudes.len() });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let scale = norm_sqr.sqrt().recip();
        Ok(Self {
            subsystems,
            amplitudes: amplitudes.into_iter().map(|a| a * scale).collect(),
            ledger: LossLedger::default(),
        })
    }

    /// Computational basis state with the given digit per subsystem.
    pub fn basis(subsystems: Vec<SubsystemSpec>, digits: &[usize]) -> Result<Self> {
        check_labels(&subsystems)?;
        if digits.len() != subsystems.len() {
            return Err(Error::DimensionMismatch { expected: subsystems.len(), actual: digits.len() });
        }
        let mut index = 0;
        for (spec, &d) in subsystems.iter().zip(digits) {
            if d >= spec.dimension {
                return Err(Error::InvalidArgument(format!("level {d} out of range for `{}`", spec.label)));
            }
            index = index * spec.dimension + d;
        }
        let dim: usize = subsystems.iter().map(|s| s.dimension).product();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { subsystems, amplitudes, ledger: LossLedger::default() })
    }

    /// Single qubit `a|0> + b|1>`.
    pub fn qubit(label: impl Into<String>, a: Complex64, b: Complex64) -> Result<Self> {
        Self::new(vec![SubsystemSpec::qubit(label)], vec![a, b])
    }

    pub fn subsystems(&self) -> &[SubsystemSpec] {
        &self.subsystems
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn ledger(&self) -> &LossLedger {
        &self.ledger
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `‖ψ‖² + Σ ledger`; stays at 1 under every operation.
    pub fn total_probability(&self) -> f64 {
        self.norm_sqr() + self.ledger.total()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.subsystems.iter().position(|s| s.label == label).ok_or_else(|| Error::UnknownSubsystem(label.to_string()))
    }

    pub fn dimension_of(&self, label: &str) -> Result<usize> {
        Ok(self.subsystems[self.position(label)?].dimension)
    }

    /// Index stride of the subsystem at `position`.
    pub fn stride(&self, position: usize) -> usize {
        self.subsystems[position + 1..].iter().map(|s| s.dimension).product()
    }

    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.subsystems.len()];
        for (slot, spec) in out.iter_mut().zip(&self.subsystems).rev() {
            *slot = index % spec.dimension;
            index /= spec.dimension;
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.subsystems).fold(0, |acc, (&d, s)| acc * s.dimension + d)
    }

    pub fn amplitude(&self, digits: &[usize]) -> Complex64 {
        self.amplitudes[self.index(digits)]
    }

    /// Kronecker product; `self`'s subsystems come first.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        if !self.ledger.is_empty() || !other.ledger.is_empty() {
            return Err(Error::NonEmptyLedger);
        }
        let mut subsystems = self.subsystems.clone();
        subsystems.extend(other.subsystems.iter().cloned());
        check_labels(&subsystems)?;
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(Self { subsystems, amplitudes, ledger: LossLedger::default() })
    }

    pub fn apply_unitary(&self, u: &LocalUnitary) -> Result<StateVector> {
        let positions = u.targets().iter().map(|t| self.position(t)).collect::<Result<Vec<_>>>()?;
        let target_dim: usize = positions.iter().map(|&p| self.subsystems[p].dimension).product();
        if target_dim != u.matrix().dim() {
            return Err(Error::DimensionMismatch { expected: target_dim, actual: u.matrix().dim() });
        }
        let strides: Vec<usize> = positions.iter().map(|&p| self.stride(p)).collect();
        let dims: Vec<usize> = positions.iter().map(|&p| self.subsystems[p].dimension).collect();
        // offsets[t] = flat offset of target sub-index t
        let offsets: Vec<usize> = (0..target_dim)
            .map(|mut t| {
                let mut off = 0;
                for k in (0..dims.len()).rev() {
                    off += (t % dims[k]) * strides[k];
                    t /= dims[k];
                }
                off
            })
            .collect();
        let mut out = self.clone();
        let mut buf = vec![Complex64::new(0.0, 0.0); target_dim];
        for base in 0..self.dim() {
            let d = self.digits(base);
            if positions.iter().any(|&p| d[p] != 0) {
                continue;
            }
            for (slot, off) in buf.iter_mut().zip(&offsets) {
                *slot = self.amplitudes[base + off];
            }
            let mapped = u.matrix().apply(&buf);
            for (v, off) in mapped.into_iter().zip(&offsets) {
                out.amplitudes[base + off] = v;
            }
        }
        Ok(out)
    }

    /// Zeroes every basis amplitude whose digits satisfy `predicate` and books
    /// the removed probability under `cause`.
    pub fn absorb(&self, predicate: impl Fn(&[usize]) -> bool, cause: LossCause) -> StateVector {
        let mut out = self.clone();
        let mut removed = 0.0;
        for i in 0..self.dim() {
            if predicate(&self.digits(i)) {
                removed += out.amplitudes[i].norm_sqr();
                out.amplitudes[i] = Complex64::new(0.0, 0.0);
            }
        }
        out.ledger.add(cause, removed);
        out
    }

    /// Outcome probabilities of measuring `label` (conditional on the current norm).
    pub fn outcome_probabilities(&self, label: &str, basis: Basis) -> Result<Vec<f64>> {
        let rotated = self.rotate_into(label, basis)?;
        let pos = rotated.position(label)?;
        let norm = rotated.norm_sqr();
        if norm <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let mut probs = vec![0.0; rotated.subsystems[pos].dimension];
        for (i, a) in rotated.amplitudes.iter().enumerate() {
            probs[rotated.digits(i)[pos]] += a.norm_sqr();
        }
        Ok(probs.into_iter().map(|p| p / norm).collect())
    }

    /// Projective measurement of one subsystem. The post-state keeps the
    /// pre-measurement norm, so the ledger invariant is untouched. In the
    /// Hadamard basis the post-state is left in the rotated frame
    /// (outcome 0 ↦ `|0>` meaning `|+>`).
    pub fn measure(&self, label: &str, basis: Basis, sampler: Sampler<'_>) -> Result<Measurement> {
        let probs = self.outcome_probabilities(label, basis)?;
        let outcome = match sampler {
            Sampler::Forced(k) => {
                if k >= probs.len() {
                    return Err(Error::InvalidArgument(format!("outcome {k} out of range")));
                }
                k
            }
            Sampler::Random(rng) => {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                let mut pick = probs.len() - 1;
                for (k, p) in probs.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        pick = k;
                        break;
                    }
                }
                pick
            }
        };
        let probability = probs[outcome];
        if probability <= 0.0 {
            return Err(Error::ImpossibleOutcome { outcome });
        }
        let mut post = self.rotate_into(label, basis)?;
        let pos = post.position(label)?;
        let keep = self.norm_sqr();
        for i in 0..post.dim() {
            if post.digits(i)[pos] != outcome {
                post.amplitudes[i] = Complex64::new(0.0, 0.0);
            }
        }
        post.rescale_to(keep);
        Ok(Measurement { outcome, probability, post_state: post })
    }

    fn rotate_into(&self, label: &str, basis: Basis) -> Result<StateVector> {
        match basis {
            Basis::Computational => {
                self.position(label)?;
                Ok(self.clone())
            }
            Basis::Hadamard => {
                if self.dimension_of(label)? != 2 {
                    return Err(Error::InvalidArgument(format!(
                        "hadamard-basis measurement needs a qubit, `{label}` is not"
                    )));
                }
                self.apply_unitary(&LocalUnitary::hadamard(label))
            }
        }
    }

    /// Reorders subsystems to the given label order.
    pub fn permute(&self, order: &[&str]) -> Result<StateVector> {
        if order.len() != self.subsystems.len() {
            return Err(Error::DimensionMismatch { expected: self.subsystems.len(), actual: order.len() });
        }
        let positions = order.iter().map(|l| self.position(l)).collect::<Result<Vec<_>>>()?;
        let subsystems: Vec<SubsystemSpec> = positions.iter().map(|&p| self.subsystems[p].clone()).collect();
        check_labels(&subsystems)?;
        let mut out =
            StateVector { subsystems, amplitudes: vec![Complex64::new(0.0, 0.0); self.dim()], ledger: self.ledger };
        for i in 0..self.dim() {
            let d = self.digits(i);
            let nd: Vec<usize> = positions.iter().map(|&p| d[p]).collect();
            let j = out.index(&nd);
            out.amplitudes[j] = self.amplitudes[i];
        }
        Ok(out)
    }

    /// `<self|other>` over identical layouts.
    pub fn overlap(&self, other: &StateVector) -> Result<Complex64> {
        if self.subsystems != other.subsystems {
            return Err(Error::InvalidArgument("overlap needs identical layouts".into()));
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<a|b>|² / (‖a‖²‖b‖²)`: phase-insensitive, norm-insensitive.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        let na = self.norm_sqr();
        let nb = other.norm_sqr();
        if na <= 0.0 || nb <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.overlap(other)?.norm_sqr() / (na * nb))
    }

    /// Pure state of one subsystem, if the composite factorises across it.
    /// Returns the normalized factor and its purity.
    pub fn factor(&self, label: &str) -> Result<(Vec<Complex64>, f64)> {
        let pos = self.position(label)?;
        let d = self.subsystems[pos].dimension;
        let norm = self.norm_sqr();
        if norm <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let stride = self.stride(pos);
        let mut rho = vec![Complex64::new(0.0, 0.0); d * d];
        for base in 0..self.dim() {
            if self.digits(base)[pos] != 0 {
                continue;
            }
            for r in 0..d {
                for c in 0..d {
                    rho[r * d + c] += self.amplitudes[base + r * stride] * self.amplitudes[base + c * stride].conj();
                }
            }
        }
        for v in rho.iter_mut() {
            *v /= norm;
        }
        let purity: f64 =
            (0..d).flat_map(|r| (0..d).map(move |c| (r, c))).map(|(r, c)| (rho[r * d + c] * rho[c * d + r]).re).sum();
        let j = (0..d).max_by(|&a, &b| rho[a * d + a].re.total_cmp(&rho[b * d + b].re)).unwrap();
        let scale = rho[j * d + j].re.sqrt();
        let vec = (0..d).map(|r| rho[r * d + j] / scale).collect();
        Ok((vec, purity))
    }

    /// Rescales amplitudes so that `‖ψ‖² = target`.
    pub(crate) fn rescale_to(&mut self, target: f64) {
        let current = self.norm_sqr();
        if current > 0.0 {
            let s = (target.max(0.0) / current).sqrt();
            for a in &mut self.amplitudes {
                *a *= s;
            }
        }
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub(crate) fn record_loss(&mut self, cause: LossCause, amount: f64) {
        self.ledger.add(cause, amount);
    }
}

fn check_labels(subsystems: &[SubsystemSpec]) -> Result<()> {
    for (i, s) in subsystems.iter().enumerate() {
        if s.dimension < 2 {
            return Err(Error::InvalidDimension { label: s.label.clone(), dimension: s.dimension });
        }
        if subsystems[..i].iter().any(|o| o.label == s.label) {
            return Err(Error::DuplicateLabel(s.label.clone()));
        }
    }
    Ok(())
}
