//! Cycle-level propagation shared by all Zeno-type gates.
//!
//! Two propagation rules are available. `Coherent` pushes amplitudes through
//! every rotation and removes what is absorbed, never renormalizing. `Zeno`
//! treats each loss as a measurement: conditional on survival, the branch
//! that could have lost amplitude keeps its pre-cycle state (the Zeno
//! projection), and the whole state is rescaled so its norm drops by exactly
//! the lost probability. `Zeno` reproduces the closed-form heralds and ideal
//! conditional states; `Coherent` is kept as a diagnostic.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::hilbert::{LossCause, LossLedger, StateVector};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Propagation {
    Zeno,
    Coherent,
}

/// One possible loss during a run, with its probability conditional on
/// having survived every earlier event.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LossEvent {
    pub stage: String,
    pub cycle: u32,
    pub cause: LossCause,
    pub probability: f64,
}

/// A rail resolved against a concrete layout: the `(pass, flip)` index pairs
/// it owns, each tagged with whether the AO blocks on that pair.
#[derive(Debug, Clone)]
pub(crate) struct ResolvedRail {
    pub pairs: Vec<Pair>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Pair {
    pub pass: usize,
    pub flip: usize,
    pub present: bool,
}

pub(crate) struct Engine {
    pub amps: Vec<Complex64>,
    /// CQZ inner chain per flip index: (pass-through, rotated).
    inner: Vec<(Complex64, Complex64)>,
    pub ledger: LossLedger,
    pub events: Vec<LossEvent>,
    /// Probability mass in the output that travelled through the channel and
    /// came back (non-counterfactual residue).
    pub channel_residue: f64,
    propagation: Propagation,
    stage: String,
    /// Index of each amplitude's component (all digits except electron and
    /// polarization).
    component: Vec<usize>,
}

impl Engine {
    pub fn new(state: &StateVector, propagation: Propagation, stage: &str, component: Vec<usize>) -> Self {
        Self {
            amps: state.amplitudes().to_vec(),
            inner: vec![(ZERO, ZERO); state.dim()],
            ledger: LossLedger::default(),
            events: Vec::new(),
            channel_residue: 0.0,
            propagation,
            stage: stage.to_string(),
            component,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        let main: f64 = self.amps.iter().map(|a| a.norm_sqr()).sum();
        let inner: f64 = self.inner.iter().map(|(x, y)| x.norm_sqr() + y.norm_sqr()).sum();
        main + inner
    }

    fn scale(&mut self, s: f64) {
        for a in &mut self.amps {
            *a *= s;
        }
        for (x, y) in &mut self.inner {
            *x *= s;
            *y *= s;
        }
    }

    /// Books `loss` (absolute) against a pre-event norm `pre`; under Zeno
    /// propagation rescales to `pre − loss`. Returns the factor applied.
    fn event(&mut self, loss: f64, cause: LossCause, cycle: u32, pre: f64) -> f64 {
        if loss <= 0.0 || pre <= 0.0 {
            return 1.0;
        }
        self.ledger.add(cause, loss);
        self.events.push(LossEvent { stage: self.stage.clone(), cycle, cause, probability: (loss / pre).min(1.0) });
        match self.propagation {
            Propagation::Coherent => 1.0,
            Propagation::Zeno => {
                let now = self.norm_sqr();
                if now <= 0.0 {
                    return 0.0;
                }
                let s = ((pre - loss).max(0.0) / now).sqrt();
                self.scale(s);
                s
            }
        }
    }

    /// One QZ cycle on every rail: rotate by `theta`, absorb the control-arm
    /// amplitude where the AO is present.
    pub fn qz_cycle(&mut self, rails: &[ResolvedRail], theta: f64, cycle: u32) {
        let pre = self.norm_sqr();
        let (s, c) = theta.sin_cos();
        let mut loss = 0.0;
        for rail in rails {
            for p in &rail.pairs {
                let (a, f) = (self.amps[p.pass], self.amps[p.flip]);
                let (na, nf) = (a * c - f * s, a * s + f * c);
                if p.present {
                    loss += nf.norm_sqr();
                    if self.propagation == Propagation::Coherent {
                        self.amps[p.pass] = na;
                    }
                    self.amps[p.flip] = ZERO;
                } else {
                    self.amps[p.pass] = na;
                    self.amps[p.flip] = nf;
                }
            }
        }
        self.event(loss, LossCause::AbsorbedByAo, cycle, pre);
    }

    /// Whatever sits in absent-AO branches after a plain QZ run went through
    /// the channel at least once.
    pub fn tally_absence_residue(&mut self, rails: &[ResolvedRail]) {
        for rail in rails {
            for p in rail.pairs.iter().filter(|p| !p.present) {
                self.channel_residue += self.amps[p.pass].norm_sqr() + self.amps[p.flip].norm_sqr();
            }
        }
    }

    /// MQZ redirect: send the flipped (non-counterfactual) polarization to the
    /// absorber. Under Zeno propagation each touched component collapses onto
    /// its presence branch and keeps its pre-redirect weight.
    pub fn redirect(&mut self, rails: &[ResolvedRail], cycle: u32) {
        let pre = self.norm_sqr();
        let mut before: BTreeMap<usize, f64> = BTreeMap::new();
        if self.propagation == Propagation::Zeno {
            for rail in rails {
                for p in &rail.pairs {
                    before.entry(self.component[p.pass]).or_insert(0.0);
                }
            }
            for (i, a) in self.amps.iter().enumerate() {
                if let Some(w) = before.get_mut(&self.component[i]) {
                    *w += a.norm_sqr();
                }
            }
        }
        let mut loss = 0.0;
        for rail in rails {
            for p in &rail.pairs {
                loss += self.amps[p.flip].norm_sqr();
                self.amps[p.flip] = ZERO;
                if !p.present {
                    let residue = self.amps[p.pass].norm_sqr();
                    match self.propagation {
                        Propagation::Zeno => {
                            loss += residue;
                            self.amps[p.pass] = ZERO;
                        }
                        Propagation::Coherent => self.channel_residue += residue,
                    }
                }
            }
        }
        for (&key, &weight) in &before {
            let now: f64 = self
                .amps
                .iter()
                .enumerate()
                .filter(|(i, _)| self.component[*i] == key)
                .map(|(_, a)| a.norm_sqr())
                .sum();
            if now > 0.0 {
                let s = (weight / now).sqrt();
                for i in 0..self.amps.len() {
                    if self.component[i] == key {
                        self.amps[i] *= s;
                    }
                }
            }
        }
        self.event(loss, LossCause::RedirectedNoncounterfactual, cycle, pre);
    }

    /// One outer CQZ cycle: rotate by `theta_m`, run the rotated component
    /// through an `n`-cycle inner QZ chain, then return it (AO present) or
    /// discard it at the detector (AO absent).
    pub fn cqz_outer_cycle(&mut self, rails: &[ResolvedRail], theta_m: f64, theta_n: f64, n: u32, cycle: u32) {
        let frozen = self.amps.clone();
        let mut since = 1.0;
        let (sm, cm) = theta_m.sin_cos();
        for rail in rails {
            for p in &rail.pairs {
                let (a, f) = (self.amps[p.pass], self.amps[p.flip]);
                self.amps[p.pass] = a * cm - f * sm;
                self.inner[p.flip] = (a * sm + f * cm, ZERO);
                self.amps[p.flip] = ZERO;
            }
        }
        let (sn, cn) = theta_n.sin_cos();
        for _ in 0..n {
            let pre = self.norm_sqr();
            let mut loss = 0.0;
            for rail in rails {
                for p in &rail.pairs {
                    let (x, y) = self.inner[p.flip];
                    let (nx, ny) = (x * cn - y * sn, x * sn + y * cn);
                    if p.present {
                        loss += ny.norm_sqr();
                        if self.propagation == Propagation::Coherent {
                            self.inner[p.flip] = (nx, ZERO);
                        } else {
                            self.inner[p.flip] = (x, ZERO);
                        }
                    } else {
                        self.inner[p.flip] = (nx, ny);
                    }
                }
            }
            since *= self.event(loss, LossCause::AbsorbedByAo, cycle, pre);
        }
        let pre = self.norm_sqr();
        let mut loss = 0.0;
        for rail in rails {
            for p in &rail.pairs {
                let (x, y) = std::mem::replace(&mut self.inner[p.flip], (ZERO, ZERO));
                if p.present {
                    self.amps[p.flip] = x;
                    loss += y.norm_sqr();
                } else {
                    loss += y.norm_sqr();
                    match self.propagation {
                        Propagation::Coherent => {
                            self.channel_residue += x.norm_sqr();
                            self.amps[p.flip] = x;
                        }
                        Propagation::Zeno => {
                            loss += x.norm_sqr();
                            self.amps[p.pass] = frozen[p.pass] * since;
                            self.amps[p.flip] = frozen[p.flip] * since;
                        }
                    }
                }
            }
        }
        self.event(loss, LossCause::DiscardedAtDetector, cycle, pre);
    }

    pub fn write_back(self, state: &StateVector) -> (StateVector, LossLedger, Vec<LossEvent>, f64) {
        let mut out = state.clone();
        out.amplitudes_mut().copy_from_slice(&self.amps);
        for (cause, v) in self.ledger.iter() {
            out.record_loss(cause, v);
        }
        (out, self.ledger, self.events, self.channel_residue)
    }
}
