//! The five Zeno-type gates, each runnable analytically or cycle by cycle.
//!
//! Conventions: electron level 0 is `↑`, level 1 is `↓`; polarization level 0
//! is `H`, level 1 is `V`. The V-variant mirrors the H-variant under `H ↔ V`,
//! so an unobstructed chain maps `H → V` and `V → H` with no sign.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::closed_form::{cqz_herald, mqz_herald, qz_herald};
use super::engine::{Engine, LossEvent, Pair, Propagation, ResolvedRail};
use super::params::ZenoParams;
use crate::error::{Error, Result};
use crate::hilbert::{LossCause, LossLedger, StateVector};

/// Which polarization passes straight through the gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateVariant {
    H,
    V,
}

impl GateVariant {
    pub fn pass_level(self) -> usize {
        match self {
            GateVariant::H => 0,
            GateVariant::V => 1,
        }
    }
}

/// How electron levels map onto AO presence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AoMapping {
    /// `↑` blocks for the H-variant, `↓` for the V-variant (QZ, MQZ, DMQZ).
    TypeI,
    /// `↑ = |0>_AO` (absent), `↓ = |1>_AO` (present) for both variants (CQZ, DCQZ).
    TypeII,
}

impl AoMapping {
    pub fn presence_level(self, variant: GateVariant) -> usize {
        match (self, variant) {
            (AoMapping::TypeI, GateVariant::H) => 0,
            (AoMapping::TypeI, GateVariant::V) => 1,
            (AoMapping::TypeII, _) => 1,
        }
    }
}

/// Absorptive object: classical, or an electron subsystem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ao {
    Present,
    Absent,
    Quantum(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Ideal state map weighted by the closed-form herald.
    Analytic,
    /// Cycle-by-cycle propagation.
    Cycle,
}

/// Photon rail a gate acts on: a polarization subsystem, optionally restricted
/// to one level of a path subsystem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rail {
    pub polarization: String,
    pub path: Option<(String, usize)>,
}

impl Rail {
    pub fn photon(polarization: &str) -> Self {
        Self { polarization: polarization.to_string(), path: None }
    }

    pub fn on_path(polarization: &str, path: &str, level: usize) -> Self {
        Self { polarization: polarization.to_string(), path: Some((path.to_string(), level)) }
    }
}

#[derive(Debug, Clone)]
pub struct HeraldReport {
    pub output_state: StateVector,
    /// Heralded norm² relative to the input norm².
    pub herald_probability: f64,
    /// Probability booked to the ledger during this gate.
    pub channel_exposure: f64,
    pub ledger: LossLedger,
    /// Closed-form herald for the same input weights.
    pub closed_form: f64,
    /// Herald under coherent propagation, counting only the ideal output
    /// port (cycle mode only).
    pub coherent_herald: Option<f64>,
    /// Heralded probability that passed through the channel and returned.
    pub channel_residue: f64,
    pub counterfactual: bool,
    pub events: Vec<LossEvent>,
}

impl HeraldReport {
    /// `|coherent − closed| / closed`, when both exist.
    pub fn coherent_relative_difference(&self) -> Option<f64> {
        let c = self.coherent_herald?;
        (self.closed_form > 0.0).then(|| (c - self.closed_form).abs() / self.closed_form)
    }
}

/// Crate-internal execution choice; `Coherent` is the diagnostic propagation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Exec {
    Analytic,
    Zeno,
    Coherent,
}

impl From<Mode> for Exec {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Analytic => Exec::Analytic,
            Mode::Cycle => Exec::Zeno,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum ResolvedAo {
    Classical(bool),
    Quantum { position: usize, presence: usize },
}

struct RailSpec<'a> {
    rail: &'a Rail,
    variant: GateVariant,
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Qz,
    Cqz,
    Mqz,
}

struct Prepared {
    rails: Vec<ResolvedRail>,
    component: Vec<usize>,
    presence_weight: f64,
    absence_weight: f64,
    norm: f64,
}

fn resolve_ao(state: &StateVector, ao: &Ao, mapping: AoMapping, variant: GateVariant) -> Result<ResolvedAo> {
    Ok(match ao {
        Ao::Present => ResolvedAo::Classical(true),
        Ao::Absent => ResolvedAo::Classical(false),
        Ao::Quantum(label) => {
            let position = state.position(label)?;
            if state.subsystems()[position].dimension != 2 {
                return Err(Error::InvalidArgument(format!("AO `{label}` must be a qubit")));
            }
            ResolvedAo::Quantum { position, presence: mapping.presence_level(variant) }
        }
    })
}

fn prepare(state: &StateVector, specs: &[RailSpec<'_>], ao: &Ao, mapping: AoMapping) -> Result<Prepared> {
    let norm = state.norm_sqr();
    if norm <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let electron = match ao {
        Ao::Quantum(label) => Some(state.position(label)?),
        _ => None,
    };
    let mut rails = Vec::new();
    let mut pol_positions = Vec::new();
    let mut presence_weight = 0.0;
    let mut absence_weight = 0.0;
    for spec in specs {
        let pol = state.position(&spec.rail.polarization)?;
        if state.subsystems()[pol].dimension != 2 {
            return Err(Error::InvalidArgument(format!("polarization `{}` must be a qubit", spec.rail.polarization)));
        }
        if Some(pol) == electron {
            return Err(Error::InvalidArgument("AO and polarization must differ".into()));
        }
        pol_positions.push(pol);
        let path = match &spec.rail.path {
            Some((label, level)) => {
                let pos = state.position(label)?;
                if *level >= state.subsystems()[pos].dimension {
                    return Err(Error::InvalidArgument(format!("path level {level} out of range")));
                }
                Some((pos, *level))
            }
            None => None,
        };
        let ao_r = resolve_ao(state, ao, mapping, spec.variant)?;
        let pass = spec.variant.pass_level();
        let stride = state.stride(pol);
        let mut pairs = Vec::new();
        for i in 0..state.dim() {
            let d = state.digits(i);
            if d[pol] != pass || path.is_some_and(|(p, l)| d[p] != l) {
                continue;
            }
            let flip = if pass == 0 { i + stride } else { i - stride };
            let present = match ao_r {
                ResolvedAo::Classical(b) => b,
                ResolvedAo::Quantum { position, presence } => d[position] == presence,
            };
            let stray = state.amplitudes()[flip].norm_sqr();
            if stray > 1e-18 * norm {
                return Err(Error::InvalidArgument(format!(
                    "rail input must carry only the pass-through polarization ({:?}); found weight {stray:e}",
                    spec.variant
                )));
            }
            let w = state.amplitudes()[i].norm_sqr() / norm;
            if present {
                presence_weight += w;
            } else {
                absence_weight += w;
            }
            pairs.push(Pair { pass: i, flip, present });
        }
        rails.push(ResolvedRail { pairs });
    }
    for (a, b) in rails.iter().enumerate().flat_map(|(a, _)| (a + 1..rails.len()).map(move |b| (a, b))) {
        let overlap =
            rails[a].pairs.iter().any(|p| rails[b].pairs.iter().any(|q| q.pass == p.pass || q.flip == p.pass));
        if overlap {
            return Err(Error::InvalidArgument("rails must not overlap".into()));
        }
    }
    let component = (0..state.dim())
        .map(|i| {
            let mut d = state.digits(i);
            if let Some(e) = electron {
                d[e] = 0;
            }
            for &p in &pol_positions {
                d[p] = 0;
            }
            state.index(&d)
        })
        .collect();
    Ok(Prepared { rails, component, presence_weight, absence_weight, norm })
}

fn closed_form(kind: Kind, prep: &Prepared, p: &ZenoParams) -> Result<f64> {
    let (pw, aw) = (prep.presence_weight.min(1.0), prep.absence_weight.min(1.0));
    match kind {
        Kind::Qz => qz_herald(pw, p.n),
        Kind::Cqz => cqz_herald(aw, pw, p.m, p.n),
        Kind::Mqz => mqz_herald(pw, aw, p.n),
    }
}

#[allow(clippy::too_many_arguments)]
fn run(
    kind: Kind,
    state: &StateVector,
    specs: &[RailSpec<'_>],
    ao: &Ao,
    mapping: AoMapping,
    p: &ZenoParams,
    exec: Exec,
    stage: &str,
) -> Result<HeraldReport> {
    let prep = prepare(state, specs, ao, mapping)?;
    let closed = closed_form(kind, &prep, p)?;
    let (output_state, ledger, events, residue) = match exec {
        Exec::Analytic => analytic(kind, state, &prep, p, closed, stage)?,
        Exec::Zeno => cycle(kind, state, &prep, p, Propagation::Zeno, stage),
        Exec::Coherent => cycle(kind, state, &prep, p, Propagation::Coherent, stage),
    };
    let coherent_herald = (exec == Exec::Zeno).then(|| {
        let coherent = cycle(kind, state, &prep, p, Propagation::Coherent, stage).0;
        ideal_port_weight(kind, &coherent, &prep) / prep.norm
    });
    let herald = output_state.norm_sqr() / prep.norm;
    Ok(HeraldReport {
        herald_probability: herald,
        channel_exposure: ledger.total(),
        ledger,
        closed_form: closed,
        coherent_herald,
        channel_residue: residue,
        counterfactual: residue <= 1e-12 * prep.norm,
        events,
        output_state,
    })
}

/// Weight in the output port each branch should exit through; amplitude
/// left in the other port is a routing error, not a herald.
fn ideal_port_weight(kind: Kind, state: &StateVector, prep: &Prepared) -> f64 {
    let amps = state.amplitudes();
    let mut wrong = 0.0;
    for rail in &prep.rails {
        for pair in &rail.pairs {
            let flipped = match kind {
                Kind::Qz => !pair.present,
                Kind::Cqz => pair.present,
                Kind::Mqz => false,
            };
            wrong += amps[if flipped { pair.pass } else { pair.flip }].norm_sqr();
        }
    }
    state.norm_sqr() - wrong
}

fn cycle(
    kind: Kind,
    state: &StateVector,
    prep: &Prepared,
    p: &ZenoParams,
    propagation: Propagation,
    stage: &str,
) -> (StateVector, LossLedger, Vec<LossEvent>, f64) {
    let mut eng = Engine::new(state, propagation, stage, prep.component.clone());
    match kind {
        Kind::Qz => {
            for c in 1..=p.n {
                eng.qz_cycle(&prep.rails, p.theta_n(), c);
            }
            eng.tally_absence_residue(&prep.rails);
        }
        Kind::Mqz => {
            for c in 1..=p.n {
                eng.qz_cycle(&prep.rails, p.theta_n(), c);
            }
            eng.redirect(&prep.rails, p.n + 1);
        }
        Kind::Cqz => {
            for c in 1..=p.m {
                eng.cqz_outer_cycle(&prep.rails, p.theta_m(), p.theta_n(), p.n, c);
            }
        }
    }
    eng.write_back(state)
}

/// Ideal map, then scale to the closed-form herald. Losses are booked in
/// the order absorption, then discard or redirect.
fn analytic(
    kind: Kind,
    state: &StateVector,
    prep: &Prepared,
    p: &ZenoParams,
    herald: f64,
    stage: &str,
) -> Result<(StateVector, LossLedger, Vec<LossEvent>, f64)> {
    let mut out = state.clone();
    let amps = out.amplitudes_mut();
    let zero = Complex64::new(0.0, 0.0);
    let mut residue = 0.0;
    for rail in &prep.rails {
        for pair in &rail.pairs {
            let flips = match kind {
                Kind::Qz => !pair.present,
                Kind::Cqz => pair.present,
                Kind::Mqz => false,
            };
            if flips {
                amps[pair.flip] = amps[pair.pass];
                amps[pair.pass] = zero;
            }
            if matches!(kind, Kind::Mqz) && !pair.present {
                amps[pair.pass] = zero;
            }
            if matches!(kind, Kind::Qz) && !pair.present {
                residue += amps[pair.flip].norm_sqr();
            }
        }
    }
    if matches!(kind, Kind::Mqz) {
        let mut keys: Vec<usize> =
            prep.rails.iter().flat_map(|r| r.pairs.iter().map(|q| prep.component[q.pass])).collect();
        keys.sort_unstable();
        keys.dedup();
        for key in keys {
            let members: Vec<usize> = (0..amps.len()).filter(|&i| prep.component[i] == key).collect();
            let before: f64 = members.iter().map(|&i| state.amplitudes()[i].norm_sqr()).sum();
            let now: f64 = members.iter().map(|&i| amps[i].norm_sqr()).sum();
            if now > 0.0 {
                let s = (before / now).sqrt();
                for &i in &members {
                    amps[i] *= s;
                }
            }
        }
    }
    let n = prep.norm;
    out.rescale_to(n * herald);
    let pw = prep.presence_weight.min(1.0);
    let absorbed_factor = match kind {
        Kind::Qz => herald,
        Kind::Cqz => cqz_herald(0.0, pw, p.m, p.n)?,
        Kind::Mqz => qz_herald(pw, p.n)?,
    };
    let second = match kind {
        Kind::Qz => None,
        Kind::Cqz => Some(LossCause::DiscardedAtDetector),
        Kind::Mqz => Some(LossCause::RedirectedNoncounterfactual),
    };
    let mut ledger = LossLedger::default();
    let mut events = Vec::new();
    let absorbed = n * (1.0 - absorbed_factor);
    if absorbed > 0.0 {
        ledger.add(LossCause::AbsorbedByAo, absorbed);
        events.push(LossEvent {
            stage: stage.to_string(),
            cycle: 0,
            cause: LossCause::AbsorbedByAo,
            probability: 1.0 - absorbed_factor,
        });
    }
    if let Some(cause) = second {
        let rest = n * (absorbed_factor - herald);
        if rest > 0.0 {
            ledger.add(cause, rest);
            events.push(LossEvent {
                stage: stage.to_string(),
                cycle: 0,
                cause,
                probability: if absorbed_factor > 0.0 { 1.0 - herald / absorbed_factor } else { 1.0 },
            });
        }
    }
    for (cause, v) in ledger.iter() {
        out.record_loss(cause, v);
    }
    Ok((out, ledger, events, residue * herald))
}

pub(crate) fn qz_exec(
    s: &StateVector,
    v: GateVariant,
    ao: &Ao,
    rail: &Rail,
    p: &ZenoParams,
    exec: Exec,
) -> Result<HeraldReport> {
    run(Kind::Qz, s, &[RailSpec { rail, variant: v }], ao, AoMapping::TypeI, p, exec, "qz")
}

pub(crate) fn cqz_exec(
    s: &StateVector,
    v: GateVariant,
    ao: &Ao,
    rail: &Rail,
    p: &ZenoParams,
    exec: Exec,
) -> Result<HeraldReport> {
    run(Kind::Cqz, s, &[RailSpec { rail, variant: v }], ao, AoMapping::TypeII, p, exec, "cqz")
}

pub(crate) fn mqz_exec(
    s: &StateVector,
    v: GateVariant,
    electron: &str,
    rail: &Rail,
    p: &ZenoParams,
    exec: Exec,
    stage: &str,
) -> Result<HeraldReport> {
    let ao = Ao::Quantum(electron.to_string());
    run(Kind::Mqz, s, &[RailSpec { rail, variant: v }], &ao, AoMapping::TypeI, p, exec, stage)
}

fn dual_rails(polarization: &str, path_a: (&str, usize), path_b: (&str, usize)) -> Result<(Rail, Rail)> {
    if path_a == path_b {
        return Err(Error::InvalidArgument("dual-rail gate needs two distinct path levels".into()));
    }
    Ok((Rail::on_path(polarization, path_a.0, path_a.1), Rail::on_path(polarization, path_b.0, path_b.1)))
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn dmqz_exec(
    s: &StateVector,
    electron: &str,
    polarization: &str,
    path_a: (&str, usize),
    path_b: (&str, usize),
    p: &ZenoParams,
    exec: Exec,
    stage: &str,
) -> Result<HeraldReport> {
    let (ra, rb) = dual_rails(polarization, path_a, path_b)?;
    let ao = Ao::Quantum(electron.to_string());
    let specs = [RailSpec { rail: &ra, variant: GateVariant::H }, RailSpec { rail: &rb, variant: GateVariant::V }];
    run(Kind::Mqz, s, &specs, &ao, AoMapping::TypeI, p, exec, stage)
}

pub(crate) fn dcqz_exec(
    s: &StateVector,
    electron: &str,
    polarization: &str,
    path_a: (&str, usize),
    path_b: (&str, usize),
    p: &ZenoParams,
    exec: Exec,
) -> Result<HeraldReport> {
    let (ra, rb) = dual_rails(polarization, path_a, path_b)?;
    let ao = Ao::Quantum(electron.to_string());
    let specs = [RailSpec { rail: &ra, variant: GateVariant::H }, RailSpec { rail: &rb, variant: GateVariant::V }];
    run(Kind::Cqz, s, &specs, &ao, AoMapping::TypeII, p, exec, "dcqz")
}

/// QZ gate with N cycles; type-I AO mapping.
pub fn qz_gate(
    s: &StateVector,
    v: GateVariant,
    ao: &Ao,
    rail: &Rail,
    p: &ZenoParams,
    mode: Mode,
) -> Result<HeraldReport> {
    qz_exec(s, v, ao, rail, p, mode.into())
}

/// Chained QZ gate with M outer and N inner cycles; type-II AO mapping.
pub fn cqz_gate(
    s: &StateVector,
    v: GateVariant,
    ao: &Ao,
    rail: &Rail,
    p: &ZenoParams,
    mode: Mode,
) -> Result<HeraldReport> {
    cqz_exec(s, v, ao, rail, p, mode.into())
}

/// QZ against a quantum AO followed by redirection of the flipped
/// polarization into the absorber.
pub fn mqz_gate(
    s: &StateVector,
    v: GateVariant,
    electron: &str,
    rail: &Rail,
    p: &ZenoParams,
    mode: Mode,
) -> Result<HeraldReport> {
    mqz_exec(s, v, electron, rail, p, mode.into(), "mqz")
}

/// H-variant MQZ on `path_a`, V-variant MQZ on `path_b`, sharing one electron.
pub fn dmqz_gate(
    s: &StateVector,
    electron: &str,
    polarization: &str,
    path_a: (&str, usize),
    path_b: (&str, usize),
    p: &ZenoParams,
    mode: Mode,
) -> Result<HeraldReport> {
    dmqz_exec(s, electron, polarization, path_a, path_b, p, mode.into(), "dmqz")
}

/// Heralded CNOT (electron control, polarization target) from an H-variant
/// CQZ on `path_a` and a V-variant CQZ on `path_b`.
pub fn dcqz_entangle(
    s: &StateVector,
    electron: &str,
    polarization: &str,
    path_a: (&str, usize),
    path_b: (&str, usize),
    p: &ZenoParams,
    mode: Mode,
) -> Result<HeraldReport> {
    dcqz_exec(s, electron, polarization, path_a, path_b, p, mode.into())
}
