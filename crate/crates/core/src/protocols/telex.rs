use num_complex::Complex64;
use rand::{Rng, RngCore};

use super::types::*;
use crate::error::{Error, Result};
use crate::hilbert::{ops, Basis, LocalUnitary, Matrix, Sampler, StateVector, SubsystemSpec};
use crate::zeno::{dcqz_exec, delta1, dmqz_exec, zeta_q, Exec, LossEvent, Mode, ZenoParams};

/// Announcement choice for the final ancilla measurement.
pub enum Announcement<'a> {
    Forced(u8),
    Random(&'a mut dyn RngCore),
}

/// `ψ₁ = η₁ ⊗ (γ|00> + δ|11>)_BC`, then CNOT(A→B), then CNOT(B→A). Labels `a`, `b`, `c`.
pub fn ddnot_ideal(m: &TelexMessage) -> StateVector {
    let c0 = StateVector::basis(vec![SubsystemSpec::qubit("c")], &[0]).expect("basis");
    let psi = m.eta1.to_state("a").tensor(&m.eta2.to_state("b")).and_then(|s| s.tensor(&c0)).expect("disjoint");
    let cnot = |ctrl: &str, tgt: &str| LocalUnitary::new(ops::cnot(), &[ctrl, tgt]).expect("unitary");
    psi.apply_unitary(&cnot("b", "c"))
        .and_then(|s| s.apply_unitary(&cnot("a", "b")))
        .and_then(|s| s.apply_unitary(&cnot("b", "a")))
        .expect("layout fixed")
}

fn on_pc(m: Matrix) -> LocalUnitary {
    LocalUnitary::new(m, &[POLARIZATION, PATH]).expect("unitary")
}

/// `|V,0> ↔ |V,1>` on `[p, c]` with a 4-level path (index = 4·pol + path).
fn entangling_pbs() -> LocalUnitary {
    on_pc(ops::permutation(&[0, 1, 2, 3, 5, 4, 6, 7]))
}

/// `|V,0> ↔ |V,2>`, `|V,1> ↔ |V,3>`; also the recombiner.
fn splitting_pbs() -> LocalUnitary {
    on_pc(ops::permutation(&[0, 1, 2, 3, 6, 7, 4, 5]))
}

fn u3() -> LocalUnitary {
    on_pc(ops::controlled_by_level(4, &[(1, ops::pauli_x()), (2, ops::pauli_z())]))
}

/// `U₄`; the same matrix serves as Bob's decode CNOT (ancilla control).
fn x_on_path1() -> LocalUnitary {
    on_pc(ops::controlled_by_level(4, &[(1, ops::pauli_x())]))
}

/// Hadamard on ancilla levels {0, 1}, identity on {2, 3}.
fn ancilla_hadamard() -> LocalUnitary {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let m = Matrix::from_real(&[&[h, h, 0.0, 0.0], &[h, -h, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0]])
        .expect("square");
    LocalUnitary::new(m, &[PATH]).expect("unitary")
}

fn pipeline(m: &TelexMessage, p: &ZenoParams, exec: Exec) -> Result<(StateVector, Vec<LossEvent>)> {
    let c0 = StateVector::basis(vec![SubsystemSpec::new(PATH, 4)?], &[0])?;
    let mut s = m.eta1.to_state(ELECTRON).tensor(&m.eta2.to_state(POLARIZATION))?.tensor(&c0)?;
    s = s.apply_unitary(&entangling_pbs())?;
    let report = dcqz_exec(&s, ELECTRON, POLARIZATION, (PATH, 0), (PATH, 1), p, exec)?;
    let mut events = report.events;
    s = report.output_state.apply_unitary(&splitting_pbs())?.apply_unitary(&u3())?;
    let rot = LocalUnitary::rotation(ELECTRON, p.theta_k());
    for _ in 0..p.k {
        s = s.apply_unitary(&rot)?;
        let report = dmqz_exec(&s, ELECTRON, POLARIZATION, (PATH, 0), (PATH, 1), p, exec, "dmqz")?;
        events.extend(report.events);
        s = report.output_state;
    }
    s = s.apply_unitary(&x_on_path1())?.apply_unitary(&splitting_pbs())?;
    Ok((s, events))
}

/// Runs the protocol up to `ψ₃`, the heralded state over `[e, p, c]`.
pub fn telex_heralded(m: &TelexMessage, p: &ZenoParams, mode: Mode) -> Result<Heralded> {
    let (state, events) = pipeline(m, p, mode.into())?;
    let coherent_herald = match mode {
        Mode::Cycle => Some(pipeline(m, p, Exec::Coherent)?.0.norm_sqr()),
        Mode::Analytic => None,
    };
    Ok(Heralded {
        herald_probability: state.norm_sqr(),
        closed_form_herald: zeta_q(m.eta1.weight0(), m.eta2.weight0(), p.m, p.n, p.k)?,
        coherent_herald,
        events,
        state,
    })
}

/// Bob's CNOT (ancilla control, message target) and Hadamard on the ancilla:
/// `ψ₃ → ψ₄ →` state ready for the μ measurement.
pub fn telex_pre_announcement(psi3: &StateVector) -> Result<StateVector> {
    psi3.apply_unitary(&x_on_path1())?.apply_unitary(&ancilla_hadamard())
}

/// Announcement μ with its probability, and the decoded (Alice, Bob) states.
#[derive(Debug, Clone)]
pub struct TelexDecode {
    pub mu: u8,
    pub probability: f64,
    pub alice: QubitState,
    pub bob: QubitState,
    /// Purities of the two reduced states; 1 when the output is a product.
    pub purities: (f64, f64),
}

pub fn telex_decode(psi4: &StateVector, announcement: Announcement<'_>) -> Result<TelexDecode> {
    let sampler = match announcement {
        Announcement::Forced(mu) => Sampler::Forced(mu as usize),
        Announcement::Random(rng) => Sampler::Random(rng),
    };
    let meas = psi4.measure(PATH, Basis::Computational, sampler)?;
    if meas.outcome > 1 {
        return Err(Error::InvalidArgument(format!("ancilla found in level {}", meas.outcome)));
    }
    let mu = meas.outcome as u8;
    let post = meas.post_state.apply_unitary(&LocalUnitary::new(ops::z_power(mu), &[ELECTRON])?)?;
    let (ea, pa) = post.factor(ELECTRON)?;
    let (eb, pb) = post.factor(POLARIZATION)?;
    Ok(TelexDecode {
        mu,
        probability: meas.probability,
        alice: QubitState::normalized(ea[0], ea[1])?,
        bob: QubitState::normalized(eb[0], eb[1])?,
        purities: (pa, pb),
    })
}

/// Full telex run; Alice should end with η₂ and Bob with η₁.
pub fn telex_run(
    m: &TelexMessage,
    p: &ZenoParams,
    mode: Mode,
    announcement: Announcement<'_>,
) -> Result<ProtocolOutcome> {
    let h = telex_heralded(m, p, mode)?;
    if let Some(erased) = h.erasure() {
        return Ok(erased);
    }
    let d = telex_decode(&telex_pre_announcement(&h.state)?, announcement)?;
    let fa = d.alice.fidelity(&m.eta2) * d.purities.0;
    let fb = d.bob.fidelity(&m.eta1) * d.purities.1;
    Ok(ProtocolOutcome {
        status: Status::Decoded,
        decoded_bits: None,
        output_states: Some((d.alice, d.bob)),
        announcement: Some(d.mu),
        herald_probability: h.herald_probability,
        closed_form_herald: h.closed_form_herald,
        coherent_herald: h.coherent_herald,
        ledger: *h.state.ledger(),
        erasure_cause: None,
        outcome_probability: d.probability,
        fidelities: Some((fa, fb)),
    })
}

/// `Δ₁ = |αγ|² + |βδ|²` for a message pair.
pub fn message_delta1(m: &TelexMessage) -> f64 {
    delta1(m.eta1.weight0(), m.eta2.weight0()).expect("weights are probabilities")
}

/// Haar-random qubit.
pub fn random_qubit(rng: &mut impl Rng) -> QubitState {
    let u: f64 = rng.gen();
    let (t, phi) = (u.sqrt().acos(), rng.gen::<f64>() * std::f64::consts::TAU);
    let (s, c) = t.sin_cos();
    QubitState::normalized(Complex64::new(c, 0.0), Complex64::from_polar(s, phi)).expect("unit norm")
}
