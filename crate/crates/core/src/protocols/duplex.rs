use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, RngCore};

use super::types::*;
use crate::error::Result;
use crate::hilbert::{ops, Basis, LocalUnitary, Matrix, Sampler, StateVector, SubsystemSpec};
use crate::zeno::{mqz_exec, zeta_c, Exec, GateVariant, LossEvent, Mode, Rail, ZenoParams};

/// `(Z^{b1} ⊗ X^{b2}) |Φ+>` over `[e, p]`.
pub fn duplex_encode(m: DuplexMessage) -> StateVector {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let phi_plus = StateVector::new(
        vec![SubsystemSpec::qubit(ELECTRON), SubsystemSpec::qubit(POLARIZATION)],
        vec![h, zero, zero, h],
    )
    .expect("normalized");
    let u =
        LocalUnitary::new(ops::z_power(m.b1).kron(&ops::x_power(m.b2)), &[ELECTRON, POLARIZATION]).expect("unitary");
    phi_plus.apply_unitary(&u).expect("layout fixed")
}

/// `Σ_k |out_k><bell_k|` with `Φ± → |0>|±>`, `Ψ± → |1>|±>`.
pub fn dnot_matrix() -> Matrix {
    let h = FRAC_1_SQRT_2;
    // columns: Bell states in (Φ+, Φ−, Ψ+, Ψ−) order
    let bell = [[h, 0.0, 0.0, h], [h, 0.0, 0.0, -h], [0.0, h, h, 0.0], [0.0, h, -h, 0.0]];
    let out = [[h, h, 0.0, 0.0], [h, -h, 0.0, 0.0], [0.0, 0.0, h, h], [0.0, 0.0, h, -h]];
    let mut m = Matrix::zeros(4);
    for (o, b) in out.iter().zip(&bell) {
        for (r, or) in o.iter().enumerate() {
            for (c, bc) in b.iter().enumerate() {
                let v = m.get(r, c) + Complex64::new(or * bc, 0.0);
                m.set(r, c, v);
            }
        }
    }
    m
}

/// Ideal DNOT on a two-qubit state (first subsystem is the Bell pair's first qubit).
pub fn dnot_ideal(s: &StateVector) -> Result<StateVector> {
    let labels: Vec<&str> = s.subsystems().iter().map(|x| x.label.as_str()).collect();
    s.apply_unitary(&LocalUnitary::new(dnot_matrix(), &labels)?)
}

/// PBS on `[p, c]` with a 2-level path: `|V,0> ↔ |V,1>`.
fn pbs() -> LocalUnitary {
    LocalUnitary::new(ops::permutation(&[0, 1, 3, 2]), &[POLARIZATION, PATH]).expect("permutation")
}

fn on_path0(op: Matrix) -> LocalUnitary {
    LocalUnitary::new(ops::controlled_by_level(2, &[(0, op)]), &[POLARIZATION, PATH]).expect("unitary")
}

/// Encoding through reconciliation: returns the heralded state over `[e, p, c]`, before Alice's and
/// Bob's local measurements, and the loss events along the way.
fn pipeline(m: DuplexMessage, p: &ZenoParams, exec: Exec) -> Result<(StateVector, Vec<LossEvent>)> {
    let path = StateVector::basis(vec![SubsystemSpec::qubit(PATH)], &[0])?;
    let u1 = on_path0(ops::x_power(m.b2));
    let mut s = duplex_encode(m).tensor(&path)?.apply_unitary(&pbs())?.apply_unitary(&u1)?;
    let variant = if m.b2 == 0 { GateVariant::H } else { GateVariant::V };
    let rail = Rail::on_path(POLARIZATION, PATH, 0);
    let rot = LocalUnitary::rotation(ELECTRON, p.theta_k());
    let mut events = Vec::new();
    for _ in 0..p.k {
        s = s.apply_unitary(&rot)?;
        let report = mqz_exec(&s, variant, ELECTRON, &rail, p, exec, "mqz")?;
        events.extend(report.events);
        s = report.output_state;
    }
    s = s.apply_unitary(&u1)?.apply_unitary(&pbs())?;
    Ok((s.apply_unitary(&on_path0(ops::z_power(1 - m.b2)))?, events))
}

pub fn duplex_heralded(m: DuplexMessage, p: &ZenoParams, mode: Mode) -> Result<Heralded> {
    let (state, events) = pipeline(m, p, mode.into())?;
    let coherent_herald = match mode {
        Mode::Cycle => Some(pipeline(m, p, Exec::Coherent)?.0.norm_sqr()),
        Mode::Analytic => None,
    };
    Ok(Heralded {
        herald_probability: state.norm_sqr(),
        closed_form_herald: zeta_c(p.n, p.k)?,
        coherent_herald,
        events,
        state,
    })
}

/// Table II: `↑ → b2 = 0`, `↓ → b2 = 1`; `H → b1 = 0`, `V → b1 = 1`.
pub fn duplex_decode(electron_outcome: usize, photon_outcome: usize) -> (u8, u8) {
    (photon_outcome.min(1) as u8, electron_outcome.min(1) as u8)
}

/// Conditional distribution of decoded `(b1, b2)` from a heralded state,
/// indexed `[b1][b2]`.
pub fn duplex_decode_distribution(s: &StateVector) -> Result<[[f64; 2]; 2]> {
    let rotated = s.apply_unitary(&LocalUnitary::hadamard(POLARIZATION))?;
    let e = rotated.position(ELECTRON)?;
    let ph = rotated.position(POLARIZATION)?;
    let norm = rotated.norm_sqr();
    let mut dist = [[0.0; 2]; 2];
    for (i, a) in rotated.amplitudes().iter().enumerate() {
        let d = rotated.digits(i);
        let (b1, b2) = duplex_decode(d[e], d[ph]);
        dist[b1 as usize][b2 as usize] += a.norm_sqr() / norm;
    }
    Ok(dist)
}

/// Full duplex run. Decoding measures the electron and then the photon in the
/// Hadamard basis; with `rng = None` the most likely outcome is reported.
pub fn duplex_run(
    m: DuplexMessage,
    p: &ZenoParams,
    mode: Mode,
    rng: Option<&mut dyn RngCore>,
) -> Result<ProtocolOutcome> {
    let h = duplex_heralded(m, p, mode)?;
    if let Some(erased) = h.erasure() {
        return Ok(erased);
    }
    let (bits, prob) = match rng {
        Some(rng) => {
            let me = h.state.measure(ELECTRON, Basis::Computational, Sampler::Random(&mut *rng))?;
            let mp = me.post_state.measure(POLARIZATION, Basis::Hadamard, Sampler::Random(&mut *rng))?;
            (duplex_decode(me.outcome, mp.outcome), me.probability * mp.probability)
        }
        None => {
            let dist = duplex_decode_distribution(&h.state)?;
            let mut best = ((0u8, 0u8), -1.0);
            for b1 in 0..2u8 {
                for b2 in 0..2u8 {
                    if dist[b1 as usize][b2 as usize] > best.1 {
                        best = ((b1, b2), dist[b1 as usize][b2 as usize]);
                    }
                }
            }
            best
        }
    };
    Ok(ProtocolOutcome {
        status: Status::Decoded,
        decoded_bits: Some(bits),
        output_states: None,
        announcement: None,
        herald_probability: h.herald_probability,
        closed_form_herald: h.closed_form_herald,
        coherent_herald: h.coherent_herald,
        ledger: *h.state.ledger(),
        erasure_cause: None,
        outcome_probability: prob,
        fidelities: None,
    })
}

/// Draws a uniformly random message.
pub fn random_duplex_message(rng: &mut impl Rng) -> DuplexMessage {
    DuplexMessage { b1: rng.gen_range(0..2), b2: rng.gen_range(0..2) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn encoding_map() {
        let h = FRAC_1_SQRT_2;
        let s = duplex_encode(DuplexMessage { b1: 0, b2: 0 });
        assert_eq!(s.amplitudes(), &[c(h), c(0.0), c(0.0), c(h)]);
        let s = duplex_encode(DuplexMessage { b1: 1, b2: 1 });
        let expect = [0.0, h, -h, 0.0];
        for (a, e) in s.amplitudes().iter().zip(expect) {
            assert!((a - c(e)).norm() < 1e-15);
        }
    }

    #[test]
    fn encoded_states_are_orthogonal() {
        let all = DuplexMessage::all().map(duplex_encode);
        for i in 0..4 {
            for j in 0..4 {
                let ov = all[i].overlap(&all[j]).unwrap().norm();
                assert!((ov - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dnot_matrix_is_unitary() {
        assert!(dnot_matrix().unitarity_deviation() < 1e-12);
    }

    #[test]
    fn dnot_on_bell_states() {
        let h = FRAC_1_SQRT_2;
        let out = dnot_ideal(&duplex_encode(DuplexMessage { b1: 0, b2: 0 })).unwrap();
        assert!((out.amplitudes()[0] - c(h)).norm() < 1e-12 && (out.amplitudes()[1] - c(h)).norm() < 1e-12);
        let out = dnot_ideal(&duplex_encode(DuplexMessage { b1: 1, b2: 1 })).unwrap();
        assert!((out.amplitudes()[2] - c(h)).norm() < 1e-12 && (out.amplitudes()[3] + c(h)).norm() < 1e-12);
    }

    #[test]
    fn decode_table() {
        assert_eq!(duplex_decode(0, 0), (0, 0));
        assert_eq!(duplex_decode(1, 1), (1, 1));
        assert_eq!(duplex_decode(0, 1), (1, 0));
    }

    #[test]
    fn analytic_herald_matches_zeta_c() {
        let p = ZenoParams::new(5, 1, 5).unwrap();
        let out = duplex_run(DuplexMessage { b1: 1, b2: 1 }, &p, Mode::Analytic, None).unwrap();
        assert!((out.herald_probability - zeta_c(5, 5).unwrap()).abs() < 1e-12);
        assert_eq!(out.decoded_bits, Some((1, 1)));
    }
}
