use cfduplex_core::hilbert::{Basis, Sampler, StateVector, SubsystemSpec};
use cfduplex_core::protocols::*;
use cfduplex_core::zeno::{lambda2, Mode, ZenoParams};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [Mode; 2] = [Mode::Analytic, Mode::Cycle];

fn zp(n: u32, m: u32, k: u32) -> ZenoParams {
    ZenoParams::new(n, m, k).unwrap()
}

#[test]
fn duplex_round_trip() {
    for mode in MODES {
        for (n, k) in [(1, 1), (10, 1), (1, 2), (3, 2), (5, 5), (20, 10)] {
            for msg in DuplexMessage::all() {
                let out = duplex_run(msg, &zp(n, 1, k), mode, None).unwrap();
                assert_eq!(out.status, Status::Decoded);
                assert_eq!(out.decoded_bits, Some((msg.b1, msg.b2)));
                assert!(out.outcome_probability > 1.0 - 1e-9, "{mode:?} N={n} K={k} {msg:?}");
                let lost = out.ledger.total();
                assert!((lost + out.herald_probability - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn duplex_herald_is_zeta_c_in_both_modes() {
    for mode in MODES {
        let out = duplex_run(DuplexMessage { b1: 1, b2: 1 }, &zp(5, 1, 5), mode, None).unwrap();
        assert!((out.herald_probability - lambda2(5, 5).unwrap().powi(5)).abs() < 1e-12);
    }
}

#[test]
fn duplex_sampled_decode_matches() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for msg in DuplexMessage::all() {
        let out = duplex_run(msg, &zp(8, 1, 4), Mode::Cycle, Some(&mut rng)).unwrap();
        assert_eq!(out.decoded_bits, Some((msg.b1, msg.b2)));
    }
}

/// Full pipeline against the ideal DNOT: the heralded `[e, p, c]` state has
/// the path in `|0>` and `[e, p]` equal to DNOT of the encoded Bell state.
#[test]
fn duplex_pipeline_equals_dnot() {
    for mode in MODES {
        for msg in DuplexMessage::all() {
            let h = duplex_heralded(msg, &zp(12, 1, 6), mode).unwrap();
            let (path, purity) = h.state.factor(PATH).unwrap();
            assert!(purity > 1.0 - 1e-9 && path[0].norm() > 1.0 - 1e-9);
            let ideal = dnot_ideal(&duplex_encode(msg)).unwrap();
            let ep = h.state.measure(PATH, Basis::Computational, Sampler::Forced(0)).unwrap().post_state;
            let ideal3 = ideal.tensor(&StateVector::basis(vec![SubsystemSpec::qubit(PATH)], &[0]).unwrap()).unwrap();
            let f = ideal3.fidelity(&ep).unwrap();
            assert!(f > 1.0 - 1e-9, "{mode:?} {msg:?} fidelity {f}");
        }
    }
}

fn telex_msg(a: f64, g: f64, pa: f64, pg: f64) -> TelexMessage {
    let q = |x: f64, ph: f64| {
        QubitState::new(Complex64::new(x, 0.0), Complex64::from_polar((1.0 - x * x).sqrt(), ph)).unwrap()
    };
    TelexMessage { eta1: q(a, pa), eta2: q(g, pg) }
}

#[test]
fn telex_basis_exchange() {
    let m = TelexMessage { eta1: QubitState::basis(1), eta2: QubitState::basis(0) };
    for mode in MODES {
        let out = telex_run(&m, &zp(30, 5, 4), mode, Announcement::Forced(0)).unwrap();
        let (alice, bob) = out.output_states.unwrap();
        assert!(alice.fidelity(&QubitState::basis(0)) > 1.0 - 1e-9);
        assert!(bob.fidelity(&QubitState::basis(1)) > 1.0 - 1e-9);
    }
}

#[test]
fn telex_plus_states_both_announcements() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = QubitState::real(h, h).unwrap();
    let m = TelexMessage { eta1: plus, eta2: plus };
    for mu in [0, 1] {
        let out = telex_run(&m, &zp(30, 5, 4), Mode::Cycle, Announcement::Forced(mu)).unwrap();
        let (alice, bob) = out.output_states.unwrap();
        assert!(alice.fidelity(&plus) > 1.0 - 1e-9 && bob.fidelity(&plus) > 1.0 - 1e-9);
        assert!((out.outcome_probability - 0.5).abs() < 1e-9);
    }
}

#[test]
fn telex_random_messages() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let p = zp(40, 6, 5);
    for _ in 0..20 {
        let m = TelexMessage { eta1: random_qubit(&mut rng), eta2: random_qubit(&mut rng) };
        for mode in MODES {
            for mu in [0, 1] {
                let out = telex_run(&m, &p, mode, Announcement::Forced(mu)).unwrap();
                let (fa, fb) = out.fidelities.unwrap();
                assert!(fa > 1.0 - 1e-9 && fb > 1.0 - 1e-9, "{mode:?} μ={mu} {fa} {fb}");
                assert!((out.ledger.total() + out.herald_probability - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn telex_cycle_herald_matches_closed_form() {
    let m = telex_msg(0.6, 0.3, 0.4, 1.1);
    let h = telex_heralded(&m, &zp(50, 7, 6), Mode::Cycle).unwrap();
    assert!((h.herald_probability - h.closed_form_herald).abs() < 1e-12);
    assert!(h.coherent_herald.is_some());
}

/// Embeds a 2-level-ancilla state into the pipeline's 4-level ancilla layout.
fn widen_ancilla(s: &StateVector) -> StateVector {
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    for e in 0..2 {
        for p in 0..2 {
            for c in 0..2 {
                amps[8 * e + 4 * p + c] = s.amplitude(&[e, p, c]);
            }
        }
    }
    StateVector::new(
        vec![SubsystemSpec::qubit(ELECTRON), SubsystemSpec::qubit(POLARIZATION), SubsystemSpec::new(PATH, 4).unwrap()],
        amps,
    )
    .unwrap()
}

/// Telex pipeline against ideal DDNOT plus the local decode circuit, on a
/// 16-point amplitude grid.
#[test]
fn telex_pipeline_equals_ddnot() {
    let grid = [0.0, 0.35, 0.8, 1.0];
    for &a in &grid {
        for &g in &grid {
            let m = telex_msg(a, g, 0.3, -0.7);
            // ddnot_ideal labels (a, b, c) are (electron, photon, ancilla).
            let ideal = widen_ancilla(&ddnot_ideal(&m));
            for mode in MODES {
                let h = telex_heralded(&m, &zp(20, 4, 3), mode).unwrap();
                let f = h.state.fidelity(&ideal).unwrap();
                assert!(f > 1.0 - 1e-9, "a={a} g={g} {mode:?} fidelity {f}");
                let got = telex_pre_announcement(&h.state).unwrap();
                let want = telex_pre_announcement(&ideal).unwrap();
                for mu in [0u8, 1] {
                    let (Ok(x), Ok(y)) =
                        (telex_decode(&got, Announcement::Forced(mu)), telex_decode(&want, Announcement::Forced(mu)))
                    else {
                        panic!("μ = {mu} impossible");
                    };
                    assert!(x.alice.fidelity(&y.alice) > 1.0 - 1e-9 && x.bob.fidelity(&y.bob) > 1.0 - 1e-9);
                    assert!(y.alice.fidelity(&m.eta2) > 1.0 - 1e-9 && y.bob.fidelity(&m.eta1) > 1.0 - 1e-9);
                }
            }
        }
    }
}

#[test]
fn announcement_is_uniform() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let m = TelexMessage { eta1: random_qubit(&mut rng), eta2: random_qubit(&mut rng) };
        let h = telex_heralded(&m, &zp(10, 3, 3), Mode::Analytic).unwrap();
        let psi4 = telex_pre_announcement(&h.state).unwrap();
        let probs = psi4.outcome_probabilities(PATH, Basis::Computational).unwrap();
        assert!((probs[0] - 0.5).abs() < 1e-9 && (probs[1] - 0.5).abs() < 1e-9);
    }
}
