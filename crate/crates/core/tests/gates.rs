use cfduplex_core::hilbert::{LossCause, StateVector, SubsystemSpec};
use cfduplex_core::zeno::*;
use num_complex::Complex64;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn photon(pol: usize) -> StateVector {
    StateVector::basis(vec![SubsystemSpec::qubit("p")], &[pol]).unwrap()
}

fn electron_photon(alpha: f64, pol: usize) -> StateVector {
    let beta = (1.0 - alpha * alpha).sqrt();
    StateVector::qubit("e", c(alpha), c(beta)).unwrap().tensor(&photon(pol)).unwrap()
}

fn params(n: u32, m: u32) -> ZenoParams {
    ZenoParams::new(n, m, 1).unwrap()
}

const MODES: [Mode; 2] = [Mode::Analytic, Mode::Cycle];

#[test]
fn qz_truth_table() {
    let rail = Rail::photon("p");
    for mode in MODES {
        for (variant, pass) in [(GateVariant::H, 0), (GateVariant::V, 1)] {
            for n in [1, 2, 5, 40] {
                let p = params(n, 1);
                let r = qz_gate(&photon(pass), variant, &Ao::Absent, &rail, &p, mode).unwrap();
                assert!((r.herald_probability - 1.0).abs() < 1e-12);
                assert!(r.output_state.amplitudes()[1 - pass].norm() > 1.0 - 1e-12);
                assert!(!r.counterfactual, "absence outcome is not counterfactual");

                let r = qz_gate(&photon(pass), variant, &Ao::Present, &rail, &p, mode).unwrap();
                let expect = p.theta_n().cos().powi(2 * n as i32);
                assert!((r.herald_probability - expect).abs() < 1e-12, "{mode:?} {variant:?} N={n}");
                assert!(r.counterfactual);
                if expect > 1e-20 {
                    assert!(r.output_state.fidelity(&photon(pass)).unwrap() > 1.0 - 1e-12);
                }
            }
        }
    }
}

#[test]
fn qz_presence_two_cycles() {
    let r = qz_gate(&photon(0), GateVariant::H, &Ao::Present, &Rail::photon("p"), &params(2, 1), Mode::Cycle).unwrap();
    assert!((r.herald_probability - 0.25).abs() < 1e-12);
    let r = qz_gate(&photon(0), GateVariant::H, &Ao::Present, &Rail::photon("p"), &params(1, 1), Mode::Cycle).unwrap();
    assert!(r.herald_probability < 1e-30);
}

#[test]
fn cqz_truth_table() {
    let rail = Rail::photon("p");
    for mode in MODES {
        for (variant, pass) in [(GateVariant::H, 0), (GateVariant::V, 1)] {
            for (m, n) in [(1, 1), (2, 2), (3, 7), (10, 100)] {
                let p = params(n, m);
                let r = cqz_gate(&photon(pass), variant, &Ao::Absent, &rail, &p, mode).unwrap();
                assert!((r.herald_probability - lambda0(m).unwrap()).abs() < 1e-12);
                assert!(r.counterfactual);
                if r.herald_probability > 0.0 {
                    assert!(r.output_state.fidelity(&photon(pass)).unwrap() > 1.0 - 1e-12);
                }
                assert!(r.ledger.get(LossCause::DiscardedAtDetector) > 0.0 || m == 0);

                let r = cqz_gate(&photon(pass), variant, &Ao::Present, &rail, &p, mode).unwrap();
                assert!((r.herald_probability - lambda1(m, n).unwrap()).abs() < 1e-12, "{mode:?} M={m} N={n}");
                assert!(r.counterfactual);
                if r.herald_probability > 0.0 {
                    assert!(r.output_state.fidelity(&photon(1 - pass)).unwrap() > 1.0 - 1e-12);
                }
            }
        }
    }
}

#[test]
fn cqz_hand_values() {
    let p = params(2, 2);
    let absent = cqz_gate(&photon(0), GateVariant::H, &Ao::Absent, &Rail::photon("p"), &p, Mode::Cycle).unwrap();
    assert!((absent.herald_probability - 0.25).abs() < 1e-12);
    let present = cqz_gate(&photon(0), GateVariant::H, &Ao::Present, &Rail::photon("p"), &p, Mode::Cycle).unwrap();
    assert!((present.herald_probability - 0.140625).abs() < 1e-12);
    let dead =
        cqz_gate(&photon(0), GateVariant::H, &Ao::Present, &Rail::photon("p"), &params(1, 1), Mode::Cycle).unwrap();
    assert_eq!(dead.herald_probability, 0.0);
}

#[test]
fn coherent_cqz_presence_agrees_only_at_two_cycles() {
    let run = |m, n| {
        cqz_gate(&photon(0), GateVariant::H, &Ao::Present, &Rail::photon("p"), &params(n, m), Mode::Cycle)
            .unwrap()
            .coherent_herald
            .unwrap()
    };
    assert!((run(2, 2) - 0.140625).abs() < 1e-12);
    assert!((run(3, 3) - lambda1(3, 3).unwrap()).abs() > 1e-3);
}

#[test]
fn ledger_matches_exposure() {
    let s = electron_photon(0.6, 0);
    let p = params(12, 4);
    for mode in MODES {
        let r = mqz_gate(&s, GateVariant::H, "e", &Rail::photon("p"), &p, mode).unwrap();
        assert!((r.channel_exposure + r.herald_probability - 1.0).abs() < 1e-12);
        assert!((r.output_state.total_probability() - 1.0).abs() < 1e-12);
        let r = cqz_gate(&s, GateVariant::H, &Ao::Quantum("e".into()), &Rail::photon("p"), &p, mode).unwrap();
        assert!((r.channel_exposure + r.herald_probability - 1.0).abs() < 1e-12);
        assert!(r.counterfactual);
    }
}

#[test]
fn mqz_reductions() {
    let rail = Rail::photon("p");
    for n in [1, 3, 10, 100] {
        let p = params(n, 1);
        let r = mqz_gate(&electron_photon(1.0, 0), GateVariant::H, "e", &rail, &p, Mode::Cycle).unwrap();
        assert!((r.herald_probability - qz_herald(1.0, n).unwrap()).abs() < 1e-12);
        assert!((r.coherent_herald.unwrap() - r.herald_probability).abs() < 1e-12);
        let r = mqz_gate(&electron_photon(0.0, 0), GateVariant::H, "e", &rail, &p, Mode::Cycle).unwrap();
        assert!(r.herald_probability < 1e-30);
        assert!(r.counterfactual);
    }
}

#[test]
fn mqz_heralds_collapsed_pair() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let p = params(10, 1);
    for mode in MODES {
        let r = mqz_gate(&electron_photon(h, 0), GateVariant::H, "e", &Rail::photon("p"), &p, mode).unwrap();
        assert!((r.herald_probability - mqz_closed_form(0.5, 10).unwrap()).abs() < 1e-12);
        let up_h = StateVector::basis(vec![SubsystemSpec::qubit("e"), SubsystemSpec::qubit("p")], &[0, 0]).unwrap();
        assert!(r.output_state.fidelity(&up_h).unwrap() > 1.0 - 1e-12);
        // V-variant: ↓ is presence, V passes through.
        let r = mqz_gate(&electron_photon(h, 1), GateVariant::V, "e", &Rail::photon("p"), &p, mode).unwrap();
        let down_v = StateVector::basis(vec![SubsystemSpec::qubit("e"), SubsystemSpec::qubit("p")], &[1, 1]).unwrap();
        assert!(r.output_state.fidelity(&down_v).unwrap() > 1.0 - 1e-12);
    }
}

#[test]
fn mqz_coherent_herald_is_reported() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for n in [10, 100, 1000] {
        let r = mqz_gate(&electron_photon(h, 0), GateVariant::H, "e", &Rail::photon("p"), &params(n, 1), Mode::Cycle)
            .unwrap();
        let coherent = r.coherent_herald.unwrap();
        assert!((coherent - 0.5 * params(n, 1).theta_n().cos().powi(2 * n as i32)).abs() < 1e-12);
        let rel = r.coherent_relative_difference().unwrap();
        assert!(rel > 0.0);
    }
    // The relative gap shrinks like 1/N and is within 2% from N = 100 on.
    let gap = |n| {
        mqz_gate(&electron_photon(h, 0), GateVariant::H, "e", &Rail::photon("p"), &params(n, 1), Mode::Cycle)
            .unwrap()
            .coherent_relative_difference()
            .unwrap()
    };
    assert!(gap(10) > 0.02 && gap(100) <= 0.02 && gap(1000) < gap(100));
}

fn dual_rail(alpha: f64, gamma: f64) -> StateVector {
    // α|↑> + β|↓>  ⊗  γ|H,0> + δ|V,1>
    let beta = (1.0 - alpha * alpha).sqrt();
    let delta = (1.0 - gamma * gamma).sqrt();
    let e = StateVector::qubit("e", c(alpha), c(beta)).unwrap();
    let mut amps = vec![c(0.0); 8];
    amps[0] = c(gamma); // H, path 0
    amps[4 + 1] = c(delta); // V, path 1
    let pc = StateVector::new(vec![SubsystemSpec::qubit("p"), SubsystemSpec::new("c", 4).unwrap()], amps).unwrap();
    e.tensor(&pc).unwrap()
}

#[test]
fn dmqz_reductions_and_closed_form() {
    let p = params(25, 1);
    for mode in MODES {
        let r = dmqz_gate(&dual_rail(1.0, 1.0), "e", "p", ("c", 0), ("c", 1), &p, mode).unwrap();
        assert!((r.herald_probability - p.theta_n().cos().powi(50)).abs() < 1e-12);
        let r = dmqz_gate(&dual_rail(1.0, 0.0), "e", "p", ("c", 0), ("c", 1), &p, mode).unwrap();
        assert!(r.herald_probability < 1e-30);
        for (a, g) in [(0.6, 0.8), (0.3, 0.5), (0.9, 0.1)] {
            let r = dmqz_gate(&dual_rail(a, g), "e", "p", ("c", 0), ("c", 1), &p, mode).unwrap();
            let d1 = delta1(a * a, g * g).unwrap();
            assert!((r.herald_probability - mqz_closed_form(d1, 25).unwrap()).abs() < 1e-12);
            assert!(r.counterfactual);
        }
    }
    assert!(dmqz_gate(&dual_rail(1.0, 1.0), "e", "p", ("c", 0), ("c", 0), &p, Mode::Cycle).is_err());
}

#[test]
fn dmqz_single_rail_matches_mqz() {
    let p = params(9, 1);
    let s = dual_rail(0.6, 1.0);
    let d = dmqz_gate(&s, "e", "p", ("c", 0), ("c", 1), &p, Mode::Cycle).unwrap();
    let m = mqz_gate(&s, GateVariant::H, "e", &Rail::on_path("p", "c", 0), &p, Mode::Cycle).unwrap();
    assert!((d.herald_probability - m.herald_probability).abs() < 1e-12);
}

#[test]
fn dcqz_heralds_cnot() {
    let p = params(100, 10);
    for mode in MODES {
        for (a, g) in [(1.0, 0.6), (0.0, 0.6), (std::f64::consts::FRAC_1_SQRT_2, 0.8)] {
            let s = dual_rail(a, g);
            let r = dcqz_entangle(&s, "e", "p", ("c", 0), ("c", 1), &p, mode).unwrap();
            assert!((r.herald_probability - lambda3(a * a, 10, 100).unwrap()).abs() < 1e-12, "{mode:?} α={a}");
            // CNOT: electron control, polarization target.
            let cnot =
                cfduplex_core::hilbert::LocalUnitary::new(cfduplex_core::hilbert::ops::cnot(), &["e", "p"]).unwrap();
            let ideal = s.apply_unitary(&cnot).unwrap();
            assert!(r.output_state.fidelity(&ideal).unwrap() > 1.0 - 1e-9);
        }
    }
    assert!((lambda3(1.0, 10, 100).unwrap() - lambda0(10).unwrap()).abs() < 1e-12);
    assert!((lambda3(0.0, 10, 100).unwrap() - lambda1(10, 100).unwrap()).abs() < 1e-12);
}

#[test]
fn wrong_input_polarization_is_rejected() {
    let err = qz_gate(&photon(1), GateVariant::H, &Ao::Present, &Rail::photon("p"), &params(3, 1), Mode::Cycle);
    assert!(err.is_err());
    let err = qz_gate(&photon(0), GateVariant::H, &Ao::Present, &Rail::photon("x"), &params(3, 1), Mode::Cycle);
    assert!(err.is_err());
}

#[test]
fn cycle_events_multiply_to_herald() {
    let s = dual_rail(0.6, 0.8);
    let r = dcqz_entangle(&s, "e", "p", ("c", 0), ("c", 1), &params(6, 4), Mode::Cycle).unwrap();
    let survive: f64 = r.events.iter().map(|e| 1.0 - e.probability).product();
    assert!((survive - r.herald_probability).abs() < 1e-12);
}
