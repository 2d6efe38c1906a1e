use cfduplex_core::hilbert::{LocalUnitary, LossCause, StateVector, SubsystemSpec};
use cfduplex_core::zeno::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn amps(dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let n = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            v.into_iter().map(|(a, b)| Complex64::new(a / n, b / n)).collect()
        })
}

fn state(labels: &[(&str, usize)], a: Vec<Complex64>) -> StateVector {
    StateVector::new(labels.iter().map(|(l, d)| SubsystemSpec::new(*l, *d).unwrap()).collect(), a).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn tensor_of_normalized_states_is_normalized(a in amps(2), b in amps(3)) {
        let s = state(&[("x", 2)], a).tensor(&state(&[("y", 3)], b)).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert_eq!(s.dim(), 6);
    }

    #[test]
    fn absorption_conserves_probability(a in amps(8), level in 0usize..2, theta in -3.0f64..3.0) {
        let s = state(&[("x", 2), ("y", 2), ("z", 2)], a);
        let s = s.apply_unitary(&LocalUnitary::rotation("y", theta)).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        let t = s.absorb(|d| d[1] == level, LossCause::AbsorbedByAo);
        prop_assert!((t.total_probability() - 1.0).abs() < 1e-12);
        prop_assert!(t.norm_sqr() <= 1.0 + 1e-12);
    }

    #[test]
    fn disjoint_absorptions_commute(a in amps(12), i in 0usize..2, j in 0usize..3) {
        let s = state(&[("x", 2), ("y", 3), ("z", 2)], a);
        let ab = s.absorb(|d| d[0] == i, LossCause::AbsorbedByAo).absorb(|d| d[1] == j, LossCause::DiscardedAtDetector);
        let ba = s.absorb(|d| d[1] == j, LossCause::DiscardedAtDetector).absorb(|d| d[0] == i, LossCause::AbsorbedByAo);
        for (p, q) in ab.amplitudes().iter().zip(ba.amplitudes()) {
            prop_assert!((p - q).norm() < 1e-15);
        }
        prop_assert!((ab.total_probability() - ba.total_probability()).abs() < 1e-12);
    }

    #[test]
    fn permute_round_trips(a in amps(12)) {
        let s = state(&[("x", 2), ("y", 3), ("z", 2)], a);
        let t = s.permute(&["z", "x", "y"]).unwrap().permute(&["x", "y", "z"]).unwrap();
        prop_assert_eq!(s.amplitudes(), t.amplitudes());
        prop_assert_eq!(s.amplitude(&[1, 2, 0]), s.permute(&["y", "z", "x"]).unwrap().amplitude(&[2, 0, 1]));
    }

    #[test]
    fn lambdas_nondecreasing_under_doubling(m in 1u32..20, n in 1u32..200, k in 1u32..20) {
        prop_assert!(lambda1(m, 2 * n).unwrap() >= lambda1(m, n).unwrap() - 1e-15);
        prop_assert!(lambda2(2 * n, k).unwrap() >= lambda2(n, k).unwrap() - 1e-15);
        prop_assert!(lambda0(2 * m).unwrap() >= lambda0(m).unwrap() - 1e-15);
    }

    #[test]
    fn zeta_q_independent_of_gamma_at_half(g1 in 0.0f64..=1.0, g2 in 0.0f64..=1.0, m in 1u32..20, n in 1u32..200, k in 1u32..20) {
        let a = zeta_q(0.5, g1, m, n, k).unwrap();
        let b = zeta_q(0.5, g2, m, n, k).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn lambda4_power_grows_as_delta_shrinks(d in 0.0f64..=1.0, f in 0.0f64..1.0, n in 1u32..200, k in 1u32..30) {
        let hi = lambda4(d, n, k).unwrap().powi(k as i32);
        let lo = lambda4(d * f, n, k).unwrap().powi(k as i32);
        prop_assert!(lo >= hi - 1e-15);
        prop_assert!((lambda4(0.0, n, k).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cycle_heralds_match_closed_forms(alpha_sq in 0.0f64..=1.0, n in 1u32..30, m in 1u32..6) {
        let e = StateVector::qubit("e", Complex64::new(alpha_sq.sqrt(), 0.0), Complex64::new((1.0 - alpha_sq).sqrt(), 0.0)).unwrap();
        let s = e.tensor(&StateVector::basis(vec![SubsystemSpec::qubit("p")], &[0]).unwrap()).unwrap();
        let p = ZenoParams::new(n, m, 1).unwrap();
        let ao = Ao::Quantum("e".into());
        for f in [qz_gate, cqz_gate] {
            let c = f(&s, GateVariant::H, &ao, &Rail::photon("p"), &p, Mode::Cycle).unwrap();
            let a = f(&s, GateVariant::H, &ao, &Rail::photon("p"), &p, Mode::Analytic).unwrap();
            prop_assert!((c.herald_probability - c.closed_form).abs() < 1e-12);
            prop_assert!((a.herald_probability - a.closed_form).abs() < 1e-12);
            prop_assert!(c.output_state.fidelity(&a.output_state).unwrap() > 1.0 - 1e-9);
            prop_assert!((c.output_state.total_probability() - 1.0).abs() < 1e-12);
        }
        let r = mqz_gate(&s, GateVariant::H, "e", &Rail::photon("p"), &p, Mode::Cycle).unwrap();
        prop_assert!((r.herald_probability - mqz_closed_form(alpha_sq, n).unwrap()).abs() < 1e-12);
    }
}
