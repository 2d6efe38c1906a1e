use cfduplex_core::montecarlo::*;
use cfduplex_core::protocols::{DuplexMessage, QubitState, TelexMessage};
use cfduplex_core::zeno::{zeta_c, zeta_q, ZenoParams};

fn duplex(b1: u8, b2: u8, n: u32, k: u32) -> ProtocolConfig {
    ProtocolConfig::Duplex { message: DuplexMessage::new(b1, b2).unwrap(), params: ZenoParams::new(n, 1, k).unwrap() }
}

fn telex(eta1: (f64, f64), eta2: (f64, f64), m: u32, n: u32, k: u32) -> ProtocolConfig {
    ProtocolConfig::Telex {
        message: TelexMessage {
            eta1: QubitState::real(eta1.0, eta1.1).unwrap(),
            eta2: QubitState::real(eta2.0, eta2.1).unwrap(),
        },
        params: ZenoParams::new(n, m, k).unwrap(),
    }
}

#[test]
fn same_seed_same_ensemble_any_pool_size() {
    let cfg = duplex(1, 1, 6, 3);
    let a = sample_protocol_with_workers(&cfg, 4000, 17, 1).unwrap();
    let b = sample_protocol_with_workers(&cfg, 4000, 17, 4).unwrap();
    assert_eq!(a, b);
    let c = sample_protocol(&cfg, 4000, 18).unwrap();
    assert_ne!(a.counts, c.counts);
}

#[test]
fn duplex_heralds_consistent_and_correct() {
    for m in DuplexMessage::all() {
        let cfg = duplex(m.b1, m.b2, 8, 4);
        let e = sample_protocol(&cfg, 20_000, 5).unwrap();
        assert!((e.expected_herald - zeta_c(8, 4).unwrap()).abs() < 1e-12);
        e.check_consistency(3.0).unwrap();
        assert_eq!(e.count(SUCCESS_INCORRECT), 0);
        assert_eq!(e.counts.values().sum::<u64>(), e.trials);
        let r = &e.empirical_rates[SUCCESS_CORRECT];
        assert!(r.wilson_low <= r.rate && r.rate <= r.wilson_high);
    }
}

#[test]
fn telex_heralds_consistent_and_correct() {
    let cfg = telex((0.6, 0.8), (0.28, 0.96), 6, 6, 3);
    let e = sample_protocol(&cfg, 20_000, 9).unwrap();
    let expected = zeta_q(0.36, 0.28 * 0.28, 6, 6, 3).unwrap();
    assert!((e.expected_herald - expected).abs() < 1e-12);
    e.check_consistency(3.0).unwrap();
    assert_eq!(e.count(SUCCESS_INCORRECT), 0);
    assert!(e.erasures_at("dcqz") > 0);
}

#[test]
fn orthogonal_telex_message_never_erases_at_dmqz() {
    // Δ₁ = |αγ|² + |βδ|² = 0
    let e = sample_protocol(&telex((1.0, 0.0), (0.0, 1.0), 5, 5, 4), 5_000, 2).unwrap();
    assert_eq!(e.erasures_at("dmqz"), 0);
    e.check_consistency(3.0).unwrap();
}

#[test]
fn wilson_interval_properties() {
    let (lo, hi) = wilson_interval(50, 100, Z95);
    assert!((lo + hi - 1.0).abs() < 1e-12);
    assert!(lo < 0.5 && hi > 0.5);
    // Known value: k = 8, n = 10 gives [0.4902, 0.9433] at 95%.
    let (lo, hi) = wilson_interval(8, 10, Z95);
    assert!((lo - 0.4902).abs() < 1e-4 && (hi - 0.9433).abs() < 1e-4);
    let (lo, hi) = wilson_interval(10, 10, Z95);
    assert!(hi > 1.0 - 1e-12 && lo < 1.0);
}
