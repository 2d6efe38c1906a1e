use cfduplex_core::channels::reference::{best_duplex_capacity, Comparison};
use cfduplex_core::channels::*;
use cfduplex_core::protocols::QubitState;
use cfduplex_core::zeno::{lambda0, lambda1, zeta_c, zeta_q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Mutual information from the explicit 2×3 transition matrix
/// (outputs 0, 1, erasure), summed term by term.
fn mi_oracle(p: f64, l0: f64, l1: f64) -> f64 {
    let px = [1.0 - p, p];
    let w = [[l0, 0.0, 1.0 - l0], [0.0, l1, 1.0 - l1]];
    let py: Vec<f64> = (0..3).map(|y| px[0] * w[0][y] + px[1] * w[1][y]).collect();
    let mut i = 0.0;
    for x in 0..2 {
        for y in 0..3 {
            let joint = px[x] * w[x][y];
            if joint > 0.0 {
                i += joint * (w[x][y] / py[y]).log2();
            }
        }
    }
    i
}

fn grid_max(l0: f64, l1: f64) -> (f64, f64) {
    let mut best = (0.0, f64::NEG_INFINITY);
    for i in 0..=200_000 {
        let p = i as f64 / 200_000.0;
        let v = mi_oracle(p, l0, l1);
        if v > best.1 {
            best = (p, v);
        }
    }
    best
}

#[test]
fn mutual_information_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let ch = AsymmetricBec::new(rng.gen(), rng.gen()).unwrap();
        let p: f64 = rng.gen();
        assert!((bec_mutual_information(p, &ch) - mi_oracle(p, ch.lambda0, ch.lambda1)).abs() < 1e-12);
    }
}

#[test]
fn capacity_matches_grid_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let (l0, l1): (f64, f64) = (rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0));
        let r = bec_capacity(&AsymmetricBec::new(l0, l1).unwrap());
        let (p, c) = grid_max(l0, l1);
        assert!(r.capacity >= c - 1e-12, "({l0}, {l1})");
        assert!(r.capacity - c < 1e-8);
        assert!((r.p_star.unwrap() - p).abs() < 1e-3);
    }
}

#[test]
fn symmetric_channel_capacity_is_lambda() {
    for l in [0.0, 0.1, 0.37, 0.5, 0.9, 1.0] {
        let r = bec_capacity(&AsymmetricBec::new(l, l).unwrap());
        assert!((r.capacity - l).abs() < 1e-9);
        if l > 0.0 && l < 1.0 {
            assert!((r.p_star.unwrap() - 0.5).abs() < 1e-9);
        }
    }
}

#[test]
fn cqz_channel_capacity_within_bounds() {
    for n in [2, 10, 81, 300] {
        let (l0, l1) = (lambda0(2).unwrap(), lambda1(2, n).unwrap());
        let r = bec_capacity(&AsymmetricBec::new(l0, l1).unwrap());
        assert!(r.capacity >= l0.min(l1) - 1e-12 && r.capacity <= l0.max(l1) + 1e-12);
    }
}

#[test]
fn duplex_early_exit_matches_exhaustive() {
    for n in [1, 2, 3, 7, 16, 50, 128] {
        let (k, r) = optimize_duplex_k(n).unwrap();
        assert_eq!(k, exhaustive_duplex_k(n, default_ceiling(n)).unwrap(), "N={n}");
        assert!((r.capacity - 2.0 * zeta_c(n, k).unwrap()).abs() < 1e-15);
    }
}

#[test]
fn duplex_k_star_nondecreasing_over_doubling() {
    let mut prev_k = 0;
    let mut prev_c = 0.0;
    let mut n = 1;
    while n <= 512 {
        let (k, r) = optimize_duplex_k(n).unwrap();
        assert!(k >= prev_k, "K★ decreased at N={n}");
        assert!(r.capacity >= prev_c, "optimal C decreased at N={n}");
        prev_k = k;
        prev_c = r.capacity;
        n *= 2;
    }
}

#[test]
fn telex_joint_dominates_separable() {
    for (a, g) in [(0.5, 0.5), (0.2, 0.9), (0.0, 1.0)] {
        let w = MessageWeights::new(a, g).unwrap();
        for n in [10, 40] {
            let s = optimize_telex(n, w, Strategy::Separable).unwrap();
            let j = optimize_telex(n, w, Strategy::Joint).unwrap();
            assert!(j.zeta_q >= s.zeta_q - 1e-15);
            assert!((s.zeta_q - zeta_q(a, g, s.m_star, n, s.k_star).unwrap()).abs() < 1e-15);
        }
    }
}

#[test]
fn telex_capacity_floor() {
    assert_eq!(telex_capacity(0.3).unwrap(), 0.0);
    assert_eq!(telex_capacity(0.5).unwrap(), 0.0);
    assert!((telex_capacity(0.75).unwrap() - 1.0).abs() < 1e-15);
    assert!((telex_capacity(1.0).unwrap() - 2.0).abs() < 1e-15);
    assert!(telex_capacity(1.2).is_err());
}

#[test]
fn qec_swaps_at_rate_zeta() {
    let model = QecModel::new(0.7).unwrap();
    assert!((model.fidelity() - 0.7).abs() < 1e-15);
    let pair = (QubitState::basis(1), QubitState::real(0.6, 0.8).unwrap());
    assert_eq!(qec_apply(pair, &model, BranchSampler::Forced(QecBranch::Swap)), QecOutput::Swapped(pair.1, pair.0));
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let trials = 20_000;
    let swaps = (0..trials)
        .filter(|_| matches!(qec_apply(pair, &model, BranchSampler::Random(&mut rng)), QecOutput::Swapped(..)))
        .count();
    let sd = (0.7 * 0.3 / trials as f64).sqrt();
    assert!((swaps as f64 / trials as f64 - 0.7).abs() < 4.0 * sd);
}

#[test]
fn discrepancy_report_covers_every_reference() {
    let r = discrepancy_report().unwrap();
    for (id, q) in [
        ("telex-zeta-n100-half", "zeta_q"),
        ("telex-zeta-n100-classical", "zeta_q"),
        ("telex-opt-n218", "m_star"),
        ("telex-opt-n218", "k_star"),
        ("telex-opt-n218", "q"),
        ("cqz-bec-m2-n2", "capacity"),
        ("cqz-bec-m2-n2", "p_star"),
        ("cqz-bec-m2-n81", "capacity"),
        ("duplex-best-n512", "capacity"),
    ] {
        let c = r.get(id, q).unwrap_or_else(|| panic!("{id}/{q} missing"));
        assert!(c.formula_value.is_finite());
        match c.comparison {
            Comparison::Within => assert_eq!(c.within, c.abs_diff <= c.tolerance),
            Comparison::AtLeast => assert_eq!(c.within, c.formula_value >= c.reference_value),
        }
    }
    let (_, _, best) = best_duplex_capacity(512).unwrap();
    assert_eq!(r.get("duplex-best-n512", "capacity").unwrap().formula_value, best);
}
