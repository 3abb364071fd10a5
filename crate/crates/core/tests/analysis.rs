mod common;

use facial_thue::analysis::*;
use num_bigint::BigUint;
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn definition_matches_dynamic_programming() {
    for delta in 1..=8u64 {
        for m in 1..=12 {
            assert_eq!(
                a_def(m, delta),
                BigUint::from(common::a_dp(m, delta as u128)),
                "Δ={delta} m={m}"
            );
        }
    }
}

#[test]
fn recurrences_agree_far_out() {
    for delta in [1u64, 2, 3, 7, 50] {
        let x = a_sequence(Recurrence::ByLastBlock, 60, delta);
        let y = a_sequence(Recurrence::Differenced, 60, delta);
        let z = a_sequence(Recurrence::ThreeTerm, 60, delta);
        assert_eq!(x, y);
        assert_eq!(y, z);
    }
    assert_eq!(a_rec(4, 3), BigUint::from(373u32));
}

#[test]
fn roots_against_bisection() {
    for delta in 3..=200u64 {
        let r = char_roots(delta).unwrap();
        let b = common::bisect_root(delta);
        assert!((r.lambda0 - b).abs() < 1e-9 * b, "Δ={delta}");
        let (p1, p2) = common::deflated_pair(delta, b);
        let mut got = [(r.lambda1.re, r.lambda1.im), (r.lambda2.re, r.lambda2.im)];
        let mut want = [p1, p2];
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert!(
                (g.0 - w.0).abs() < 1e-6 && (g.1 - w.1).abs() < 1e-6,
                "Δ={delta}: {got:?} vs {want:?}"
            );
        }
        assert!(r.dominant());
        assert_eq!(r.all_real(), delta >= 4);
        for z in r.all() {
            let scale = 1.0 + r.lambda0.powi(3);
            assert!(
                char_poly(delta, z).norm() < 1e-12 * scale,
                "Δ={delta} residual at {z}"
            );
        }
        if let Some(phi) = r.phi {
            assert!(phi > 0.0 && phi < std::f64::consts::PI / 6.0);
        }
    }
    assert!(char_poly(4, Complex64::new(-1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn discriminant_decides_real_roots() {
    assert!(discriminant(3) > 0.0);
    for delta in 4..=100 {
        assert!(discriminant(delta) < 0.0);
    }
}

#[test]
fn list_size_over_a_wide_range() {
    let mut prev = 0;
    for delta in (4..=100_000u64).step_by(97) {
        let s = list_size(delta).unwrap();
        assert!(
            s.below_five_delta && s.margin_certified && s.ceiling_certified,
            "Δ={delta}"
        );
        assert!(s.l >= prev);
        prev = s.l;
        // The ceiling leaves a slack in [-1, 0), so the stronger chain never holds.
        assert!(s.chain_slack < 0.0 && s.chain_slack >= -1.0 - 1e-9);
    }
    assert!(excess_over_two(1_000_000) < 0.01);
    let s = list_size(1_000_000).unwrap();
    assert!((s.l as f64 / 1e6) < 2.01);
}

#[test]
fn growth_ratios_converge() {
    let g = growth_certificate(3, 40, 1e-6).unwrap();
    assert!(g.converged);
    assert!(g.lambda0_squared_below_list);
    assert_eq!(g.list_length, 15);
    assert!((g.ratios[0] - 25.0 / 7.0).abs() < 1e-12);
    // The error oscillates, so it is not monotone for Δ = 3.
    assert!(!g.error_monotone);
    for delta in 4..=30 {
        let g = growth_certificate(delta, 400, 1e-9).unwrap();
        assert!(g.converged, "Δ={delta}: {}", g.final_error);
        assert!(g.lambda0_squared_below_list);
    }
}

#[test]
fn ratios_of_huge_integers() {
    let a = a_rec(3000, 5);
    let b = a_rec(2999, 5);
    let r = big_ratio(&a, &b);
    assert!((r - char_roots(5).unwrap().lambda0).abs() < 1e-9);
}

proptest! {
    #[test]
    fn weight_is_reversal_invariant(mask in any::<u16>(), m in 1usize..16, delta in 1u64..10) {
        let s = SignSequence::from_mask(m, mask as u64 & ((1 << m) - 1));
        prop_assert_eq!(f_weight(&s, delta), f_weight(&s.reversed(), delta));
        let blocks: u64 = s.minus_blocks().iter().sum();
        prop_assert_eq!(blocks as usize, s.as_slice().iter().filter(|&&x| x == -1).count());
    }

    #[test]
    fn sequence_is_increasing(delta in 1u64..20, m in 2usize..40) {
        let a = a_sequence(Recurrence::ThreeTerm, m, delta);
        prop_assert!(a.windows(2).all(|w| w[0] < w[1]));
    }
}
