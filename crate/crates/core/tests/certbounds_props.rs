use std::f64::consts::PI;

use proptest::prelude::*;
use qzero_core::certbounds::{
    angle_budget, capacity_lower_bound, certify, delta_p, product_bound, theta_threshold,
};

#[test]
fn delta_is_nondecreasing() {
    let values: Vec<f64> = (1..=12).map(|p| delta_p(p).unwrap()).collect();
    for w in values.windows(2) {
        assert!(w[1] >= w[0] - 1e-12);
    }
}

#[test]
fn threshold_decreases_in_n_and_p() {
    for p in 2..=5 {
        for n in 1..=20 {
            assert!(theta_threshold(p, n + 1).unwrap() < theta_threshold(p, n).unwrap());
            assert!(theta_threshold(p + 1, n).unwrap() <= theta_threshold(p, n).unwrap());
        }
    }
}

#[test]
fn copy_count_is_minimal() {
    for p in 2..=4 {
        for n in 1..=12 {
            let r = capacity_lower_bound(n, p).unwrap();
            assert!(PI / (r.m as f64) < r.theta_n);
            assert!(PI / ((r.m - 1) as f64) > r.theta_n);
            if p == 2 {
                assert!((r.theta_n - angle_budget() / n as f64).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn certificates_hold_on_the_capacity_bound_angle() {
    for p in 2..=4 {
        for n in 1..=6 {
            let r = capacity_lower_bound(n, p).unwrap();
            let c = certify(&vec![r.theta_star; n], p).unwrap();
            assert!(c.verdict, "p = {p}, n = {n}: {:?}", c.first_violation);
        }
    }
}

proptest! {
    #[test]
    fn repeated_products(x in 0.0..2.0f64, n in 1usize..10) {
        let direct = (1.0 + x).powi(n as i32) - 1.0;
        prop_assert!((product_bound(&vec![x; n]).unwrap() - direct).abs() <= 1e-12 * direct.max(1.0));
    }

    #[test]
    fn verdict_matches_the_chain(thetas in proptest::collection::vec(-1.0..1.0f64, 1..5)) {
        let c = certify(&thetas, 2).unwrap();
        prop_assert_eq!(c.verdict, c.chain.iter().all(|e| e.holds));
        let sum: f64 = thetas.iter().map(|t| t.abs()).sum();
        prop_assert_eq!(c.verdict, sum <= angle_budget() + 1e-12);
    }
}
