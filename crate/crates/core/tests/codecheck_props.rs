use std::f64::consts::PI;

use proptest::prelude::*;
use qzero_core::codecheck::{
    build_code_family, build_code_vectors, verify_block_scalar, verify_code, verify_family_against_graph,
    CodeCandidate,
};
use qzero_core::graphspace::{subspace_l, subspace_lp_standard};
use qzero_core::matcore::{inner, orthonormalize_subspace, SubspaceBasis, C64, ONE, ZERO};
use qzero_core::span::tensor_subspace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pi_pair() -> CodeCandidate {
    build_code_vectors(1, 2, 4).unwrap()
}

#[test]
fn superactivation_pair_for_pi_over_three() {
    let c = build_code_vectors(2, 2, 16).unwrap();
    let s = tensor_subspace(&[subspace_l(PI / 3.0), subspace_l(2.0 * PI / 3.0)], 16).unwrap();
    assert!(verify_code(&s, &c, 1e-10).unwrap().pass);
}

#[test]
fn pass_does_not_depend_on_the_spanning_set() {
    for theta in [PI, 1.0] {
        let raw = subspace_l(theta);
        let ortho = orthonormalize_subspace(&raw).unwrap();
        let mixed = SubspaceBasis::new(
            raw.members()
                .iter()
                .enumerate()
                .map(|(k, m)| m.add(&raw.members()[(k + 1) % 4].scale(C64::new(0.5, -0.25))).unwrap())
                .collect(),
        )
        .unwrap();
        let expect = verify_code(&raw, &pi_pair(), 1e-9).unwrap().pass;
        assert_eq!(verify_code(&ortho, &pi_pair(), 1e-9).unwrap().pass, expect);
        assert_eq!(verify_code(&mixed, &pi_pair(), 1e-9).unwrap().pass, expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pass_survives_rotations_within_the_code(a in -PI..PI, b in -PI..PI, c in -PI..PI) {
        let base = pi_pair();
        // Generic 2×2 unitary.
        let (ca, sa) = (a.cos(), a.sin());
        let u = [
            [C64::from_polar(ca, b), C64::from_polar(sa, c)],
            [-C64::from_polar(sa, -c), C64::from_polar(ca, -b)],
        ];
        let vs: Vec<Vec<C64>> = (0..2)
            .map(|r| (0..4).map(|k| u[r][0] * base.vectors[0][k] + u[r][1] * base.vectors[1][k]).collect())
            .collect();
        let rotated = CodeCandidate::new(4, vs).unwrap();
        prop_assert!(verify_code(&subspace_l(PI), &rotated, 1e-10).unwrap().pass);
    }
}

#[test]
fn sum_pi_tuples_pass_and_perturbations_fail() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..20 {
        let n = 2 + trial % 2;
        let mut thetas: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-PI..PI)).collect();
        let k = rng.random_range(-1i32..=1);
        thetas.push(PI + 2.0 * PI * k as f64 - thetas.iter().sum::<f64>());
        let factors: Vec<SubspaceBasis> = thetas.iter().map(|&t| subspace_l(t)).collect();
        let family = build_code_family(n, 2, 4096).unwrap();
        let r = verify_family_against_graph(&factors, &family, 1e-9).unwrap();
        assert!(r.pass, "θ = {thetas:?}: {:?}", (r.max_offdiag, r.max_diag_spread));
        let mut bent = factors.clone();
        bent[0] = subspace_l(thetas[0] + 0.1);
        assert!(!verify_family_against_graph(&bent, &family, 1e-9).unwrap().pass);
    }
}

#[test]
fn family_vectors_are_orthonormal() {
    for (n, p) in [(1, 2), (2, 2), (3, 2), (2, 3)] {
        let f = build_code_family(n, p, 4096).unwrap();
        let all: Vec<&Vec<C64>> = f.members.iter().flat_map(|m| m.vectors.iter()).collect();
        for (i, u) in all.iter().enumerate() {
            for (j, v) in all.iter().enumerate() {
                let expect = if i == j { ONE } else { ZERO };
                assert!((inner(u, v) - expect).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn block_scalar_products_factor() {
    let f = build_code_family(2, 2, 16).unwrap();
    let l = subspace_l(PI / 2.0);
    let two = tensor_subspace(&[l.clone(), l.clone()], 16).unwrap();
    let r2 = verify_block_scalar(&two, &f, 1e-10).unwrap();
    assert!(r2.pass);
    let single = verify_block_scalar(&l, &build_code_family(1, 2, 4).unwrap(), 1e-10);
    // A single copy at π/2 has no code, so its compressions are not scalar.
    assert!(!single.unwrap().pass);
    // λ(A ⊗ A') picks out the identity components: only I ⊗ I survives.
    for (k, lam) in r2.lambdas.iter().enumerate() {
        let expect = if k == 0 { ONE } else { ZERO };
        assert!((lam - expect).norm() < 1e-10, "element {k}: {lam}");
    }
}

#[test]
fn block_scalar_for_higher_p() {
    let f = build_code_family(2, 3, 64).unwrap();
    let l = subspace_lp_standard(PI / 2.0, 3).unwrap();
    let s = tensor_subspace(&[l.clone(), l], 64).unwrap();
    let r = verify_block_scalar(&s, &f, 1e-9).unwrap();
    assert!(r.pass, "{}", r.max_deviation);
    assert!((r.lambdas[0] - ONE).norm() < 1e-12);
}
