use proptest::prelude::*;
use qzero_core::matcore::{
    kron, op_norm, partial_trace, psd_sqrt, subspace_distance, trace_norm, CMatrix, DensityMatrix, SubspaceBasis,
    C64,
};

fn entry() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn matrix(r: usize, c: usize) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec(entry(), r * c).prop_map(move |d| CMatrix::from_row_major(r, c, &d).unwrap())
}

fn psd(n: usize) -> impl Strategy<Value = CMatrix> {
    matrix(n, n).prop_map(|g| g.mul(&g.adjoint()))
}

fn density(n: usize) -> impl Strategy<Value = DensityMatrix> {
    psd(n).prop_filter_map("nonzero trace", |m| {
        let t = m.trace().re;
        (t > 1e-6).then(|| DensityMatrix::new(m.scale_re(1.0 / t)).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_bilinear(a in matrix(2, 3), b in matrix(2, 3), c in matrix(3, 2), s in entry()) {
        let lhs = kron(&a.add(&b.scale(s)).unwrap(), &c);
        let rhs = kron(&a, &c).add(&kron(&b, &c).scale(s)).unwrap();
        prop_assert!(lhs.distance(&rhs) < 1e-10);
        let lhs = kron(&c, &a.add(&b.scale(s)).unwrap());
        let rhs = kron(&c, &a).add(&kron(&c, &b).scale(s)).unwrap();
        prop_assert!(lhs.distance(&rhs) < 1e-10);
    }

    #[test]
    fn kron_norm_is_multiplicative(a in matrix(3, 2), b in matrix(2, 4)) {
        let lhs = op_norm(&kron(&a, &b));
        prop_assert!((lhs - op_norm(&a) * op_norm(&b)).abs() < 1e-9 * lhs.max(1.0));
    }

    #[test]
    fn partial_trace_keeps_states(rho in density(6)) {
        for keep in [[0usize], [1]] {
            let out = partial_trace(rho.matrix(), &[2, 3], &keep).unwrap();
            let st = DensityMatrix::new(out).unwrap();
            prop_assert!((st.matrix().trace().re - 1.0).abs() < 1e-12);
            prop_assert!(st.min_eigenvalue() > -1e-10);
        }
    }

    #[test]
    fn psd_sqrt_squares_back(a in psd(4)) {
        let r = psd_sqrt(&a).unwrap();
        prop_assert!(r.mul(&r).distance(&a) < 1e-10 * a.frobenius_norm().max(1.0));
        prop_assert!(r.is_hermitian(1e-10));
    }

    #[test]
    fn trace_norm_dominates_op_norm(a in matrix(3, 4)) {
        prop_assert!(trace_norm(&a) >= op_norm(&a) - 1e-12);
    }

    #[test]
    fn subspace_distance_is_a_pseudometric(
        a in proptest::collection::vec(matrix(2, 2), 2),
        b in proptest::collection::vec(matrix(2, 2), 2),
        c in proptest::collection::vec(matrix(2, 2), 2),
    ) {
        let (Ok(a), Ok(b), Ok(c)) = (SubspaceBasis::new(a), SubspaceBasis::new(b), SubspaceBasis::new(c)) else {
            return Ok(());
        };
        let ab = subspace_distance(&a, &b).unwrap();
        prop_assert!(subspace_distance(&a, &a).unwrap() < 1e-8);
        prop_assert!((ab - subspace_distance(&b, &a).unwrap()).abs() < 1e-8);
        let ac = subspace_distance(&a, &c).unwrap();
        let cb = subspace_distance(&c, &b).unwrap();
        prop_assert!(ab <= ac + cb + 1e-8);
    }
}
