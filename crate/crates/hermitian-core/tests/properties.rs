use hermitian_core::{
    eig_hermitian, frac_power, kron, mat_func_hermitian, max_abs, partial_trace, symmetrize, CMat,
    Keep,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn matrix(n: usize) -> impl Strategy<Value = CMat> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
        .prop_map(move |v| CMat::from_iterator(n, n, v.into_iter().map(|(a, b)| Complex64::new(a, b))))
}

fn density(n: usize) -> impl Strategy<Value = CMat> {
    matrix(n).prop_map(move |a| {
        let m = &a * a.adjoint() + CMat::identity(n, n) * Complex64::new(1e-3, 0.0);
        let t = m.trace();
        m / t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectral_functions_are_hermitian(m in matrix(5)) {
        let h = symmetrize(&m);
        let f = mat_func_hermitian(&h, |x| x.exp()).unwrap();
        prop_assert!(max_abs(&(&f - f.adjoint())) <= 1e-12 * max_abs(&f).max(1.0));
    }

    #[test]
    fn complementary_fractional_powers(rho in density(4), k in 1usize..10) {
        let y = k as f64 / 10.0;
        let prod = frac_power(&rho, y).unwrap() * frac_power(&rho, 1.0 - y).unwrap();
        prop_assert!(max_abs(&(prod - &rho)) <= 1e-10);
    }

    #[test]
    fn partial_trace_inverts_kron(a in density(2), b in density(3)) {
        let ab = kron(&a, &b);
        let first = partial_trace(&ab, 2, 3, Keep::First).unwrap();
        let second = partial_trace(&ab, 2, 3, Keep::Second).unwrap();
        prop_assert!(max_abs(&(first - &a)) <= 1e-12);
        prop_assert!(max_abs(&(second - &b)) <= 1e-12);
    }

    #[test]
    fn eigenvectors_unitary_and_reconstruct(m in matrix(6)) {
        let h = symmetrize(&m);
        let e = eig_hermitian(&h).unwrap();
        let n = e.dim();
        prop_assert!(max_abs(&(e.eigenvectors.adjoint() * &e.eigenvectors - CMat::identity(n, n))) <= 1e-12);
        prop_assert!(max_abs(&(e.reconstruct() - &h)) <= 1e-10 * max_abs(&h));
    }
}
