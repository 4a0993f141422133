use gge_states::AffinityVector;
use hermitian_core::{frac_power, kron, CMat};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use transport_engine::{
    entropy_split, onsager_finite_difference, onsager_sld, onsager_ycov, ChargePair, CollisionSetup, FdScheme,
    DEFAULT_FD_STEP,
};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn random_hermitian(rng: &mut StdRng, d: usize) -> CMat {
    let m = CMat::from_fn(d, d, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&m + m.adjoint()) * c(0.5)
}

fn swap(d: usize) -> CMat {
    let mut s = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            s[(j * d + i, i * d + j)] = c(1.0);
        }
    }
    s
}

fn partial_swap(d: usize, theta: f64) -> CMat {
    CMat::identity(d * d, d * d) * c(theta.cos()) + swap(d) * Complex64::new(0.0, -theta.sin())
}

/// Nodes and weights on [0, 1] by Golub-Welsch.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = k as f64 / ((4 * k * k - 1) as f64).sqrt();
        j[(k, k - 1)] = b;
        j[(k - 1, k)] = b;
    }
    let e = SymmetricEigen::new(j);
    (0..n)
        .map(|i| (0.5 * (e.eigenvalues[i] + 1.0), e.eigenvectors[(0, i)].powi(2)))
        .collect()
}

fn random_setup(seed: u64, d: usize, theta: f64) -> CollisionSetup {
    let mut rng = StdRng::seed_from_u64(seed);
    let charges = vec![
        ChargePair::symmetric("q1", random_hermitian(&mut rng, d)),
        ChargePair::symmetric("q2", random_hermitian(&mut rng, d)),
    ];
    CollisionSetup::from_dense(d, d, charges, &partial_swap(d, theta)).unwrap()
}

/// `½ ∫ tr[ΔQ_k π^y ΔQ_l π^(1−y)] − ⟨ΔQ_k⟩⟨ΔQ_l⟩` with dense matrix powers.
fn quadrature_onsager(setup: &CollisionSetup, lam: &AffinityVector) -> DMatrix<f64> {
    let d = setup.d1();
    let s = setup.state_first(lam).unwrap();
    let pi = kron(&s.density, &s.density);
    let u = hermitian_core::sparse::to_dense(setup.unitary());
    let n = setup.num_charges();
    let dq: Vec<CMat> = setup
        .charges()
        .iter()
        .map(|p| {
            let q = kron(&p.first, &CMat::identity(d, d));
            u.adjoint() * &q * &u - q
        })
        .collect();
    let mean = |x: &CMat| (x * &pi).trace().re;
    let nodes = gauss_legendre(64);
    let mut l = DMatrix::zeros(n, n);
    for (y, w) in nodes {
        let py = frac_power(&pi, y).unwrap();
        let pc = frac_power(&pi, 1.0 - y).unwrap();
        for k in 0..n {
            for m in 0..n {
                l[(k, m)] += 0.5 * w * (&dq[k] * &py * &dq[m] * &pc).trace().re;
            }
        }
    }
    for k in 0..n {
        for m in 0..n {
            l[(k, m)] -= 0.5 * mean(&dq[k]) * mean(&dq[m]);
        }
    }
    l
}

fn max_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).iter().fold(0.0, |m, v| m.max(v.abs()))
}

#[test]
fn logarithmic_mean_route_matches_quadrature() {
    let setup = random_setup(7, 3, 0.45);
    let lam = AffinityVector::new(vec![0.6, -0.35]).unwrap();
    let oracle = quadrature_onsager(&setup, &lam);
    let rep = onsager_ycov(&setup, &lam).unwrap();
    assert!(max_diff(&oracle, &rep.l) < 1e-12, "{oracle} vs {}", rep.l);
}

#[test]
fn finite_difference_matches_closed_route() {
    let setup = random_setup(11, 3, 0.8);
    let lam = AffinityVector::new(vec![0.2, 0.9]).unwrap();
    let rep = onsager_ycov(&setup, &lam).unwrap();
    let fd = onsager_finite_difference(&setup, &lam, DEFAULT_FD_STEP, FdScheme::Richardson).unwrap();
    let rel = max_diff(&rep.l, &fd.l) / rep.norm_max();
    assert!(rel < 1e-9, "{rel}");
}

#[test]
fn blockwise_frame_agrees_with_local_route() {
    // d² = 289 exceeds the dense switch and the eigenvectors are dense.
    let setup = random_setup(3, 17, 0.3);
    let lam = AffinityVector::new(vec![0.25, 0.15]).unwrap();
    let y = onsager_ycov(&setup, &lam).unwrap();
    let s = onsager_sld(&setup, &lam).unwrap();
    assert!(max_diff(&y.l, &s.l) < 1e-12 * y.norm_max().max(1.0));
}

#[test]
fn swap_response_is_twice_local_covariance() {
    // For the full swap ΔQ = I⊗Q − Q⊗I, so L = Kubo-Mori covariance of Q.
    let mut rng = StdRng::seed_from_u64(5);
    let q = random_hermitian(&mut rng, 3);
    let setup = CollisionSetup::from_dense(3, 3, vec![ChargePair::symmetric("q", q.clone())], &swap(3)).unwrap();
    let lam = AffinityVector::new(vec![0.7]).unwrap();
    let s = setup.state_first(&lam).unwrap();
    let km = transport_engine::y_covariance_integral(&q, &q, &s).unwrap();
    let rep = onsager_ycov(&setup, &lam).unwrap();
    assert!((rep.l[(0, 0)] - km).abs() < 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn qubit_response_is_positive_and_consistent(theta in 0.05f64..1.5, a in -1.5f64..1.5, b in -1.5f64..1.5, da in -1.0f64..1.0, db in -1.0f64..1.0) {
        let sz = CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
        let sx = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let setup = CollisionSetup::from_dense(
            2, 2,
            vec![ChargePair::symmetric("sz", sz), ChargePair::symmetric("sx", sx)],
            &partial_swap(2, theta),
        ).unwrap();
        let lam = AffinityVector::new(vec![a, b]).unwrap();
        let y = onsager_ycov(&setup, &lam).unwrap();
        let s = onsager_sld(&setup, &lam).unwrap();
        prop_assert!(max_diff(&y.l, &s.l) < 1e-13);
        prop_assert!(y.min_eigenvalue > -1e-15);
        let split = entropy_split(&setup, &lam, &[da, db]).unwrap();
        prop_assert!(split.split_residual < 1e-14);
        prop_assert!(split.quantum >= -1e-16);
        prop_assert!((y.quadratic_form(&[da, db]) - split.sigma).abs() < 1e-13);
    }
}
