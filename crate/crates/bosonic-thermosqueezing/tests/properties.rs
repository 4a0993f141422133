use bosonic_thermosqueezing::{
    closed_form_onsager, closed_form_r, heat_squeezing_onsager, symplectic_charge_check, thermo_coefficients,
    MomentVariant, SqueezingPoint, SymplecticMatrix,
};
use hermitian_core::{unitary_exp, CMat};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn coefficients_are_monotone_on_a_grid() {
    let betas = grid(0.5, 3.0, 10);
    let rs = grid(0.0, 1.5, 10);
    for (which, f) in [
        ("L", closed_form_onsager as fn(&SqueezingPoint, MomentVariant) -> DMatrix<f64>),
        ("L'", heat_squeezing_onsager),
    ] {
        for idx in [(0, 0), (0, 1), (1, 1)] {
            let at = |b: f64, r: f64| f(&SqueezingPoint::from_r(b, r, 1.0, 0.6).unwrap(), MomentVariant::Exact)[idx];
            for &r in &rs {
                for w in betas.windows(2) {
                    if idx != (0, 1) || r > 0.0 {
                        assert!(at(w[1], r) < at(w[0], r), "{which}{idx:?} not decreasing in beta at r={r}");
                    }
                }
            }
            for &b in &betas {
                for w in rs.windows(2) {
                    // L'_QQ carries a factor 1 − μ² and falls with squeezing.
                    if which == "L'" && idx == (0, 0) {
                        continue;
                    }
                    assert!(at(b, w[1]) > at(b, w[0]), "{which}{idx:?} not increasing in r at beta={b}");
                }
            }
        }
    }
}

fn random_passive(h: [f64; 4], t: f64) -> SymplecticMatrix {
    let herm = CMat::from_row_slice(
        2,
        2,
        &[
            Complex64::new(h[0], 0.0),
            Complex64::new(h[1], h[2]),
            Complex64::new(h[1], -h[2]),
            Complex64::new(h[3], 0.0),
        ],
    );
    let u = unitary_exp(&herm, t).unwrap();
    SymplecticMatrix::passive(&u.map(|z| z.re), &u.map(|z| z.im)).unwrap()
}

proptest! {
    #[test]
    fn thermo_identities(beta in 0.2f64..4.0, r in 0.01f64..2.5) {
        let p = SqueezingPoint::from_r(beta, r, 1.0, 1.0).unwrap();
        let c = thermo_coefficients(&p, MomentVariant::Exact).unwrap();
        prop_assert!((c.pi - c.temperature * c.s).abs() <= 1e-12 * c.pi.abs());
        prop_assert!(c.zt > 0.0 && c.zt < 1.0);
        prop_assert!((c.l_qa - c.l_aq).abs() == 0.0);
    }

    #[test]
    fn r_is_positive_and_increasing(alpha in 1e-3f64..30.0) {
        let r = closed_form_r(alpha).unwrap();
        prop_assert!(r > 0.0);
        prop_assert!(closed_form_r(1.01 * alpha).unwrap() > r);
    }

    #[test]
    fn passive_maps_with_mixing_break_squeezing(h in prop::array::uniform4(-1.0f64..1.0), t in 0.1f64..2.0) {
        let v = random_passive(h, t);
        let y = v.matrix().view((0, 2), (2, 2)).into_owned();
        prop_assume!(y.iter().any(|e| e.abs() > 1e-3));
        let c = symplectic_charge_check(&v);
        prop_assert!(c.preserved[0]);
        prop_assert!(!c.preserved[1] || !c.preserved[2]);
    }
}
