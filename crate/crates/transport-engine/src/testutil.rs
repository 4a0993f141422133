use hermitian_core::CMat;
use num_complex::Complex64;

use crate::setup::{ChargePair, CollisionSetup};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn sx() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn sy() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn sz() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

pub fn swap(d: usize) -> CMat {
    let mut s = CMat::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            s[(j * d + i, i * d + j)] = c(1., 0.);
        }
    }
    s
}

/// `cos θ I − i sin θ SWAP`.
pub fn partial_swap(d: usize, theta: f64) -> CMat {
    CMat::identity(d * d, d * d) * c(theta.cos(), 0.) + swap(d) * c(0., -theta.sin())
}

/// Two qubits with non-commuting charges `σz`, `σx` and a partial swap.
pub fn qubit_setup(theta: f64) -> CollisionSetup {
    let charges = vec![ChargePair::symmetric("sz", sz()), ChargePair::symmetric("sx", sx())];
    CollisionSetup::from_dense(2, 2, charges, &partial_swap(2, theta)).unwrap()
}
