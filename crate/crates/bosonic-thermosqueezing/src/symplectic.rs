//! Gaussian two-mode operations as real symplectic matrices acting on
//! `(x₁, …, x_N, p₁, …, p_N)`.

use nalgebra::DMatrix;

use crate::error::{BosonicError, Result};

pub const SYMPLECTIC_TOL: f64 = 1e-10;

/// `Ω = [[0, I], [−I, 0]]`.
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut o = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        o[(i, n + i)] = 1.0;
        o[(n + i, i)] = -1.0;
    }
    o
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, b| a.max(b.abs()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    v: DMatrix<f64>,
    modes: usize,
}

impl SymplecticMatrix {
    /// Validates `VᵀΩV = Ω`.
    pub fn new(v: DMatrix<f64>) -> Result<Self> {
        if !v.is_square() || v.nrows() % 2 != 0 || v.nrows() == 0 {
            return Err(BosonicError::InvalidParameter {
                name: "symplectic size",
                value: v.nrows() as f64,
            });
        }
        let modes = v.nrows() / 2;
        let o = symplectic_form(modes);
        let r = max_abs(&(v.transpose() * &o * &v - &o));
        if r > SYMPLECTIC_TOL {
            return Err(BosonicError::NotSymplectic(r));
        }
        Ok(Self { v, modes })
    }

    /// `[[X, Y], [−Y, X]]` from a unitary `X + iY` acting on the ladder operators.
    pub fn passive(x: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<Self> {
        let n = x.nrows();
        let mut v = DMatrix::zeros(2 * n, 2 * n);
        v.view_mut((0, 0), (n, n)).copy_from(x);
        v.view_mut((n, n), (n, n)).copy_from(x);
        v.view_mut((0, n), (n, n)).copy_from(y);
        v.view_mut((n, 0), (n, n)).copy_from(&(-y));
        Self::new(v)
    }

    /// Beam splitter `diag(X, X)` with `X` a rotation by `φ`.
    pub fn rotation(phi: f64) -> Self {
        let (c, s) = (phi.cos(), phi.sin());
        let x = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        Self::passive(&x, &DMatrix::zeros(2, 2)).expect("rotations are symplectic")
    }

    /// Mixing `e^(−ig(a₁†a₂ + a₂†a₁))`: `X = cos g I`, `Y = sin g σx`.
    pub fn phase_beam_splitter(g: f64) -> Self {
        let x = DMatrix::identity(2, 2) * g.cos();
        let y = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]) * g.sin();
        Self::passive(&x, &y).expect("passive maps are symplectic")
    }

    /// Single-mode squeezing `diag(e^s, e^(−s))`.
    pub fn single_mode_squeezing(s: f64) -> Self {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![s.exp(), (-s).exp()])))
            .expect("squeezing is symplectic")
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn modes(&self) -> usize {
        self.modes
    }
}

/// Quadratic-form matrices of the total charges: `K₁ = I` (energy),
/// `K₂ = diag(I, −I)` (squeezing asymmetry), `K₃ = antidiag(I, I)` (`{x, p}`).
pub fn charge_forms(n: usize) -> [DMatrix<f64>; 3] {
    let k1 = DMatrix::identity(2 * n, 2 * n);
    let mut k2 = DMatrix::identity(2 * n, 2 * n);
    let mut k3 = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        k2[(n + i, n + i)] = -1.0;
        k3[(i, n + i)] = 1.0;
        k3[(n + i, i)] = 1.0;
    }
    [k1, k2, k3]
}

/// Outcome of `VᵀK_iV = K_i` for the three charge forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeCheck {
    pub residuals: [f64; 3],
    pub preserved: [bool; 3],
}

impl ChargeCheck {
    pub fn preserves_all(&self) -> bool {
        self.preserved.iter().all(|p| *p)
    }
}

pub fn symplectic_charge_check(v: &SymplecticMatrix) -> ChargeCheck {
    let forms = charge_forms(v.modes);
    let m = &v.v;
    let mut residuals = [0.0; 3];
    let mut preserved = [false; 3];
    for (i, k) in forms.iter().enumerate() {
        residuals[i] = max_abs(&(m.transpose() * k * m - k));
        preserved[i] = residuals[i] <= SYMPLECTIC_TOL;
    }
    ChargeCheck { residuals, preserved }
}
