//! Coefficients of the nested-commutator expansion of the SLD.
//!
//! `Σ_n f_2n x^2n = tanh(x/2) / (x/2)`, with
//! `f_m = 4 (4^(m/2+1) − 1) B_(m+2) / (m+2)!`. The coefficients are obtained
//! by dividing the power series of `sinh(u)/u` by that of `cosh(u)`, which
//! avoids the huge intermediate values of the Bernoulli form.

/// `f_0, f_2, …, f_(2(n−1))`.
pub fn sld_series_coefficients(n: usize) -> Vec<f64> {
    let mut sinhc = Vec::with_capacity(n);
    let mut cosh = Vec::with_capacity(n);
    let mut fact = 1.0f64;
    for k in 0..n {
        let even = if k == 0 { 1.0 } else { fact };
        cosh.push(1.0 / even);
        fact *= (2 * k + 1) as f64;
        sinhc.push(1.0 / fact);
        fact *= (2 * k + 2) as f64;
    }
    let mut t: Vec<f64> = Vec::with_capacity(n);
    for m in 0..n {
        let mut v = sinhc[m];
        for k in 1..=m {
            v -= cosh[k] * t[m - k];
        }
        t.push(v);
    }
    t.iter()
        .enumerate()
        .map(|(m, v)| v / 4f64.powi(m as i32))
        .collect()
}

/// `Σ_(n=1..terms) f_2n x^2n`, which converges to `tanh(x/2)/(x/2) − 1` for `|x| < π`.
pub fn tanh_ratio_series(x: f64, terms: usize) -> f64 {
    let f = sld_series_coefficients(terms + 1);
    let x2 = x * x;
    let mut pow = 1.0;
    let mut acc = 0.0;
    for coeff in f.iter().skip(1) {
        pow *= x2;
        acc += coeff * pow;
    }
    acc
}
