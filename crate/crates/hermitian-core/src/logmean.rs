//! Logarithmic mean, the closed form of `∫₀¹ p^y q^(1−y) dy`.

const LOG_GAP: f64 = 1e-12;

/// `(p − q) / (ln p − ln q)` with its continuous limits at `p = q` and at zero.
pub fn log_mean(p: f64, q: f64) -> f64 {
    if p <= 0.0 || q <= 0.0 {
        return 0.0;
    }
    log_mean_ln(p.ln(), q.ln())
}

/// Logarithmic mean from the logarithms of its arguments.
///
/// Working with `ln p` keeps the value accurate when the arguments are far
/// below the smallest normal float or very close to one another.
pub fn log_mean_ln(lp: f64, lq: f64) -> f64 {
    let (hi, lo) = if lp >= lq { (lp, lq) } else { (lq, lp) };
    let gap = hi - lo;
    if gap < LOG_GAP {
        return (0.5 * (hi + lo)).exp();
    }
    lo.exp() * gap.exp_m1() / gap
}
