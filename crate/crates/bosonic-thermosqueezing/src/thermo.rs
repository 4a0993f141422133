//! Thermosqueezing coefficients and the linear-response engine built on `L′`.

use nalgebra::DMatrix;

use crate::closed::{heat_squeezing_onsager, MomentVariant, SqueezingPoint};
use crate::error::{BosonicError, Result};

/// Transport coefficients in the heat/squeezing basis.
///
/// Conductances are stored as positive magnitudes; `kappa_signed` and
/// `g_signed` carry the opposite-sign convention `−L_QQ/T²`, `−L_AA/T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoCoefficients {
    pub temperature: f64,
    pub l_qq: f64,
    pub l_qa: f64,
    pub l_aq: f64,
    pub l_aa: f64,
    /// `L_QQ/T²`.
    pub kappa: f64,
    /// `L_AA/T`.
    pub g: f64,
    /// `L_AQ/(T L_AA)`.
    pub s: f64,
    /// `L_QA/L_AA`.
    pub pi: f64,
    /// `L_QA²/(L_QQ L_AA)`.
    pub zt: f64,
    pub kappa_signed: f64,
    pub g_signed: f64,
    /// Thermal conductance at zero squeezing current, `κ(1 − ZT)`.
    pub kappa_open_circuit: f64,
}

/// Coefficients from a 2×2 heat/squeezing Onsager matrix.
pub fn thermo_from_onsager(lp: &DMatrix<f64>, temperature: f64) -> Result<ThermoCoefficients> {
    if lp.shape() != (2, 2) {
        return Err(BosonicError::InvalidParameter {
            name: "onsager size",
            value: lp.nrows() as f64,
        });
    }
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(BosonicError::InvalidParameter { name: "temperature", value: temperature });
    }
    let (l_qq, l_qa, l_aq, l_aa) = (lp[(0, 0)], lp[(0, 1)], lp[(1, 0)], lp[(1, 1)]);
    let t = temperature;
    let kappa = l_qq / (t * t);
    let zt = if l_qa == 0.0 { 0.0 } else { l_qa * l_aq / (l_qq * l_aa) };
    Ok(ThermoCoefficients {
        temperature: t,
        l_qq,
        l_qa,
        l_aq,
        l_aa,
        kappa,
        g: l_aa / t,
        s: l_aq / (t * l_aa),
        pi: l_qa / l_aa,
        zt,
        kappa_signed: -kappa,
        g_signed: -l_aa / t,
        kappa_open_circuit: kappa * (1.0 - zt),
    })
}

pub fn thermo_coefficients(p: &SqueezingPoint, variant: MomentVariant) -> Result<ThermoCoefficients> {
    thermo_from_onsager(&heat_squeezing_onsager(p, variant), p.temperature())
}

/// Currents and dissipation at one squeezing-potential bias.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub delta_mu: f64,
    /// `L_QQ δβ − L_QA βδμ`.
    pub j_q: f64,
    /// `L_AQ δβ − L_AA βδμ`.
    pub j_a: f64,
    /// Work per collision, `−J_A δμ`; negative while work is extracted.
    pub power: f64,
    /// `δβ J_Q − βδμ J_A`.
    pub sigma: f64,
    /// `TΣ`.
    pub heat: f64,
    /// `κ δT²/T + J_A²/G` with the short-circuit `κ`.
    pub heat_split: f64,
    /// The same split with `κ(1 − ZT)`.
    pub heat_split_open_circuit: f64,
}

/// Operating windows of the thermosqueezing engine at a fixed `δβ`.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineReport {
    pub beta: f64,
    pub delta_beta: f64,
    pub coefficients: ThermoCoefficients,
    /// `κTδβ/(GS)`; `None` without squeezing.
    pub delta_mu_fridge: Option<f64>,
    /// `Π δβ/β`, where `J_A` and the power vanish.
    pub delta_mu_stop: f64,
}

pub fn engine_from_onsager(lp: &DMatrix<f64>, beta: f64, delta_beta: f64) -> Result<EngineReport> {
    if !(delta_beta > 0.0 && delta_beta.is_finite()) {
        return Err(BosonicError::InvalidParameter { name: "delta_beta", value: delta_beta });
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(BosonicError::InvalidParameter { name: "beta", value: beta });
    }
    let c = thermo_from_onsager(lp, 1.0 / beta)?;
    let gs = c.g * c.s;
    Ok(EngineReport {
        beta,
        delta_beta,
        coefficients: c,
        delta_mu_fridge: (gs != 0.0).then(|| c.kappa * c.temperature * delta_beta / gs),
        delta_mu_stop: c.pi * delta_beta / beta,
    })
}

pub fn engine_analysis(p: &SqueezingPoint, variant: MomentVariant, delta_beta: f64) -> Result<EngineReport> {
    engine_from_onsager(&heat_squeezing_onsager(p, variant), p.beta, delta_beta)
}

impl EngineReport {
    pub fn at(&self, delta_mu: f64) -> OperatingPoint {
        let c = &self.coefficients;
        let (db, b) = (self.delta_beta, self.beta);
        let j_q = c.l_qq * db - c.l_qa * b * delta_mu;
        let j_a = c.l_aq * db - c.l_aa * b * delta_mu;
        let sigma = db * j_q - b * delta_mu * j_a;
        let t = c.temperature;
        let delta_t = -t * t * db;
        let split = |kappa: f64| kappa * delta_t * delta_t / t + j_a * j_a / c.g;
        OperatingPoint {
            delta_mu,
            j_q,
            j_a,
            power: -j_a * delta_mu,
            sigma,
            heat: t * sigma,
            heat_split: split(c.kappa),
            heat_split_open_circuit: split(c.kappa_open_circuit),
        }
    }

    /// `n + 1` evenly spaced biases on `[lo, hi]`.
    pub fn scan(&self, lo: f64, hi: f64, n: usize) -> Vec<OperatingPoint> {
        let n = n.max(1);
        (0..=n).map(|i| self.at(lo + (hi - lo) * i as f64 / n as f64)).collect()
    }

    /// Sampled bias with the most negative power.
    pub fn best_extraction(points: &[OperatingPoint]) -> Option<OperatingPoint> {
        points.iter().copied().min_by(|a, b| a.power.total_cmp(&b.power))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(beta: f64, r: f64) -> SqueezingPoint {
        SqueezingPoint::from_r(beta, r, 1.0, std::f64::consts::FRAC_PI_2).unwrap()
    }

    #[test]
    fn seebeck_peltier_relation() {
        for (b, r) in [(0.4, 0.2), (1.0, 1.0), (3.0, 0.6)] {
            let c = thermo_coefficients(&point(b, r), MomentVariant::Exact).unwrap();
            assert!((c.pi - c.temperature * c.s).abs() <= 1e-12 * c.pi.abs());
            assert!((c.zt - c.l_qa * c.l_qa / (c.l_qq * c.l_aa)).abs() < 1e-12);
            assert!(c.zt > 0.0 && c.zt < 1.0);
            assert!((c.zt - c.g * c.s * c.s * c.temperature / c.kappa).abs() < 1e-12);
        }
    }

    #[test]
    fn unsqueezed_cross_effects_vanish() {
        let c = thermo_coefficients(&point(1.0, 0.0), MomentVariant::Exact).unwrap();
        assert_eq!((c.s, c.pi, c.zt), (0.0, 0.0, 0.0));
        let e = engine_analysis(&point(1.0, 0.0), MomentVariant::Exact, 1e-3).unwrap();
        assert!(e.delta_mu_fridge.is_none());
    }

    #[test]
    fn engine_window() {
        let e = engine_analysis(&point(1.0, 1.0), MomentVariant::Exact, 1e-3).unwrap();
        assert!(e.at(e.delta_mu_stop).power.abs() < 1e-12);
        let pts = e.scan(0.0, e.delta_mu_stop, 200);
        let best = EngineReport::best_extraction(&pts).unwrap();
        assert!((best.delta_mu - 0.5 * e.delta_mu_stop).abs() <= e.delta_mu_stop / 200.0);
        assert!(best.power < 0.0);
        let op = e.at(5e-4);
        assert!((op.heat - op.heat_split_open_circuit).abs() < 1e-15);
        assert!(op.heat_split > op.heat);
        assert!(engine_analysis(&point(1.0, 1.0), MomentVariant::Exact, -1e-3).is_err());
    }
}
