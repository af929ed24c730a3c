use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::lehmann::fit_line;
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Which massless observable is averaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    /// S = j¹
    Current,
    /// S = T⁰⁰
    Energy,
}

impl NoiseKind {
    /// τ-exponent of ⟨S̄²⟩ at fixed V.
    pub fn expected_exponent(self, d: usize) -> f64 {
        match self {
            NoiseKind::Current => 2.0 - 2.0 * d as f64,
            NoiseKind::Energy => -2.0 * d as f64,
        }
    }

    fn integrand(self, p0: f64, p: &[f64]) -> f64 {
        let k2: f64 = p.iter().map(|x| x * x).sum();
        match self {
            NoiseKind::Current => p[0] * p[0] + p0 * p0 - k2,
            NoiseKind::Energy => k2 * k2,
        }
    }
}

/// ⟨S̄²⟩ for one window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseEstimate {
    pub value: f64,
    /// τ / V^{1/D}; the power laws need this large.
    pub separation: f64,
}

impl NoiseEstimate {
    pub fn well_separated(&self) -> bool {
        self.separation >= 5.0
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

struct Rules {
    time: GaussLegendre,
    radial: GaussLegendre,
    angle: GaussLegendre,
}

impl Rules {
    fn new() -> Self {
        Rules { time: GaussLegendre::new(64), radial: GaussLegendre::new(24), angle: GaussLegendre::new(24) }
    }
}

/// Vacuum ⟨S̄²⟩ for the unit-normalized massless spectrum, with S̄ the average
/// over a box of side ℓ = V^{1/D} and a Gaussian time envelope of width τ.
pub fn windowed_noise(kind: NoiseKind, d: usize, volume: f64, tau: f64) -> Result<NoiseEstimate> {
    noise_with(&Rules::new(), kind, d, volume, tau)
}

fn noise_with(rules: &Rules, kind: NoiseKind, d: usize, volume: f64, tau: f64) -> Result<NoiseEstimate> {
    if !(1..=3).contains(&d) {
        return Err(Error::InvalidArgument(format!("spatial dimension {d} not in 1..=3")));
    }
    if !(volume > 0.0) || !(tau > 0.0) {
        return Err(Error::InvalidArgument("volume and tau must be positive".into()));
    }
    let ell = volume.powf(1.0 / d as f64);
    let box_weight = |p: &[f64]| p.iter().map(|&k| (ell * sinc(k * ell / 2.0)).powi(2)).product::<f64>();
    let shell = |p0: f64| -> f64 {
        let f = |p: &[f64]| kind.integrand(p0, p) * box_weight(p);
        match d {
            // δ(p0² − p1²) = [δ(p1 − p0) + δ(p1 + p0)]/(2p0)
            1 => (f(&[p0]) + f(&[-p0])) / (2.0 * p0),
            // r = p0 sin θ absorbs 1/√(p0² − r²)
            2 => rules.angle.integrate(0.0, PI / 2.0, |th| {
                let r = p0 * th.sin();
                r * rules.angle.integrate(0.0, 2.0 * PI, |ph| f(&[r * ph.cos(), r * ph.sin()]))
            }),
            _ => rules.radial.integrate(0.0, p0, |r| {
                r * r
                    * rules.angle.integrate(-1.0, 1.0, |c| {
                        let s = (1.0 - c * c).sqrt();
                        rules.angle.integrate(0.0, 2.0 * PI, |ph| f(&[r * s * ph.cos(), r * s * ph.sin(), r * c]))
                    })
            }),
        }
    };
    // |Ñ(p0)|² = 2πτ² e^{−τ²p0²}
    let value = rules.time.integrate(0.0, 8.0 / tau, |p0| (-(tau * p0).powi(2)).exp() * shell(p0))
        * 2.0
        * PI
        * tau
        * tau
        / (2.0 * PI).powi(d as i32 + 1);
    Ok(NoiseEstimate { value, separation: tau / ell })
}

/// Log-log fit of ⟨S̄²⟩ against τ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseScaling {
    pub kind: NoiseKind,
    pub dimension: usize,
    pub volume: f64,
    pub taus: Vec<f64>,
    pub values: Vec<f64>,
    pub exponent: f64,
    pub expected: f64,
}

/// Fits the τ-exponent over log-spaced τ in [tau_min, tau_max].
pub fn noise_scaling(kind: NoiseKind, d: usize, volume: f64, tau_min: f64, tau_max: f64, points: usize) -> Result<NoiseScaling> {
    if points < 2 || !(tau_max > tau_min) || !(tau_min > 0.0) {
        return Err(Error::InvalidArgument("need at least two points over a positive tau range".into()));
    }
    let rules = Rules::new();
    let taus: Vec<f64> =
        (0..points).map(|i| tau_min * (tau_max / tau_min).powf(i as f64 / (points - 1) as f64)).collect();
    let values = taus.iter().map(|&t| Ok(noise_with(&rules, kind, d, volume, t)?.value)).collect::<Result<Vec<_>>>()?;
    let lx: Vec<f64> = taus.iter().map(|t| t.ln()).collect();
    let ly: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    Ok(NoiseScaling { kind, dimension: d, volume, exponent: fit_line(&lx, &ly).1, expected: kind.expected_exponent(d), taus, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalNoiseRow {
    pub tau: f64,
    pub signal: f64,
    pub noise: f64,
    pub ratio: f64,
}

/// Signal ⟨S̄⟩ ∼ τ against noise ⟨S̄²⟩^{1/2} ∼ τ^{1−D}, unit prefactors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalNoiseCurve {
    pub dimension: usize,
    pub energy: f64,
    pub rows: Vec<SignalNoiseRow>,
    pub crossover: f64,
}

pub fn signal_vs_noise_curve(d: usize, energy: f64, taus: &[f64]) -> Result<SignalNoiseCurve> {
    if !(1..=3).contains(&d) {
        return Err(Error::InvalidArgument(format!("spatial dimension {d} not in 1..=3")));
    }
    if taus.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::InvalidArgument("tau values must be positive".into()));
    }
    let rows = taus
        .iter()
        .map(|&tau| {
            let (signal, noise) = (tau, tau.powi(1 - d as i32));
            SignalNoiseRow { tau, signal, noise, ratio: signal / noise }
        })
        .collect();
    // τ = τ^{1−D} ⇔ τ^D = 1
    Ok(SignalNoiseCurve { dimension: d, energy, rows, crossover: 1.0 })
}

/// n log-spaced values in [a, b].
pub fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64)).collect()
}
