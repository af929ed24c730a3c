use serde::{Deserialize, Serialize};

use super::wick::OrderingScheme;
use crate::error::{Error, Result};
use crate::spacetime::{g, FourVector};

/// ⟨T^{μν}(k) φ(−p) φ(−q)⟩ stripped of its overall constant and of δ(p+q−k).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreePointValue {
    /// Σ c_{μν} (p^μ q^ν − g^{μν}(p·q + m²)/2)
    pub numerator: f64,
    /// (p·p − m²)(q·q − m²)
    pub denominator: f64,
    /// numerator/denominator; `None` when a leg is on shell.
    pub rational: Option<f64>,
    /// Middle-branch on-shell contribution (three-branch ordering only).
    pub on_shell_term: Option<f64>,
}

const TOL: f64 = 1e-12;

fn numerator(p: &FourVector, q: &FourVector, mu: usize, nu: usize, m: f64) -> f64 {
    p[mu] * q[nu] - g(mu, nu) * (p.dot(q) + m * m) / 2.0
}

/// Linear combination Σ c_{μν} of stress-tensor components in the three-point function.
pub fn three_point_combination(
    k: FourVector,
    p: FourVector,
    q: FourVector,
    coefficients: &[((usize, usize), f64)],
    m: f64,
    scheme: OrderingScheme,
) -> Result<ThreePointValue> {
    let mismatch = k - p - q;
    let scale = k.euclidean_norm_sqr().max(p.euclidean_norm_sqr()).max(q.euclidean_norm_sqr()).max(1.0).sqrt();
    if (0..4).any(|i| mismatch[i].abs() > TOL * scale) {
        return Err(Error::MomentumMismatch(mismatch.0));
    }
    if coefficients.iter().any(|&((a, b), _)| a > 3 || b > 3) {
        return Err(Error::InvalidArgument("tensor index out of range".into()));
    }
    let num: f64 = coefficients.iter().map(|&((a, b), c)| c * numerator(&p, &q, a, b, m)).sum();
    let (dp, dq) = (p.dot(&p) - m * m, q.dot(&q) - m * m);
    let shell_scale = scale * scale;
    let p_on = dp.abs() <= TOL * shell_scale;
    let q_on = dq.abs() <= TOL * shell_scale;
    let rational = (!p_on && !q_on).then(|| num / (dp * dq));
    let on_shell_term = match scheme {
        OrderingScheme::ThreeBranch => Some(if p_on && q_on { num } else { 0.0 }),
        _ => None,
    };
    Ok(ThreePointValue { numerator: num, denominator: dp * dq, rational, on_shell_term })
}

pub fn three_point_t_phi_phi(
    k: FourVector,
    p: FourVector,
    q: FourVector,
    mu: usize,
    nu: usize,
    m: f64,
    scheme: OrderingScheme,
) -> Result<ThreePointValue> {
    three_point_combination(k, p, q, &[((mu, nu), 1.0)], m, scheme)
}

/// The noiseless combination 2T⁰⁰ + T¹¹ + T²².
pub const NOISELESS_COMBINATION: [((usize, usize), f64); 3] = [((0, 0), 2.0), ((1, 1), 1.0), ((2, 2), 1.0)];
