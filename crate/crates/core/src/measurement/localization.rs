use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::window::{spacelike_windowed_observable, Envelope, MeasurementWindow};
use crate::error::{Error, Result};
use crate::fields::QuadraticObservable;
use crate::fock::{FockSpace, StateVector};
use crate::quadrature::GaussLegendre;
use crate::spacetime::FourVector;
use crate::C64;
use crate::spectral::fit_line;

/// Fraction of ∫|N(p − p̄)|² d²p lying inside the light cone, D = 1, for the
/// normalized Gaussian envelope.
pub fn gaussian_leakage(p_bar: (f64, f64), sigma_t: f64, sigma_x: f64) -> f64 {
    let (p0, p1) = p_bar;
    // ∫_{|q⁰|>|q|} e^{−σ_t²(q⁰−p̄⁰)²} dq⁰ over its full-line value
    let inner = |q: f64| {
        let a = q.abs();
        (libm::erfc(sigma_t * (a - p0)) + libm::erfc(sigma_t * (a + p0))) / 2.0
    };
    let gl = GaussLegendre::new(48);
    let (lo, hi) = (p1 - 9.0 / sigma_x, p1 + 9.0 / sigma_x);
    let f = |q: f64| (-(sigma_x * (q - p1)).powi(2)).exp() * inner(q);
    // Split at the kink of |q|.
    let total = if lo < 0.0 && hi > 0.0 { gl.integrate(lo, 0.0, f) + gl.integrate(0.0, hi, f) } else { gl.integrate(lo, hi, f) };
    total * sigma_x / PI.sqrt()
}

/// Si(x) = ∫₀ˣ sin t / t dt.
fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x > 100.0 {
        let (s, c) = x.sin_cos();
        let y = 1.0 / (x * x);
        let f = (1.0 - y * (2.0 - y * (24.0 - 720.0 * y))) / x;
        let g = y * (1.0 - y * (6.0 - y * (120.0 - 5040.0 * y)));
        return PI / 2.0 - f * c - g * s;
    }
    let gl = GaussLegendre::new(16);
    let pieces = (x / PI).ceil().max(1.0) as usize;
    let h = x / pieces as f64;
    (0..pieces)
        .map(|i| gl.integrate(i as f64 * h, (i + 1) as f64 * h, |t| if t == 0.0 { 1.0 } else { t.sin() / t }))
        .sum()
}

/// As [`gaussian_leakage`] for the sharp window of duration τ and length ℓ.
pub fn rectangular_leakage(p_bar: (f64, f64), tau: f64, ell: f64) -> f64 {
    let (p0, p1) = p_bar;
    // Fraction of ∫ sinc²((q⁰ − p̄⁰)τ/2) dq⁰ outside [−a, a].
    let inside = |lo: f64, hi: f64| {
        let g = |u: f64| {
            let x = u * tau / 2.0;
            if x == 0.0 {
                0.0
            } else {
                x.signum() * (sine_integral(2.0 * x.abs()) - x.sin().powi(2) / x.abs())
            }
        };
        (g(hi) - g(lo)) / PI
    };
    let inner = |q: f64| {
        let a = q.abs();
        1.0 - inside(-a - p0, a - p0)
    };
    let weight = |q: f64| {
        let x = (q - p1) * ell / 2.0;
        if x.abs() < 1e-12 {
            1.0
        } else {
            (x.sin() / x).powi(2)
        }
    };
    let gl = GaussLegendre::new(16);
    let reach = 400.0 * PI / ell;
    let pieces = 800;
    let h = 2.0 * reach / pieces as f64;
    let mut total = 0.0;
    for i in 0..pieces {
        let (a, b) = (p1 - reach + i as f64 * h, p1 - reach + (i + 1) as f64 * h);
        total += gl.integrate(a, b, |q| weight(q) * inner(q));
    }
    total * ell / (2.0 * PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalizationPoint {
    pub sigma_t: f64,
    pub leakage: f64,
    /// ‖S̄(p̄)|0⟩‖² on the lattice with the Gaussian window.
    pub vacuum_variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub p_bar: (f64, f64),
    pub sigma_x: f64,
    pub points: Vec<LocalizationPoint>,
    /// Slope of ln(leakage) against σ_t²; the leakage falls like e^{rate·σ_t²}.
    pub gaussian_rate: Option<f64>,
    pub monotone: bool,
}

/// ‖S̄|0⟩‖² − |⟨0|S̄|0⟩|² for a normal-ordered S̄.
pub fn vacuum_variance(space: &FockSpace, sbar: &QuadraticObservable) -> Result<f64> {
    let vac = StateVector::vacuum(space);
    let (v, leak) = space.apply_terms(&sbar.ladder_terms(), vac.amplitudes())?;
    let mean = vac.inner(&v)?;
    Ok(v.iter().map(|a| a.norm_sqr()).sum::<f64>() + leak - mean.norm_sqr())
}

/// Leakage weight and lattice vacuum variance of the cosine-smeared density
/// along axis 3, for Gaussian envelopes of increasing σ_t.
pub fn localization_effect(
    space: &FockSpace,
    density: &QuadraticObservable,
    p_bar: (f64, f64),
    sigma_x: f64,
    sigma_ts: &[f64],
) -> Result<LocalizationReport> {
    if sigma_ts.is_empty() {
        return Err(Error::InvalidArgument("need at least one sigma_t".into()));
    }
    let p = FourVector::new(p_bar.0, 0.0, 0.0, p_bar.1);
    let points = sigma_ts
        .iter()
        .map(|&st| {
            let w = MeasurementWindow::new([None, None, Some(1.0)], 1.0, Envelope::Gaussian { sigma_x, sigma_t: st })?;
            let (sbar, _) = spacelike_windowed_observable(space, density, &p, &w);
            // N(0) = 1, so only the shape of the envelope changes with σ_t.
            let sbar = sbar.scaled(C64::new(1.0 / w.transform(&FourVector::default()), 0.0));
            Ok(LocalizationPoint { sigma_t: st, leakage: gaussian_leakage(p_bar, st, sigma_x), vacuum_variance: vacuum_variance(space, &sbar)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let monotone = points.windows(2).all(|w| w[1].leakage <= w[0].leakage && w[1].vacuum_variance <= w[0].vacuum_variance);
    let usable: Vec<&LocalizationPoint> = points.iter().filter(|p| p.leakage > 0.0).collect();
    let gaussian_rate = (usable.len() >= 2).then(|| {
        let x: Vec<f64> = usable.iter().map(|p| p.sigma_t * p.sigma_t).collect();
        let y: Vec<f64> = usable.iter().map(|p| p.leakage.ln()).collect();
        fit_line(&x, &y).1
    });
    Ok(LocalizationReport { p_bar, sigma_x, points, gaussian_rate, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_integral_values() {
        assert!((sine_integral(1.0) - 0.946_083_070_367_183).abs() < 1e-13);
        assert!((sine_integral(100.0) - 1.562_225_466_889_056).abs() < 1e-12);
        assert!((sine_integral(150.0) - 1.566_166_832_722_521).abs() < 1e-12);
    }

    #[test]
    fn gaussian_leakage_limits() {
        // Deep space-like centre, narrow in frequency: almost nothing leaks.
        assert!(gaussian_leakage((0.0, 4.0), 5.0, 5.0) < 1e-30);
        // Time-like centre keeps most of the weight inside the cone.
        assert!(gaussian_leakage((4.0, 0.0), 5.0, 5.0) > 0.99);
    }

    #[test]
    fn rectangular_leakage_is_algebraic() {
        let a = rectangular_leakage((0.0, 3.0), 10.0, 10.0);
        let b = rectangular_leakage((0.0, 3.0), 20.0, 20.0);
        assert!(a > 0.0 && b > 0.0 && b < a);
        // Doubling both extents shrinks a sinc² tail by a bounded power.
        assert!(b / a > 1e-3);
    }
}
