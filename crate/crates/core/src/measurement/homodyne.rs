use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomodyneConfig {
    /// Interaction coefficient α.
    pub alpha: f64,
    /// Amplitude transmission in (0, 1].
    pub attenuation: f64,
    /// Phase picked up by the probe arm.
    pub phase: f64,
    /// Compensating offset set by the operator.
    pub tuning: f64,
}

impl HomodyneConfig {
    pub fn new(alpha: f64) -> Self {
        HomodyneConfig { alpha, attenuation: 1.0, phase: 0.0, tuning: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.attenuation > 0.0 && self.attenuation <= 1.0) {
            return Err(Error::InvalidArgument(format!("attenuation {} not in (0, 1]", self.attenuation)));
        }
        if !self.alpha.is_finite() {
            return Err(Error::InvalidArgument("alpha must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomodyneReading {
    /// |1 + αS̄|² − |1 − αS̄|²
    pub exact: f64,
    /// 4αS̄
    pub linearized: f64,
    /// Unitary two-port with attenuation and dephasing:
    /// 4η x√(1 − x²) cos(φ − φ₀), x = sin(αS̄).
    pub unitary: f64,
    /// 4ηαS̄ cos(φ − φ₀)
    pub unitary_linearized: f64,
    /// |αS̄| ≪ 1 no longer holds (|αS̄| > 0.1).
    pub strong: bool,
}

impl HomodyneReading {
    pub fn linearization_error(&self) -> f64 {
        self.unitary - self.unitary_linearized
    }
}

pub fn homodyne_difference(sbar: f64, cfg: &HomodyneConfig) -> Result<HomodyneReading> {
    cfg.validate()?;
    let a = cfg.alpha * sbar;
    let exact = (1.0 + a).powi(2) - (1.0 - a).powi(2);
    let x = a.sin();
    let phase = (cfg.phase - cfg.tuning).cos();
    Ok(HomodyneReading {
        exact,
        linearized: 4.0 * a,
        unitary: 4.0 * cfg.attenuation * x * (1.0 - x * x).sqrt() * phase,
        unitary_linearized: 4.0 * cfg.attenuation * a * phase,
        strong: a.abs() > 0.1,
    })
}

/// err(α)/err(α/2) of the unitary linearization; 8 for a cubic remainder.
pub fn richardson_ratio(sbar: f64, cfg: &HomodyneConfig) -> Result<f64> {
    let half = HomodyneConfig { alpha: cfg.alpha / 2.0, ..*cfg };
    Ok(homodyne_difference(sbar, cfg)?.linearization_error() / homodyne_difference(sbar, &half)?.linearization_error())
}

/// Variance of the linearized difference signal given Var(S̄).
pub fn difference_variance(var_sbar: f64, cfg: &HomodyneConfig) -> f64 {
    let gain = 4.0 * cfg.alpha * cfg.attenuation * (cfg.phase - cfg.tuning).cos();
    gain * gain * var_sbar
}
