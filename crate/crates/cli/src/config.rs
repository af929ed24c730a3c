use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Everything a run depends on. Two runs with equal configs write equal bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub output_dir: PathBuf,
    pub tolerances: Tolerances,
    pub fdt: FdtConfig,
    pub suppression: SuppressionConfig,
    pub noiseless: NoiselessConfig,
    pub scaling: ScalingConfig,
    pub sagnac: SagnacConfig,
    pub homodyne: HomodyneSection,
    pub wick: WickConfig,
    pub threepoint: ThreePointConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub fdt: f64,
    /// |G| below this is treated as an exact zero.
    pub fdt_floor: f64,
    pub suppression_slope: f64,
    pub vacuum_variance: f64,
    pub tensor_zero: f64,
    pub model_fit: f64,
    pub projector: f64,
    pub exponent: f64,
    pub threepoint: f64,
    pub wick: f64,
    pub eigenstate: f64,
    pub signal: f64,
}

impl Tolerances {
    fn values(&self) -> [f64; 12] {
        [
            self.fdt,
            self.fdt_floor,
            self.suppression_slope,
            self.vacuum_variance,
            self.tensor_zero,
            self.model_fit,
            self.projector,
            self.exponent,
            self.threepoint,
            self.wick,
            self.eigenstate,
            self.signal,
        ]
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            fdt: 1e-10,
            fdt_floor: 1e-13,
            suppression_slope: 0.05,
            vacuum_variance: 1e-12,
            tensor_zero: 1e-8,
            model_fit: 1e-10,
            projector: 1e-12,
            exponent: 0.1,
            threepoint: 1e-14,
            wick: 1e-10,
            eigenstate: 1e-10,
            signal: 1e-10,
        }
    }
}

/// Scalar field on a line along axis 3 (zero mode excluded).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineConfig {
    pub length: f64,
    pub n_max: i32,
    pub mass: f64,
    pub cap: u8,
    pub total: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FdtConfig {
    pub betas: Vec<f64>,
    pub line: LineConfig,
    /// Sampled p in units of 2π/L: p⁰ and p³ ranges, inclusive.
    pub p0_range: (i32, i32),
    pub p3_range: (i32, i32),
    /// Occupation cap for the single-mode closed-form check.
    pub single_mode_cap: u8,
}

impl Default for FdtConfig {
    fn default() -> Self {
        FdtConfig {
            betas: vec![0.5, 1.0, 2.0],
            line: LineConfig { length: 2.0 * PI, n_max: 1, mass: 0.0, cap: 6, total: 12 },
            p0_range: (-3, 3),
            p3_range: (-2, 2),
            single_mode_cap: 80,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuppressionConfig {
    pub betas: Vec<f64>,
    pub line: LineConfig,
    /// (p⁰, p³) in units of 2π/L; on a massless line :φ²: needs p⁰ ≡ p³ mod 2.
    pub momenta: Vec<(i32, i32)>,
}

impl Default for SuppressionConfig {
    fn default() -> Self {
        SuppressionConfig {
            betas: (0..11).map(|i| 2.0 + i as f64).collect(),
            line: LineConfig { length: 2.0 * PI, n_max: 3, mass: 0.0, cap: 3, total: 4 },
            momenta: vec![(0, 2), (1, 3), (0, 4), (2, 4), (-1, 3)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiselessConfig {
    pub line: LineConfig,
    /// Window duration in units of L.
    pub tau_lengths: u32,
    /// Space-like lattice momenta drawn with the run seed.
    pub samples: usize,
    /// Largest |p³| in units of 2π/L.
    pub p3_max: i32,
    pub tensor_line: LineConfig,
    pub model_trials: usize,
    pub projector_trials: usize,
}

impl Default for NoiselessConfig {
    fn default() -> Self {
        NoiselessConfig {
            line: LineConfig { length: 2.0 * PI, n_max: 3, mass: 0.0, cap: 2, total: 2 },
            tau_lengths: 2,
            samples: 12,
            p3_max: 3,
            tensor_line: LineConfig { length: 2.0 * PI, n_max: 2, mass: 0.0, cap: 2, total: 2 },
            model_trials: 64,
            projector_trials: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingConfig {
    pub volume: f64,
    /// τ range in units of the box length.
    pub tau_min: f64,
    pub tau_max: f64,
    pub points: usize,
    /// Signal-vs-noise curve: τ grid and the signal energy.
    pub curve_tau_min: f64,
    pub curve_tau_max: f64,
    pub curve_points: usize,
    pub curve_energy: f64,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        ScalingConfig {
            volume: 1.0,
            tau_min: 10.0,
            tau_max: 100.0,
            points: 16,
            curve_tau_min: 0.1,
            curve_tau_max: 100.0,
            curve_points: 31,
            curve_energy: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SagnacCase {
    pub length: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SagnacConfig {
    pub cases: Vec<SagnacCase>,
    /// Window duration in mode periods.
    pub periods: u32,
    pub max_moment: usize,
}

impl Default for SagnacConfig {
    fn default() -> Self {
        SagnacConfig {
            cases: vec![
                SagnacCase { length: 2.0 * PI, mass: 0.5 },
                SagnacCase { length: 2.0 * PI, mass: 1.0 },
                SagnacCase { length: 2.0 * PI, mass: 2.0 },
                SagnacCase { length: PI, mass: 1.0 },
            ],
            periods: 1,
            max_moment: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HomodyneSection {
    pub alphas: Vec<f64>,
    pub attenuation: f64,
    pub phase: f64,
    pub tuning: f64,
    pub line: LineConfig,
    /// Centre (p̄⁰, p̄³) of the localized observable.
    pub p_bar: (f64, f64),
    pub sigma_x: f64,
    pub sigma_ts: Vec<f64>,
}

impl Default for HomodyneSection {
    fn default() -> Self {
        HomodyneSection {
            alphas: vec![1e-3, 1e-2, 5e-2, 1e-1],
            attenuation: 0.9,
            phase: 0.3,
            tuning: 0.1,
            line: LineConfig { length: 2.0 * PI, n_max: 3, mass: 0.0, cap: 2, total: 2 },
            p_bar: (0.0, 2.0),
            sigma_x: 1.0,
            sigma_ts: vec![0.5, 1.0, 2.0, 4.0, 8.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WickConfig {
    pub energies: Vec<f64>,
    /// Finite β values; `zero_temperature` adds β = ∞.
    pub betas: Vec<f64>,
    pub zero_temperature: bool,
    pub boson_cap: u8,
    pub trials: usize,
}

impl Default for WickConfig {
    fn default() -> Self {
        WickConfig { energies: vec![1.3, 1.7, 2.1], betas: vec![1.0, 2.0], zero_temperature: true, boson_cap: 32, trials: 120 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThreePointConfig {
    pub w: f64,
    pub m: f64,
    pub v: f64,
}

impl Default for ThreePointConfig {
    fn default() -> Self {
        ThreePointConfig { w: 2.0, m: 1.0, v: 1.0 }
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 20_240_917,
            output_dir: PathBuf::from("qfnoise-out"),
            tolerances: Tolerances::default(),
            fdt: FdtConfig::default(),
            suppression: SuppressionConfig::default(),
            noiseless: NoiselessConfig::default(),
            scaling: ScalingConfig::default(),
            sagnac: SagnacConfig::default(),
            homodyne: HomodyneSection::default(),
            wick: WickConfig::default(),
            threepoint: ThreePointConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: &str| Err(CliError::Config(msg.into()));
        if self.tolerances.values().iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return bad("tolerances must be finite and non-negative");
        }
        let lines = [&self.fdt.line, &self.suppression.line, &self.noiseless.line, &self.noiseless.tensor_line, &self.homodyne.line];
        if lines.iter().any(|l| !(l.length > 0.0) || l.n_max < 1 || l.mass < 0.0) {
            return bad("line grids need positive length, n_max >= 1 and mass >= 0");
        }
        if self.fdt.betas.iter().chain(&self.suppression.betas).chain(&self.wick.betas).any(|b| !(*b > 0.0)) {
            return bad("beta values must be positive");
        }
        if self.suppression.betas.len() < 2 {
            return bad("suppression needs at least two beta values");
        }
        if self.noiseless.tau_lengths == 0 || self.sagnac.periods == 0 {
            return bad("window durations must be positive multiples");
        }
        if !(self.scaling.tau_min > 0.0 && self.scaling.tau_max > self.scaling.tau_min && self.scaling.points >= 2) {
            return bad("scaling needs 0 < tau_min < tau_max and at least two points");
        }
        let sc = &self.scaling;
        if !(sc.curve_tau_min > 0.0 && sc.curve_tau_max > sc.curve_tau_min && sc.curve_points >= 2 && sc.curve_energy > 0.0) {
            return bad("scaling curve needs 0 < curve_tau_min < curve_tau_max, two points and positive energy");
        }
        if self.sagnac.max_moment == 0 || self.sagnac.max_moment > qfnoise_core::measurement::MAX_MOMENT {
            return bad("sagnac.max_moment out of range");
        }
        if self.sagnac.cases.iter().any(|c| !(c.length > 0.0) || c.mass < 0.0) {
            return bad("sagnac cases need positive length and mass >= 0");
        }
        if !(self.homodyne.attenuation > 0.0 && self.homodyne.attenuation <= 1.0) {
            return bad("homodyne.attenuation must lie in (0, 1]");
        }
        if self.homodyne.sigma_ts.is_empty() || self.homodyne.sigma_ts.iter().any(|s| !(*s > 0.0)) || !(self.homodyne.sigma_x > 0.0) {
            return bad("homodyne window widths must be positive");
        }
        if self.wick.energies.is_empty() || self.wick.energies.len() > 3 || self.wick.energies.iter().any(|e| !(*e > 0.0)) {
            return bad("wick.energies needs one to three positive entries");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_config_matches_defaults() {
        let text = include_str!("../config/default.toml");
        assert_eq!(ExperimentConfig::from_toml(text).unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn partial_configs_fill_in_defaults() {
        let cfg = ExperimentConfig::from_toml("seed = 3\n[threepoint]\nw = 4.0\n").unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.threepoint.w, 4.0);
        assert_eq!(cfg.threepoint.m, 1.0);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ExperimentConfig::from_toml("[homodyne]\nattenuation = 1.5\n").is_err());
        assert!(ExperimentConfig::from_toml("bogus = 1\n").is_err());
        assert!(ExperimentConfig::from_toml("[tolerances]\nwick = -1e-3\n").is_err());
        assert!(ExperimentConfig::from_toml("[suppression]\nbetas = [2.0]\n").is_err());
    }
}
