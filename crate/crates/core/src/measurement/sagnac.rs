use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::window::{spacelike_windowed_observable, MeasurementWindow};
use crate::error::{Error, Result};
use crate::fields::{dirac_current, stress_tensor_em, stress_tensor_scalar, QuadraticObservable, StressConvention};
use crate::fock::{
    build_fock_space, sagnac_state, Channel, FockSpace, ModeGrid, SagnacConfig, SagnacKind, SagnacKinematics, Species,
    StateVector,
};
use crate::spacetime::FourVector;
use crate::C64;

/// Composite observables measured on the standing wave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SagnacObservable {
    J0,
    J1,
    T00,
    T11,
    MinusT22,
    T11PlusT00,
    HalfT11MinusT22,
}

impl SagnacObservable {
    pub fn label(self) -> &'static str {
        match self {
            SagnacObservable::J0 => "j0",
            SagnacObservable::J1 => "j1",
            SagnacObservable::T00 => "T00",
            SagnacObservable::T11 => "T11",
            SagnacObservable::MinusT22 => "-T22",
            SagnacObservable::T11PlusT00 => "T11+T00",
            SagnacObservable::HalfT11MinusT22 => "(T11-T22)/2",
        }
    }

    /// Σ c_{μν} T^{μν} for the stress-tensor observables.
    fn stress_terms(self) -> Option<Vec<((usize, usize), f64)>> {
        Some(match self {
            SagnacObservable::T00 => vec![((0, 0), 1.0)],
            SagnacObservable::T11 => vec![((1, 1), 1.0)],
            SagnacObservable::MinusT22 => vec![((2, 2), -1.0)],
            SagnacObservable::T11PlusT00 => vec![((1, 1), 1.0), ((0, 0), 1.0)],
            SagnacObservable::HalfT11MinusT22 => vec![((1, 1), 0.5), ((2, 2), -0.5)],
            _ => return None,
        })
    }
}

/// Four-mode line along axis 3 (n₃ ∈ {±1, ±2}) holding the channels of `kind`,
/// at most two particles. Photon spaces carry both polarizations.
pub fn sagnac_space(kind: SagnacKind, length: f64, mass: f64) -> Result<FockSpace> {
    let (species, channels): (Species, Vec<Channel>) = match kind {
        SagnacKind::DiracA => (Species::Fermion, vec![Channel::DiracL, Channel::DiracR]),
        SagnacKind::DiracB => (Species::Fermion, vec![Channel::DiracL]),
        SagnacKind::Scalar => (Species::Boson, vec![Channel::Scalar]),
        SagnacKind::PhotonV => (Species::Boson, vec![Channel::PhotonH, Channel::PhotonV]),
    };
    let mass = if kind == SagnacKind::PhotonV { 0.0 } else { mass };
    let grid = ModeGrid::line(3, length, 2, species, mass)?.with_zero_mode(false);
    let grids: Vec<_> = channels.into_iter().map(|c| (c, grid.clone())).collect();
    let cap = if species == Species::Fermion { 1 } else { 2 };
    build_fock_space(&grids, cap, 2)
}

/// Local density of `obs` on the space of `kind`.
pub fn sagnac_density(
    space: &FockSpace,
    obs: SagnacObservable,
    convention: StressConvention,
) -> Result<QuadraticObservable> {
    let has = |c: Channel| space.grid(c).is_some();
    if let Some(terms) = obs.stress_terms() {
        let parts = terms
            .iter()
            .map(|&((m, n), c)| {
                let t = if has(Channel::Scalar) {
                    stress_tensor_scalar(m, n, space)?
                } else {
                    stress_tensor_em(m, n, space, convention)?
                };
                Ok((C64::new(c, 0.0), t))
            })
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<(C64, &QuadraticObservable)> = parts.iter().map(|(c, t)| (*c, t)).collect();
        return Ok(QuadraticObservable::combine(obs.label(), &refs));
    }
    match obs {
        SagnacObservable::J0 => dirac_current(0, space),
        SagnacObservable::J1 => dirac_current(1, space),
        _ => unreachable!("stress observables handled above"),
    }
}

/// Moments ⟨S̄ⁿ⟩, n = 1..=n_max, by repeated application to the state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub moments: Vec<C64>,
    /// maxₙ |⟨S̄ⁿ⟩ − ⟨S̄⟩ⁿ| / |⟨S̄⟩|ⁿ (absolute when ⟨S̄⟩ = 0).
    pub defect: f64,
    /// Squared norm pushed past the Fock truncation.
    pub leaked: f64,
}

pub const MAX_MOMENT: usize = 6;

pub fn moments(space: &FockSpace, state: &StateVector, sbar: &QuadraticObservable, n_max: usize) -> Result<MomentReport> {
    if n_max == 0 || n_max > MAX_MOMENT {
        return Err(Error::InvalidArgument(format!("moment order must be in 1..={MAX_MOMENT}")));
    }
    let terms = sbar.ladder_terms();
    let mut v = state.amplitudes().to_vec();
    let mut out = Vec::with_capacity(n_max);
    let mut leaked = 0.0;
    for _ in 0..n_max {
        let (next, leak) = space.apply_terms(&terms, &v)?;
        leaked += leak;
        v = next;
        out.push(state.inner(&v)?);
    }
    let first = out[0];
    let defect = out
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let pow = first.powu(i as u32 + 1);
            let d = (m - pow).norm();
            if first.norm() > 0.0 {
                d / pow.norm()
            } else {
                d
            }
        })
        .fold(0.0, f64::max);
    Ok(MomentReport { moments: out, defect, leaked })
}

/// τ covering `periods` oscillations of the mode energy.
pub fn default_tau(kin: &SagnacKinematics, periods: u32) -> f64 {
    periods as f64 * 2.0 * PI / kin.energy
}

/// Standing-wave momentum (0, 0, 0, 2k³).
pub fn sagnac_momentum(kin: &SagnacKinematics) -> FourVector {
    FourVector::new(0.0, 0.0, 0.0, 2.0 * kin.k3)
}

/// One prepared measurement.
#[derive(Debug, Clone)]
pub struct SagnacRun {
    pub space: FockSpace,
    pub config: SagnacConfig,
    pub kinematics: SagnacKinematics,
    pub window: MeasurementWindow,
    pub observable: QuadraticObservable,
    pub state: StateVector,
}

impl SagnacRun {
    /// Full-box rectangular window over `periods` periods at p = (0, 0, 0, 2k³).
    pub fn new(
        kind: SagnacKind,
        length: f64,
        mass: f64,
        obs: SagnacObservable,
        periods: u32,
        convention: StressConvention,
    ) -> Result<Self> {
        let space = sagnac_space(kind, length, mass)?;
        let config = SagnacConfig::new(kind, 1);
        let kinematics = config.kinematics(&space)?;
        let (c, _) = kind.channels();
        let grid = space.grid(c).expect("sagnac channel").clone();
        let window = MeasurementWindow::full_box(&grid, default_tau(&kinematics, periods))?;
        Self::with_window(space, config, window, obs, convention)
    }

    pub fn with_window(
        space: FockSpace,
        config: SagnacConfig,
        window: MeasurementWindow,
        obs: SagnacObservable,
        convention: StressConvention,
    ) -> Result<Self> {
        let kinematics = config.kinematics(&space)?;
        let density = sagnac_density(&space, obs, convention)?;
        let (observable, _) = spacelike_windowed_observable(&space, &density, &sagnac_momentum(&kinematics), &window);
        let state = sagnac_state(&space, &config)?;
        Ok(SagnacRun { space, config, kinematics, window, observable, state })
    }

    pub fn moments(&self, n_max: usize) -> Result<MomentReport> {
        moments(&self.space, &self.state, &self.observable, n_max)
    }
}

/// Quoted single-moment values (main, appendix) for a configuration.
pub fn paper_values(kind: SagnacKind, obs: SagnacObservable, kin: &SagnacKinematics, tau: f64) -> (Option<f64>, Option<f64>) {
    let (m, k, e) = (kin.mass, kin.k3, kin.energy);
    match (kind, obs) {
        (SagnacKind::DiracA, SagnacObservable::J0) => (Some(tau * m / (2.0 * e)), Some(tau * m / (2.0 * e))),
        (SagnacKind::DiracB, SagnacObservable::J1) => (Some(tau * k / (2.0 * e)), Some(tau * k / (2.0 * e))),
        (SagnacKind::Scalar, SagnacObservable::T00) => (Some(tau * m * m / (2.0 * e)), Some(tau * m * m / (4.0 * e))),
        (SagnacKind::PhotonV, SagnacObservable::T11PlusT00 | SagnacObservable::HalfT11MinusT22) => (Some(e * tau / 2.0), None),
        (SagnacKind::PhotonV, SagnacObservable::T11 | SagnacObservable::MinusT22) => (None, Some(tau * e)),
        (SagnacKind::PhotonV, SagnacObservable::T00) => (None, Some(0.0)),
        _ => (None, None),
    }
}

pub fn kind_label(kind: SagnacKind) -> &'static str {
    match kind {
        SagnacKind::DiracA => "DiracA",
        SagnacKind::DiracB => "DiracB",
        SagnacKind::Scalar => "Scalar",
        SagnacKind::PhotonV => "PhotonV",
    }
}

/// One line of the regression table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionRow {
    pub config: String,
    pub observable: String,
    pub n: usize,
    pub value: f64,
    pub paper_value_main: Option<f64>,
    pub paper_value_appendix: Option<f64>,
    pub defect: f64,
    /// main | appendix | both | neither | n/a
    pub agrees: String,
}

pub const REGRESSION_HEADER: [&str; 8] =
    ["config", "observable", "n", "value", "paper_value_main", "paper_value_appendix", "defect", "agrees"];

fn agreement(value: f64, main: Option<f64>, app: Option<f64>, tol: f64) -> String {
    let ok = |x: Option<f64>| x.map(|x| (value - x).abs() <= tol * x.abs().max(1.0));
    match (ok(main), ok(app)) {
        (None, None) => "n/a",
        (Some(true), Some(true)) => "both",
        (Some(true), _) => "main",
        (_, Some(true)) => "appendix",
        _ => "neither",
    }
    .to_string()
}

/// Rows n = 1..=n_max for one run; quoted values are raised to the n-th power.
pub fn regression_rows(run: &SagnacRun, obs: SagnacObservable, convention: StressConvention, n_max: usize, tol: f64) -> Result<Vec<RegressionRow>> {
    let report = run.moments(n_max)?;
    let (main, app) = paper_values(run.config.kind, obs, &run.kinematics, run.window.tau);
    let conv = match (run.config.kind, convention) {
        (SagnacKind::PhotonV, StressConvention::Covariant) => " [covariant]",
        (SagnacKind::PhotonV, StressConvention::MaxwellStress) => " [maxwell]",
        _ => "",
    };
    Ok(report
        .moments
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let n = i + 1;
            let (pm, pa) = (main.map(|x| x.powi(n as i32)), app.map(|x| x.powi(n as i32)));
            RegressionRow {
                config: format!("{}(m={},k3={})", kind_label(run.config.kind), run.kinematics.mass, run.kinematics.k3),
                observable: format!("{}{conv}", obs.label()),
                n,
                value: v.re,
                paper_value_main: pm,
                paper_value_appendix: pa,
                defect: report.defect,
                agrees: agreement(v.re, pm, pa, tol),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_sizes() {
        // 4 modes, ≤ 2 particles: 1 + 4 + 6 fermion, 1 + 4 + 10 boson.
        assert_eq!(sagnac_space(SagnacKind::DiracB, 2.0 * PI, 1.0).unwrap().dim(), 11);
        assert_eq!(sagnac_space(SagnacKind::Scalar, 2.0 * PI, 1.0).unwrap().dim(), 15);
    }

    #[test]
    fn dirac_a_signal() {
        let run = SagnacRun::new(SagnacKind::DiracA, 2.0 * PI, 1.0, SagnacObservable::J0, 1, StressConvention::Covariant).unwrap();
        let r = run.moments(4).unwrap();
        let want = run.window.tau * run.kinematics.mass / (2.0 * run.kinematics.energy);
        assert!((r.moments[0].re - want).abs() < 1e-10, "{} vs {want}", r.moments[0]);
        assert!(r.defect < 1e-10 && r.leaked == 0.0);
    }

    #[test]
    fn moment_order_checked() {
        let run = SagnacRun::new(SagnacKind::Scalar, 2.0 * PI, 1.0, SagnacObservable::T00, 1, StressConvention::Covariant).unwrap();
        assert!(run.moments(7).is_err());
    }

    #[test]
    fn agreement_labels() {
        assert_eq!(agreement(1.0, Some(1.0), Some(0.5), 1e-10), "main");
        assert_eq!(agreement(0.5, Some(1.0), Some(0.5), 1e-10), "appendix");
        assert_eq!(agreement(2.0, Some(1.0), None, 1e-10), "neither");
    }
}
