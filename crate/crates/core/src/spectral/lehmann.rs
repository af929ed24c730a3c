use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::QuadraticObservable;
use crate::fock::{FockSpace, SparseOperator};
use crate::spacetime::FourVector;
use crate::C64;

/// Tag written alongside box-normalized eigenstate sums.
pub const BOX_NORM_TAG: &str = "box: sum of rho_m X_mn Y_nm over one energy bin";

const LATTICE_TOL: f64 = 1e-9;

/// One value of G_XY(p).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSample {
    pub p: FourVector,
    pub g: C64,
    /// `None` is zero temperature.
    pub beta: Option<f64>,
    pub x: String,
    pub y: String,
    pub norm_tag: String,
    /// Eigenstate pairs (m, n) that satisfy the energy-momentum constraint.
    pub terms: usize,
    /// Largest normalized Boltzmann weight among contributing initial states.
    pub dominant_weight: f64,
    /// Σ_m e^{−βE_m}, energies measured from the vacuum.
    pub partition_function: f64,
    pub bin_width: f64,
    /// Same sum with the bin halved.
    pub g_half_bin: C64,
}

impl SpectralSample {
    pub fn bin_converged(&self, tol: f64) -> bool {
        (self.g - self.g_half_bin).norm() <= tol * self.g.norm().max(f64::MIN_POSITIVE)
    }
}

/// Default energy bin: an eighth of the smallest mode spacing over all grids.
pub fn default_bin_width(space: &FockSpace) -> f64 {
    space.grids().iter().map(|(_, g)| g.min_mode_spacing()).fold(f64::INFINITY, f64::min) / 8.0
}

fn check_lattice(space: &FockSpace, p: &FourVector) -> Result<()> {
    let k = p.spatial();
    let on = |g: &crate::fock::ModeGrid| {
        (0..3).all(|a| {
            if g.ranges[a] == (0, 0) {
                k[a].abs() <= LATTICE_TOL
            } else {
                let n = k[a] * g.lengths[a] / (2.0 * PI);
                (n - n.round()).abs() <= LATTICE_TOL
            }
        })
    };
    if space.grids().iter().any(|(_, g)| on(g)) {
        Ok(())
    } else {
        Err(Error::OffLatticeMomentum(k))
    }
}

/// G_XY(p) = Σ_{m,n} ρ_m ⟨m|X|n⟩⟨n|Y|m⟩ over pairs with P_n − P_m = p and
/// |E_n − E_m − p⁰| ≤ Δω/2.
pub fn lehmann_spectral_density(
    space: &FockSpace,
    x: &QuadraticObservable,
    y: &QuadraticObservable,
    p: FourVector,
    beta: Option<f64>,
) -> Result<SpectralSample> {
    let (xo, yo) = (x.realize(space), y.realize(space));
    lehmann_from_operators(space, (&x.label, &xo), (&y.label, &yo), p, beta, None)
}

/// As [`lehmann_spectral_density`] for operators already realized at x = 0.
pub fn lehmann_from_operators(
    space: &FockSpace,
    x: (&str, &SparseOperator),
    y: (&str, &SparseOperator),
    p: FourVector,
    beta: Option<f64>,
    bin_width: Option<f64>,
) -> Result<SpectralSample> {
    let dim = space.dim();
    for op in [x.1, y.1] {
        if op.dim() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: op.dim() });
        }
    }
    if let Some(b) = beta {
        if !(b > 0.0) {
            return Err(Error::InvalidArgument(format!("beta must be positive, got {b}")));
        }
    }
    check_lattice(space, &p)?;
    let dw = bin_width.unwrap_or_else(|| default_bin_width(space));
    if !(dw > 0.0) || !dw.is_finite() {
        return Err(Error::InvalidArgument("energy bin width must be positive".into()));
    }

    let e0 = space.energies().iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = match beta {
        Some(b) => space.energies().iter().map(|e| (-b * (e - e0)).exp()).collect(),
        None => (0..dim).map(|i| if i == space.vacuum_index() { 1.0 } else { 0.0 }).collect(),
    };
    let z: f64 = weights.iter().sum();
    let k = p.spatial();
    // Row m of Y† lists conj(Y_nm).
    let y_dag = y.1.adjoint();

    let mut g = C64::new(0.0, 0.0);
    let mut g_half = C64::new(0.0, 0.0);
    let mut terms = 0;
    let mut dominant = 0.0f64;
    for m in 0..dim {
        let w = weights[m];
        if w == 0.0 {
            continue;
        }
        let (em, pm) = (space.energy(m), space.momentum(m));
        for &(n, y_nm_conj) in y_dag.row(m) {
            let pn = space.momentum(n);
            if (0..3).any(|a| (pn[a] - pm[a] - k[a]).abs() > LATTICE_TOL * (1.0 + k[a].abs())) {
                continue;
            }
            let de = (space.energy(n) - em - p[0]).abs();
            if de > dw / 2.0 {
                continue;
            }
            let v = w * x.1.get(m, n) * y_nm_conj.conj();
            terms += 1;
            dominant = dominant.max(w / z);
            g += v;
            if de <= dw / 4.0 {
                g_half += v;
            }
        }
    }
    Ok(SpectralSample {
        p,
        g: g / z,
        beta,
        x: x.0.to_string(),
        y: y.0.to_string(),
        norm_tag: BOX_NORM_TAG.to_string(),
        terms,
        dominant_weight: dominant,
        partition_function: z,
        bin_width: dw,
        g_half_bin: g_half / z,
    })
}

/// Least-squares slope of ln|G| against β at fixed space-like p.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuppressionFit {
    pub p: FourVector,
    pub betas: Vec<f64>,
    pub log_abs_g: Vec<f64>,
    pub slope: f64,
    /// −(|p| − |p⁰|)/2
    pub bound_slope: f64,
}

impl SuppressionFit {
    /// slope ≤ bound·(1 − tol), the bound being negative.
    pub fn respects_bound(&self, tol: f64) -> bool {
        self.slope <= self.bound_slope * (1.0 - tol)
    }
}

pub fn suppression_fit(
    space: &FockSpace,
    x: &QuadraticObservable,
    y: &QuadraticObservable,
    p: FourVector,
    betas: &[f64],
) -> Result<SuppressionFit> {
    let (xo, yo) = (x.realize(space), y.realize(space));
    suppression_fit_operators(space, (&x.label, &xo), (&y.label, &yo), p, betas)
}

pub fn suppression_fit_operators(
    space: &FockSpace,
    x: (&str, &SparseOperator),
    y: (&str, &SparseOperator),
    p: FourVector,
    betas: &[f64],
) -> Result<SuppressionFit> {
    if betas.len() < 2 {
        return Err(Error::InvalidArgument("need at least two temperatures".into()));
    }
    let mut logs = Vec::with_capacity(betas.len());
    for &b in betas {
        let s = lehmann_from_operators(space, x, y, p, Some(b), None)?;
        if s.g.norm() == 0.0 {
            return Err(Error::InvalidArgument(format!("G vanishes at beta = {b}; no slope to fit")));
        }
        logs.push(s.g.norm().ln());
    }
    Ok(SuppressionFit {
        p,
        betas: betas.to_vec(),
        slope: fit_line(betas, &logs).1,
        log_abs_g: logs,
        bound_slope: -(p.spatial_norm() - p[0].abs()) / 2.0,
    })
}

/// (intercept, slope) of the least-squares line through (x, y).
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (my - slope * mx, slope)
}
