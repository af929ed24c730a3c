use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{QuadraticObservable, SpatialWeight};
use crate::fock::{FockSpace, ModeGrid};
use crate::spacetime::{classify_interval, FourVector, IntervalClass};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Envelope {
    /// Sharp box of the window extents, centred on the origin.
    Rectangular,
    /// Gaussian profiles of width σ_x per active axis and σ_t in time.
    Gaussian { sigma_x: f64, sigma_t: f64 },
}

/// Space-time averaging region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementWindow {
    /// Extent per spatial axis; `None` for axes the fields do not depend on.
    pub extents: [Option<f64>; 3],
    pub tau: f64,
    pub envelope: Envelope,
}

/// ℓ sinc(Kℓ/2), exactly 0 at nonzero multiples of 2π/ℓ.
pub fn box_transform(k: f64, ell: f64) -> f64 {
    let x = k * ell / 2.0;
    if x.abs() < 1e-12 {
        return ell;
    }
    let n = x / PI;
    if (n - n.round()).abs() < 1e-9 * n.abs().max(1.0) {
        return 0.0;
    }
    ell * x.sin() / x
}

/// √(2π)σ e^{−σ²K²/2}
pub fn gaussian_transform(k: f64, sigma: f64) -> f64 {
    (2.0 * PI).sqrt() * sigma * (-(sigma * k).powi(2) / 2.0).exp()
}

impl MeasurementWindow {
    /// The whole box of `grid` over time τ.
    pub fn full_box(grid: &ModeGrid, tau: f64) -> Result<Self> {
        let mut extents = [None; 3];
        for a in grid.active_axes() {
            extents[a] = Some(grid.lengths[a]);
        }
        Self::new(extents, tau, Envelope::Rectangular)
    }

    pub fn new(extents: [Option<f64>; 3], tau: f64, envelope: Envelope) -> Result<Self> {
        if !(tau > 0.0) || extents.iter().flatten().any(|&l| !(l > 0.0)) {
            return Err(Error::InvalidArgument("window extents and duration must be positive".into()));
        }
        if let Envelope::Gaussian { sigma_x, sigma_t } = envelope {
            if !(sigma_x > 0.0 && sigma_t > 0.0) {
                return Err(Error::InvalidArgument("Gaussian widths must be positive".into()));
            }
        }
        Ok(MeasurementWindow { extents, tau, envelope })
    }

    /// Open-space run: the duration is the transit time L/v.
    pub fn open_space(grid: &ModeGrid, length: f64, velocity: f64) -> Result<Self> {
        if !(velocity > 0.0) {
            return Err(Error::InvalidArgument("group velocity must be positive".into()));
        }
        Self::full_box(grid, length / velocity)
    }

    pub fn volume(&self) -> f64 {
        match self.envelope {
            Envelope::Rectangular => self.extents.iter().flatten().product(),
            Envelope::Gaussian { sigma_x, .. } => {
                self.extents.iter().flatten().map(|_| (2.0 * PI).sqrt() * sigma_x).product()
            }
        }
    }

    /// ∫ w(x) e^{iK·x} d^{D+1}x, with K·x = K⁰t − K·x.
    pub fn transform(&self, k: &FourVector) -> f64 {
        let spatial = |f: &dyn Fn(f64, f64) -> f64| -> f64 {
            (0..3)
                .map(|a| match self.extents[a] {
                    Some(ell) => f(k[a + 1], ell),
                    None => 1.0,
                })
                .product()
        };
        match self.envelope {
            Envelope::Rectangular => box_transform(k[0], self.tau) * spatial(&box_transform),
            Envelope::Gaussian { sigma_x, sigma_t } => {
                gaussian_transform(k[0], sigma_t) * spatial(&|q, _| gaussian_transform(q, sigma_x))
            }
        }
    }

    /// transform(K)/transform(0).
    pub fn normalized_transform(&self, k: &FourVector) -> f64 {
        self.transform(k) / self.transform(&FourVector::default())
    }

    pub fn label(&self) -> String {
        match self.envelope {
            Envelope::Rectangular => format!("rect(V={},tau={})", self.volume(), self.tau),
            Envelope::Gaussian { sigma_x, sigma_t } => format!("gauss(sx={sigma_x},st={sigma_t})"),
        }
    }
}

/// S̄ = ∫ w(x) S(x) dx, each term weighted by the window transform at its transfer.
pub fn windowed_observable(space: &FockSpace, s: &QuadraticObservable, w: &MeasurementWindow) -> QuadraticObservable {
    let mut out = s.map_transfer(space, |k| C64::new(w.transform(k), 0.0));
    out.zero_point = s.zero_point * w.transform(&FourVector::default());
    out.weight = SpatialWeight::Window(w.label());
    out.label = format!("{}[{}]", s.label, w.label());
    out
}

/// S̄(p) = ∫ w(x) cos(p·x) S(x) dx.
///
/// Returns the observable and whether p was space-like (not enforced).
pub fn spacelike_windowed_observable(
    space: &FockSpace,
    s: &QuadraticObservable,
    p: &FourVector,
    w: &MeasurementWindow,
) -> (QuadraticObservable, bool) {
    let cos_weight = |k: &FourVector| (w.transform(&(*k + *p)) + w.transform(&(*k - *p))) / 2.0;
    let mut out = s.map_transfer(space, |k| C64::new(cos_weight(k), 0.0));
    out.zero_point = s.zero_point * cos_weight(&FourVector::default());
    out.weight = SpatialWeight::Cosine { p: p.0, window: w.label() };
    out.label = format!("{}(p)[{}]", s.label, w.label());
    (out, classify_interval(*p, 1e-12) == IntervalClass::Spacelike)
}
