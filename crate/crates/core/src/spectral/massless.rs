use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spacetime::{g, FourVector};

/// Distribution in p·p multiplying the tensor prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupportType {
    /// δ(p·p), D = 1
    LightconeDelta,
    /// θ(p·p)/√(p·p), D = 2
    InverseSqrt,
    /// θ(p·p), D = 3
    Step,
}

impl SupportType {
    pub fn for_dimension(d: usize) -> Result<Self> {
        match d {
            1 => Ok(SupportType::LightconeDelta),
            2 => Ok(SupportType::InverseSqrt),
            3 => Ok(SupportType::Step),
            _ => Err(Error::InvalidArgument(format!("spatial dimension {d} not in 1..=3"))),
        }
    }
}

/// Value of a spectral component at one momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpectralValue {
    Zero,
    Density(f64),
    /// Coefficient of δ(p·p).
    LightconeDelta(f64),
}

impl SpectralValue {
    pub fn is_zero(&self) -> bool {
        matches!(self, SpectralValue::Zero)
    }
}

/// Unit-normalized massless spectrum: tensor · support(p·p) · θ(p⁰).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDescriptor {
    pub support: SupportType,
    pub dimension: usize,
    pub p: FourVector,
    pub tensor: [[f64; 4]; 4],
}

const LIGHTCONE_TOL: f64 = 1e-12;

impl SpectrumDescriptor {
    pub fn evaluate(&self, mu: usize, nu: usize) -> SpectralValue {
        let p = &self.p;
        let pp = p.dot(p);
        if pp < 0.0 || p[0] <= 0.0 {
            return SpectralValue::Zero;
        }
        let t = self.tensor[mu][nu];
        let lightlike = pp <= LIGHTCONE_TOL * p.euclidean_norm_sqr();
        match (self.support, lightlike) {
            (SupportType::LightconeDelta, true) => SpectralValue::LightconeDelta(t),
            (SupportType::LightconeDelta, false) => SpectralValue::Zero,
            (SupportType::InverseSqrt, true) => SpectralValue::Density(if t == 0.0 { 0.0 } else { t.signum() * f64::INFINITY }),
            (SupportType::InverseSqrt, false) => SpectralValue::Density(t / pp.sqrt()),
            (SupportType::Step, _) => SpectralValue::Density(t),
        }
    }
}

/// Spectrum of the conserved current, tensor p^μp^ν − g^{μν}p·p.
pub fn massless_current_spectrum(d: usize, p: FourVector) -> Result<SpectrumDescriptor> {
    let support = SupportType::for_dimension(d)?;
    let pp = p.dot(&p);
    let mut tensor = [[0.0; 4]; 4];
    for (mu, row) in tensor.iter_mut().enumerate() {
        for (nu, t) in row.iter_mut().enumerate() {
            *t = p[mu] * p[nu] - g(mu, nu) * pp;
        }
    }
    Ok(SpectrumDescriptor { support, dimension: d, p, tensor })
}

/// Energy-density spectrum: the 00 entry carries (|p|²)², the square of the
/// current's 00 prefactor.
pub fn massless_energy_spectrum(d: usize, p: FourVector) -> Result<SpectrumDescriptor> {
    let support = SupportType::for_dimension(d)?;
    let mut tensor = [[0.0; 4]; 4];
    tensor[0][0] = p.spatial_norm().powi(4);
    Ok(SpectrumDescriptor { support, dimension: d, p, tensor })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timelike_step_is_transverse() {
        let p = FourVector::new(2.0, 0.3, -0.4, 1.0);
        let s = massless_current_spectrum(3, p).unwrap();
        for nu in 0..4 {
            let contracted: f64 = (0..4).map(|mu| g(mu, mu) * p[mu] * s.tensor[mu][nu]).sum();
            assert!(contracted.abs() < 1e-12);
        }
        assert_eq!(s.evaluate(1, 1), SpectralValue::Density(p[1] * p[1] + p.dot(&p)));
    }

    #[test]
    fn backward_cone_and_dimension_one() {
        let p = FourVector::new(-2.0, 0.0, 0.0, 1.0);
        assert!(massless_current_spectrum(3, p).unwrap().evaluate(0, 0).is_zero());
        let inside = massless_current_spectrum(1, FourVector::new(2.0, 0.0, 0.0, 1.0)).unwrap();
        assert!(inside.evaluate(0, 0).is_zero());
        let on = massless_current_spectrum(1, FourVector::new(1.0, 0.0, 0.0, 1.0)).unwrap();
        assert_eq!(on.evaluate(3, 3), SpectralValue::LightconeDelta(1.0));
    }

    #[test]
    fn inverse_sqrt_divergence() {
        let at = |e: f64| {
            let p = FourVector::new(1.0 + e, 0.0, 0.0, 1.0);
            match massless_current_spectrum(2, p).unwrap().evaluate(0, 0) {
                SpectralValue::Density(v) => v,
                other => panic!("{other:?}"),
            }
        };
        // G⁰⁰ = |p|²/√(p·p) with p·p ≈ 2e.
        let r = at(1e-8) / at(4e-8);
        assert!((r - 2.0).abs() < 1e-6);
    }

    #[test]
    fn bad_dimension() {
        assert!(massless_current_spectrum(4, FourVector::default()).is_err());
    }
}
