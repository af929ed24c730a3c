use serde::{Deserialize, Serialize};

use super::grid::Channel;
use super::space::FockSpace;
use super::sparse::SparseOperator;
use crate::error::{Error, Result};
use crate::C64;

const NORM_TOL: f64 = 1e-12;

/// Normalized pure state on a Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// Normalizes `amplitudes`; rejects the zero vector.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidArgument("state has zero or non-finite norm".into()));
        }
        Ok(StateVector { amplitudes: amplitudes.into_iter().map(|a| a / n).collect() })
    }

    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::DimensionMismatch { left: dim, right: i });
        }
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[i] = C64::new(1.0, 0.0);
        Ok(StateVector { amplitudes: v })
    }

    pub fn vacuum(space: &FockSpace) -> Self {
        Self::basis(space.dim(), space.vacuum_index()).expect("vacuum is in the basis")
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &[C64]) -> Result<C64> {
        if other.len() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: other.len() });
        }
        Ok(self.amplitudes.iter().zip(other).map(|(a, b)| a.conj() * b).sum())
    }
}

/// Mixed state. Gibbs states stay diagonal in the occupation basis.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityOperator {
    Diagonal(Vec<f64>),
    Dense(SparseOperator),
}

impl DensityOperator {
    pub fn dim(&self) -> usize {
        match self {
            DensityOperator::Diagonal(w) => w.len(),
            DensityOperator::Dense(m) => m.dim(),
        }
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        let mut trip = Vec::new();
        for (i, x) in a.iter().enumerate() {
            for (j, y) in a.iter().enumerate() {
                trip.push((i, j, x * y.conj()));
            }
        }
        DensityOperator::Dense(SparseOperator::from_triplets(a.len(), trip))
    }

    pub fn trace(&self) -> C64 {
        match self {
            DensityOperator::Diagonal(w) => C64::new(w.iter().sum(), 0.0),
            DensityOperator::Dense(m) => (0..m.dim()).map(|i| m.get(i, i)).sum(),
        }
    }

    /// Diagonal weights; `None` for a dense operator.
    pub fn weights(&self) -> Option<&[f64]> {
        match self {
            DensityOperator::Diagonal(w) => Some(w),
            DensityOperator::Dense(_) => None,
        }
    }
}

/// Gibbs state Z⁻¹e^{−βH₀}; `beta = None` is the vacuum projector.
pub fn thermal_state(space: &FockSpace, beta: Option<f64>) -> Result<DensityOperator> {
    let dim = space.dim();
    let mut w = vec![0.0; dim];
    match beta {
        None => w[space.vacuum_index()] = 1.0,
        Some(b) if b > 0.0 => {
            let e0 = space.energies().iter().copied().fold(f64::INFINITY, f64::min);
            for (wi, e) in w.iter_mut().zip(space.energies()) {
                *wi = (-b * (e - e0)).exp();
            }
            let z: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= z);
        }
        Some(b) => return Err(Error::InvalidArgument(format!("beta must be positive, got {b}"))),
    }
    Ok(DensityOperator::Diagonal(w))
}

/// Anything an operator expectation can be taken in.
pub trait Expectation {
    fn expectation(&self, op: &SparseOperator) -> Result<C64>;
}

impl Expectation for StateVector {
    fn expectation(&self, op: &SparseOperator) -> Result<C64> {
        let v = op.apply(&self.amplitudes)?;
        self.inner(&v)
    }
}

impl Expectation for DensityOperator {
    fn expectation(&self, op: &SparseOperator) -> Result<C64> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: op.dim() });
        }
        match self {
            DensityOperator::Diagonal(w) => Ok(w
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0.0)
                .map(|(i, &x)| op.get(i, i) * x)
                .sum()),
            DensityOperator::Dense(rho) => {
                let prod = rho.matmul(op)?;
                Ok((0..prod.dim()).map(|i| prod.get(i, i)).sum())
            }
        }
    }
}

pub fn expectation<S: Expectation + ?Sized>(state: &S, op: &SparseOperator) -> Result<C64> {
    state.expectation(op)
}

/// Counter-propagating state families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SagnacKind {
    /// (|L,k⟩ + |R,−k⟩)/√2
    DiracA,
    /// (|L,k⟩ − |L,−k⟩)/√2
    DiracB,
    /// (|k⟩ + |−k⟩)/√2
    Scalar,
    /// (|V,k⟩ + |V,−k⟩)/√2
    PhotonV,
}

impl SagnacKind {
    pub fn channels(self) -> (Channel, Channel) {
        match self {
            SagnacKind::DiracA => (Channel::DiracL, Channel::DiracR),
            SagnacKind::DiracB => (Channel::DiracL, Channel::DiracL),
            SagnacKind::Scalar => (Channel::Scalar, Channel::Scalar),
            SagnacKind::PhotonV => (Channel::PhotonV, Channel::PhotonV),
        }
    }

    fn relative_sign(self) -> f64 {
        match self {
            SagnacKind::DiracB => -1.0,
            _ => 1.0,
        }
    }
}

/// Sagnac state along axis 3: wavenumber k³ = 2π n₃/L₃ on the channel grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SagnacConfig {
    pub kind: SagnacKind,
    pub n3: i32,
    /// Extra phase on the −k³ arm.
    pub phase: f64,
}

impl SagnacConfig {
    pub fn new(kind: SagnacKind, n3: i32) -> Self {
        SagnacConfig { kind, n3, phase: 0.0 }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    /// (mass, k³, E, group velocity k³/E) read from the channel grid.
    pub fn kinematics(&self, space: &FockSpace) -> Result<SagnacKinematics> {
        let (c, _) = self.kind.channels();
        let grid = space.grid(c).ok_or_else(|| Error::UnknownMode(format!("no {c:?} grid")))?;
        let k3 = grid.momentum([0, 0, self.n3])[2];
        let energy = grid.energy([0.0, 0.0, k3]);
        Ok(SagnacKinematics { mass: grid.mass, k3, energy, velocity: grid.speed * grid.speed * k3 / energy })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SagnacKinematics {
    pub mass: f64,
    pub k3: f64,
    pub energy: f64,
    pub velocity: f64,
}

pub fn sagnac_state(space: &FockSpace, cfg: &SagnacConfig) -> Result<StateVector> {
    let (c1, c2) = cfg.kind.channels();
    let m1 = space.mode_index(c1, [0, 0, cfg.n3])?;
    let m2 = space.mode_index(c2, [0, 0, -cfg.n3])?;
    let mut v = vec![C64::new(0.0, 0.0); space.dim()];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for (mode, amp) in [(m1, C64::new(s, 0.0)), (m2, C64::from_polar(s * cfg.kind.relative_sign(), cfg.phase))] {
        let mut cfg = vec![0u8; space.modes().len()];
        cfg[mode] = 1;
        let i = space
            .index_of(&cfg)
            .ok_or_else(|| Error::UnknownMode("single-particle state outside truncation".into()))?;
        v[i] += amp;
    }
    StateVector::new(v)
}

/// Checks a state for unit norm within the construction tolerance.
pub fn is_normalized(state: &StateVector) -> bool {
    (state.norm() - 1.0).abs() <= NORM_TOL
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::grid::{ModeGrid, Species};
    use crate::fock::space::{build_fock_space, Ladder};
    use std::f64::consts::PI;

    fn one_mode(species: Species, channel: Channel, cap: u8) -> FockSpace {
        let g = ModeGrid::new([2.0 * PI; 3], [(0, 0), (0, 0), (1, 1)], species, 1.0).unwrap().with_zero_mode(false);
        build_fock_space(&[(channel, g)], cap, cap as u32).unwrap()
    }

    #[test]
    fn number_expectations() {
        let s = one_mode(Species::Boson, Channel::Scalar, 4);
        let n = s.realize(&[(C64::new(1.0, 0.0), vec![Ladder::create(0), Ladder::annihilate(0)])]);
        let vac = StateVector::vacuum(&s);
        assert_eq!(vac.expectation(&n).unwrap(), C64::new(0.0, 0.0));
        let one = StateVector::basis(s.dim(), 1).unwrap();
        assert_eq!(one.expectation(&n).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn thermal_occupations() {
        let beta = 0.7;
        let s = one_mode(Species::Fermion, Channel::DiracL, 1);
        let e = s.modes()[0].energy;
        let rho = thermal_state(&s, Some(beta)).unwrap();
        let n = s.realize(&[(C64::new(1.0, 0.0), vec![Ladder::create(0), Ladder::annihilate(0)])]);
        let got = rho.expectation(&n).unwrap().re;
        assert!((got - 1.0 / ((beta * e).exp() + 1.0)).abs() < 1e-14);

        let b = one_mode(Species::Boson, Channel::Scalar, 40);
        let rho = thermal_state(&b, Some(beta)).unwrap();
        let n = b.realize(&[(C64::new(1.0, 0.0), vec![Ladder::create(0), Ladder::annihilate(0)])]);
        let got = rho.expectation(&n).unwrap().re;
        let bound = ((-beta * e * 40.0).exp() * 50.0).max(1e-13);
        assert!((got - 1.0 / ((beta * e).exp() - 1.0)).abs() < bound);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_temperature_is_vacuum() {
        let s = one_mode(Species::Boson, Channel::Scalar, 3);
        let rho = thermal_state(&s, None).unwrap();
        assert_eq!(rho.weights().unwrap(), &[1.0, 0.0, 0.0, 0.0]);
        assert!(thermal_state(&s, Some(-1.0)).is_err());
    }

    #[test]
    fn sagnac_amplitudes() {
        let g = ModeGrid::line(3, 2.0 * PI, 1, Species::Fermion, 1.0).unwrap();
        let s = build_fock_space(&[(Channel::DiracL, g.clone()), (Channel::DiracR, g)], 1, 1).unwrap();
        let psi = sagnac_state(&s, &SagnacConfig::new(SagnacKind::DiracB, 1)).unwrap();
        assert!(is_normalized(&psi));
        let lp = s.mode_index(Channel::DiracL, [0, 0, 1]).unwrap();
        let lm = s.mode_index(Channel::DiracL, [0, 0, -1]).unwrap();
        let idx = |m: usize| {
            let mut c = vec![0u8; s.modes().len()];
            c[m] = 1;
            s.index_of(&c).unwrap()
        };
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((psi.amplitudes()[idx(lp)].re - r).abs() < 1e-15);
        assert!((psi.amplitudes()[idx(lm)].re + r).abs() < 1e-15);
        assert!(sagnac_state(&s, &SagnacConfig::new(SagnacKind::DiracB, 3)).is_err());
    }
}
