use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Species {
    Boson,
    Fermion,
}

/// Field channel a mode belongs to. The derive order fixes the basis order:
/// modes are sorted by (channel, n₁, n₂, n₃).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Channel {
    Scalar,
    DiracL,
    DiracR,
    /// Antiparticle partner of `DiracL` (operators b̂^L).
    AntiDiracL,
    /// Antiparticle partner of `DiracR` (operators b̂^R).
    AntiDiracR,
    PhotonH,
    PhotonV,
}

impl Channel {
    pub fn species(self) -> Species {
        match self {
            Channel::Scalar | Channel::PhotonH | Channel::PhotonV => Species::Boson,
            _ => Species::Fermion,
        }
    }
}

/// Momentum lattice k_i = 2π n_i / L_i of one field channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeGrid {
    pub lengths: [f64; 3],
    /// Inclusive integer bounds of n_i per axis; (0, 0) marks an inactive axis.
    pub ranges: [(i32, i32); 3],
    pub species: Species,
    pub mass: f64,
    /// Propagation speed in E = √(m² + v²|k|²); 1 for vacuum, a Fermi velocity otherwise.
    pub speed: f64,
    pub include_zero_mode: bool,
}

impl ModeGrid {
    /// Symmetric grid n ∈ [−n_max, n_max] along one axis (1, 2 or 3).
    ///
    /// The k = 0 mode is dropped for massless grids and for fermions.
    pub fn line(axis: usize, length: f64, n_max: i32, species: Species, mass: f64) -> Result<Self> {
        if !(1..=3).contains(&axis) {
            return Err(Error::InvalidArgument(format!("axis {axis} not in 1..=3")));
        }
        let mut ranges = [(0, 0); 3];
        ranges[axis - 1] = (-n_max, n_max);
        Self::new([length; 3], ranges, species, mass)
    }

    /// Cubic grid n_i ∈ [−n_max, n_max] on the first `dim` axes.
    pub fn cube(dim: usize, length: f64, n_max: i32, species: Species, mass: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidArgument(format!("dimension {dim} not in 1..=3")));
        }
        let mut ranges = [(0, 0); 3];
        for r in ranges.iter_mut().take(dim) {
            *r = (-n_max, n_max);
        }
        Self::new([length; 3], ranges, species, mass)
    }

    pub fn new(lengths: [f64; 3], ranges: [(i32, i32); 3], species: Species, mass: f64) -> Result<Self> {
        if lengths.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::InvalidArgument("box lengths must be positive".into()));
        }
        if ranges.iter().any(|&(lo, hi)| lo > hi) {
            return Err(Error::InvalidArgument("empty mode range".into()));
        }
        if !(mass >= 0.0) {
            return Err(Error::InvalidArgument("mass must be non-negative".into()));
        }
        let include_zero_mode = mass > 0.0 && species == Species::Boson;
        Ok(ModeGrid { lengths, ranges, species, mass, speed: 1.0, include_zero_mode })
    }

    pub fn with_speed(mut self, speed: f64) -> Self {
        self.speed = speed;
        self
    }

    pub fn with_zero_mode(mut self, include: bool) -> Self {
        self.include_zero_mode = include;
        self
    }

    pub fn active_axes(&self) -> Vec<usize> {
        (0..3).filter(|&i| self.ranges[i] != (0, 0)).collect()
    }

    /// Spatial dimension D (number of active axes).
    pub fn dimension(&self) -> usize {
        self.active_axes().len()
    }

    /// Box volume over the active axes (transverse extent taken as 1).
    pub fn volume(&self) -> f64 {
        self.active_axes().iter().map(|&i| self.lengths[i]).product()
    }

    pub fn momentum(&self, n: [i32; 3]) -> [f64; 3] {
        std::array::from_fn(|i| 2.0 * PI * n[i] as f64 / self.lengths[i])
    }

    pub fn energy(&self, k: [f64; 3]) -> f64 {
        let k2: f64 = k.iter().map(|c| c * c).sum();
        (self.mass * self.mass + self.speed * self.speed * k2).sqrt()
    }

    pub fn contains(&self, n: [i32; 3]) -> bool {
        let in_range = (0..3).all(|i| n[i] >= self.ranges[i].0 && n[i] <= self.ranges[i].1);
        in_range && (self.include_zero_mode || n != [0, 0, 0])
    }

    /// Grid indices in lexicographic (n₁, n₂, n₃) order.
    pub fn indices(&self) -> Vec<[i32; 3]> {
        let mut out = Vec::new();
        for a in self.ranges[0].0..=self.ranges[0].1 {
            for b in self.ranges[1].0..=self.ranges[1].1 {
                for c in self.ranges[2].0..=self.ranges[2].1 {
                    let n = [a, b, c];
                    if self.contains(n) {
                        out.push(n);
                    }
                }
            }
        }
        out
    }

    /// Smallest nonzero lattice spacing of the dispersion among included modes.
    pub fn min_mode_spacing(&self) -> f64 {
        let mut e: Vec<f64> = self.indices().iter().map(|&n| self.energy(self.momentum(n))).collect();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        e.windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
            .min(e.first().copied().unwrap_or(f64::INFINITY))
    }
}

/// One single-particle mode of the Fock space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub channel: Channel,
    pub n: [i32; 3],
    pub k: [f64; 3],
    pub energy: f64,
    pub species: Species,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn massless_line_drops_zero_mode() {
        let g = ModeGrid::line(3, 2.0 * PI, 2, Species::Boson, 0.0).unwrap();
        assert_eq!(g.indices().len(), 4);
        assert!(!g.contains([0, 0, 0]));
        assert_eq!(g.dimension(), 1);
        assert!((g.energy(g.momentum([0, 0, 2])) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn massive_boson_keeps_zero_mode_and_fermion_drops_it() {
        let b = ModeGrid::line(1, 1.0, 1, Species::Boson, 1.0).unwrap();
        assert_eq!(b.indices().len(), 3);
        let f = ModeGrid::line(1, 1.0, 1, Species::Fermion, 1.0).unwrap();
        assert_eq!(f.indices().len(), 2);
    }

    #[test]
    fn fermi_velocity_scales_dispersion() {
        let g = ModeGrid::line(1, 2.0 * PI, 1, Species::Fermion, 0.0).unwrap().with_speed(0.01);
        assert!((g.energy(g.momentum([1, 0, 0])) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ModeGrid::line(0, 1.0, 1, Species::Boson, 0.0).is_err());
        assert!(ModeGrid::line(1, -1.0, 1, Species::Boson, 0.0).is_err());
        assert!(ModeGrid::line(1, 1.0, 1, Species::Boson, -0.1).is_err());
    }
}
