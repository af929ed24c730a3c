use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spacetime::{FourVector, LorentzMatrix};
use crate::C64;

const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TensorRank {
    /// G^{μν} of a vector observable.
    Vector,
    /// G^{μνσρ} of a symmetric rank-2 observable.
    Symmetric2,
    /// G^{μνσρ} of an antisymmetric rank-2 observable.
    Antisymmetric2,
}

impl TensorRank {
    pub fn len(self) -> usize {
        match self {
            TensorRank::Vector => 16,
            _ => 256,
        }
    }
}

/// Sampled correlation at one momentum, all indices upper, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorCorrelation {
    pub rank: TensorRank,
    pub p: FourVector,
    pub values: Vec<C64>,
}

pub(crate) fn idx4(a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * 4 + b) * 4 + c) * 4 + d
}

impl TensorCorrelation {
    /// Validates length and the declared index symmetries.
    pub fn new(rank: TensorRank, p: FourVector, values: Vec<C64>) -> Result<Self> {
        if values.len() != rank.len() {
            return Err(Error::DimensionMismatch { left: rank.len(), right: values.len() });
        }
        let t = TensorCorrelation { rank, p, values };
        let defect = t.symmetry_defect();
        let scale = t.max_abs().max(1.0);
        if defect > SYMMETRY_TOL * scale {
            return Err(Error::InvalidArgument(format!("declared index symmetry violated by {defect:e}")));
        }
        Ok(t)
    }

    pub fn from_fn2<F: Fn(usize, usize) -> C64>(p: FourVector, f: F) -> Result<Self> {
        let values = (0..16).map(|i| f(i / 4, i % 4)).collect();
        Self::new(TensorRank::Vector, p, values)
    }

    pub fn from_fn4<F: Fn(usize, usize, usize, usize) -> C64>(rank: TensorRank, p: FourVector, f: F) -> Result<Self> {
        let values = (0..256).map(|i| f(i / 64, (i / 16) % 4, (i / 4) % 4, i % 4)).collect();
        Self::new(rank, p, values)
    }

    pub fn get2(&self, mu: usize, nu: usize) -> C64 {
        self.values[mu * 4 + nu]
    }

    pub fn get4(&self, mu: usize, nu: usize, s: usize, r: usize) -> C64 {
        self.values[idx4(mu, nu, s, r)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest violation of the pair symmetries of a rank-4 correlation.
    pub fn symmetry_defect(&self) -> f64 {
        let sign = match self.rank {
            TensorRank::Vector => return 0.0,
            TensorRank::Symmetric2 => 1.0,
            TensorRank::Antisymmetric2 => -1.0,
        };
        let mut worst = 0.0f64;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let v = self.get4(a, b, c, d);
                        worst = worst.max((v - sign * self.get4(b, a, c, d)).norm());
                        worst = worst.max((v - sign * self.get4(a, b, d, c)).norm());
                    }
                }
            }
        }
        worst
    }

    /// The same correlation seen in the frame x′ = Λx.
    pub fn transformed(&self, l: &LorentzMatrix) -> Self {
        let n = if self.rank == TensorRank::Vector { 2 } else { 4 };
        let mut cur = self.values.clone();
        // Contract one index at a time.
        for slot in 0..n {
            let stride = 4usize.pow((n - 1 - slot) as u32);
            let mut next = vec![C64::new(0.0, 0.0); cur.len()];
            for (i, out) in next.iter_mut().enumerate() {
                let mu = (i / stride) % 4;
                let base = i - mu * stride;
                *out = (0..4).map(|a| cur[base + a * stride] * l.0[mu][a]).sum();
            }
            cur = next;
        }
        TensorCorrelation { rank: self.rank, p: l.apply(self.p), values: cur }
    }
}
