//! Minkowski conventions, boosts and the closed-time-path contour.
//!
//! Natural units (c = ħ = k_B = 1) and signature (+, −, −, −) throughout.
//! A [`FourVector`] always stores four components; lower-dimensional
//! problems leave the unused spatial entries at zero.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Default relative tolerance of [`classify_interval`].
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-12;

/// Diagonal metric entry g_{μμ} = g^{μμ}.
#[inline]
pub fn metric(mu: usize) -> f64 {
    if mu == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Full metric tensor g^{μν}.
#[inline]
pub fn g(mu: usize, nu: usize) -> f64 {
    if mu == nu {
        metric(mu)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub const ZERO: FourVector = FourVector([0.0; 4]);

    pub fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        FourVector([t, x, y, z])
    }

    /// Builds (t, k) from a time component and a spatial 3-vector.
    pub fn from_parts(t: f64, k: [f64; 3]) -> Self {
        FourVector([t, k[0], k[1], k[2]])
    }

    pub fn time(&self) -> f64 {
        self.0[0]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    pub fn spatial_norm(&self) -> f64 {
        let s = self.spatial();
        (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt()
    }

    pub fn dot(&self, other: &FourVector) -> f64 {
        minkowski_dot(*self, *other)
    }

    /// Index-lowered components p_μ = g_{μν} p^ν.
    pub fn lower(&self) -> [f64; 4] {
        [self.0[0], -self.0[1], -self.0[2], -self.0[3]]
    }

    /// Euclidean norm squared Σ (p^μ)², used as the scale in [`classify_interval`].
    pub fn euclidean_norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for FourVector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector(self.0.map(|c| -c))
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, s: f64) -> FourVector {
        FourVector(self.0.map(|c| c * s))
    }
}

/// a⁰b⁰ − a¹b¹ − a²b² − a³b³
pub fn minkowski_dot(a: FourVector, b: FourVector) -> f64 {
    a.0[0] * b.0[0] - a.0[1] * b.0[1] - a.0[2] * b.0[2] - a.0[3] * b.0[3]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntervalClass {
    Timelike,
    Spacelike,
    Lightlike,
}

/// Classifies `p` with an explicit lightlike band of relative width `tol`
/// (scaled by the Euclidean norm Σ(pᵘ)²).
pub fn classify_interval(p: FourVector, tol: f64) -> IntervalClass {
    let pp = p.dot(&p);
    let band = tol * p.euclidean_norm_sqr();
    if pp < -band {
        IntervalClass::Spacelike
    } else if pp > band {
        IntervalClass::Timelike
    } else {
        IntervalClass::Lightlike
    }
}

/// Hyperbolic rotation mixing component 0 with `axis` (1, 2 or 3).
pub fn boost(p: FourVector, rapidity: f64, axis: usize) -> Result<FourVector> {
    Ok(LorentzMatrix::boost(rapidity, axis)?.apply(p))
}

/// A Lorentz transformation Λ^μ_ν stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMatrix(pub [[f64; 4]; 4]);

impl LorentzMatrix {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        LorentzMatrix(m)
    }

    pub fn boost(rapidity: f64, axis: usize) -> Result<Self> {
        if !(1..=3).contains(&axis) {
            return Err(Error::InvalidArgument(format!("boost axis {axis} not in 1..=3")));
        }
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        let mut m = Self::identity().0;
        m[0][0] = ch;
        m[0][axis] = sh;
        m[axis][0] = sh;
        m[axis][axis] = ch;
        Ok(LorentzMatrix(m))
    }

    /// Spatial rotation taking the unit vector along `n` onto +z.
    pub fn rotation_to_z(n: [f64; 3]) -> Self {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        let mut m = Self::identity().0;
        if norm == 0.0 {
            return LorentzMatrix(m);
        }
        let u = [n[0] / norm, n[1] / norm, n[2] / norm];
        // Rodrigues rotation about u × z.
        let axis = [u[1], -u[0], 0.0];
        let s = (axis[0] * axis[0] + axis[1] * axis[1]).sqrt();
        let c = u[2];
        let r: [[f64; 3]; 3] = if s < 1e-15 {
            if c > 0.0 {
                [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
            } else {
                // Rotation by π about x.
                [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]
            }
        } else {
            let k = [axis[0] / s, axis[1] / s, 0.0];
            let kx = [[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]];
            let mut r = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    let mut kk = 0.0;
                    for l in 0..3 {
                        kk += kx[i][l] * kx[l][j];
                    }
                    r[i][j] = if i == j { 1.0 } else { 0.0 } + s * kx[i][j] + (1.0 - c) * kk;
                }
            }
            r
        };
        for i in 0..3 {
            for j in 0..3 {
                m[i + 1][j + 1] = r[i][j];
            }
        }
        LorentzMatrix(m)
    }

    /// For space-like `p`, the transformation mapping it to (0, 0, 0, √(−p·p)).
    pub fn canonical_frame(p: FourVector) -> Result<Self> {
        if classify_interval(p, DEFAULT_CLASSIFY_TOL) != IntervalClass::Spacelike {
            return Err(Error::DegenerateBasis(
                "canonical frame requires a space-like momentum".into(),
            ));
        }
        let rot = Self::rotation_to_z(p.spatial());
        let q = rot.apply(p);
        let chi = -(q[0] / q[3]).atanh();
        let b = Self::boost(chi, 3)?;
        Ok(b.compose(&rot))
    }

    pub fn apply(&self, p: FourVector) -> FourVector {
        FourVector(std::array::from_fn(|i| (0..4).map(|j| self.0[i][j] * p.0[j]).sum()))
    }

    /// self ∘ other
    pub fn compose(&self, other: &LorentzMatrix) -> LorentzMatrix {
        LorentzMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..4).map(|l| self.0[i][l] * other.0[l][j]).sum())
        }))
    }

    /// Inverse via Λ⁻¹ = g Λᵀ g.
    pub fn inverse(&self) -> LorentzMatrix {
        LorentzMatrix(std::array::from_fn(|i| {
            std::array::from_fn(|j| metric(i) * self.0[j][i] * metric(j))
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchDescriptor {
    pub index: usize,
    pub direction: Direction,
    /// Sign of the infinitesimal imaginary offset of this branch (+1, 0, −1).
    pub offset_sign: i8,
}

/// Closed time path: ordered real-time branches followed by a vertical
/// Matsubara segment of length β, kept as metadata only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub branches: Vec<BranchDescriptor>,
    /// Inverse temperature; `None` stands for β = ∞ (segment at −i∞).
    pub beta: Option<f64>,
    /// Real times must satisfy |t| ≤ t_max.
    pub t_max: f64,
    /// Numerical size of the infinitesimal branch offsets (0 keeps them symbolic).
    pub epsilon: f64,
}

/// Builds the Keldysh (2 branches) or three-branch contour.
pub fn ctp_contour(beta: Option<f64>, branch_count: usize) -> Result<Contour> {
    if let Some(b) = beta {
        if !(b > 0.0) {
            return Err(Error::InvalidArgument(format!("beta must be positive, got {b}")));
        }
    }
    let branches = match branch_count {
        2 => vec![
            BranchDescriptor { index: 0, direction: Direction::Forward, offset_sign: 1 },
            BranchDescriptor { index: 1, direction: Direction::Backward, offset_sign: -1 },
        ],
        3 => vec![
            BranchDescriptor { index: 0, direction: Direction::Forward, offset_sign: 1 },
            BranchDescriptor { index: 1, direction: Direction::Backward, offset_sign: 0 },
            BranchDescriptor { index: 2, direction: Direction::Forward, offset_sign: -1 },
        ],
        n => return Err(Error::InvalidArgument(format!("branch count {n} not in {{2, 3}}"))),
    };
    Ok(Contour { branches, beta, t_max: 1e6, epsilon: 0.0 })
}

/// A point on a contour: branch, complex time and contour parameter s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CtpTime {
    pub branch: usize,
    pub t: C64,
    pub s: f64,
}

impl CtpTime {
    /// Strictly later on the contour.
    pub fn is_later_than(&self, other: &CtpTime) -> bool {
        self.s > other.s
    }
}

impl Contour {
    pub fn point(&self, branch: usize, t: f64) -> Result<CtpTime> {
        let desc = self
            .branches
            .get(branch)
            .ok_or_else(|| Error::InvalidArgument(format!("no branch {branch}")))?;
        if t.abs() > self.t_max {
            return Err(Error::InvalidArgument(format!("|t| = {} exceeds t_max", t.abs())));
        }
        let span = 2.0 * self.t_max;
        let local = match desc.direction {
            Direction::Forward => t + self.t_max,
            Direction::Backward => self.t_max - t,
        };
        Ok(CtpTime {
            branch,
            t: C64::new(t, desc.offset_sign as f64 * self.epsilon),
            s: branch as f64 * span + local,
        })
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.beta.is_none()
    }
}
