use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spacetime::{g, FourVector, LorentzMatrix};
use crate::C64;

pub type Matrix4c = [[C64; 4]; 4];

fn lower_dot(p: &FourVector, a: &[C64; 4]) -> C64 {
    (0..4).map(|m| a[m] * (g(m, m) * p[m])).sum()
}

/// Ã^μ = (p·p)A^μ − p^μ(p·A), orthogonal to p.
pub fn project_noiseless_vector(a: &[C64; 4], p: &FourVector) -> [C64; 4] {
    let pp = p.dot(p);
    let pa = lower_dot(p, a);
    std::array::from_fn(|m| a[m] * pp - pa * p[m])
}

/// g_{μν}B^{μν}
pub fn trace(b: &Matrix4c) -> C64 {
    (0..4).map(|m| b[m][m] * g(m, m)).sum()
}

/// p_μ B^{μν} p_ν
pub fn sandwich(b: &Matrix4c, p: &FourVector) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for m in 0..4 {
        for n in 0..4 {
            s += b[m][n] * (g(m, m) * p[m] * g(n, n) * p[n]);
        }
    }
    s
}

/// p_μ B^{μν} for each ν.
pub fn contract_first(b: &Matrix4c, p: &FourVector) -> [C64; 4] {
    std::array::from_fn(|n| (0..4).map(|m| b[m][n] * (g(m, m) * p[m])).sum())
}

/// Noiseless projection of a symmetric tensor.
///
/// The general form is traceless with p·B̃·p = 0. With `conserved`, the input
/// is assumed to satisfy p_μB^{μν} = 0 and the reduced form, traceless and
/// transverse for such inputs, is returned.
pub fn project_noiseless_tensor(b: &Matrix4c, p: &FourVector, conserved: bool) -> Matrix4c {
    let pp = p.dot(p);
    let tr = trace(b);
    let pbp = sandwich(b, p);
    std::array::from_fn(|m| {
        std::array::from_fn(|n| {
            let trans = g(m, n) * pp - p[m] * p[n];
            if conserved {
                b[m][n] * pp - tr * trans / 3.0
            } else {
                b[m][n] * pp * pp - tr * pp * trans / 3.0 + pbp * (g(m, n) * pp - 4.0 * p[m] * p[n]) / 3.0
            }
        })
    })
}

/// Linear combination Σ c_{μν} B^{μν}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Combination {
    pub label: String,
    pub coefficients: [[f64; 4]; 4],
}

impl Combination {
    fn from_terms(label: &str, terms: &[((usize, usize), f64)]) -> Self {
        let mut c = [[0.0; 4]; 4];
        for &((m, n), v) in terms {
            c[m][n] += v;
        }
        Combination { label: label.into(), coefficients: c }
    }

    pub fn apply(&self, b: &Matrix4c) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for m in 0..4 {
            for n in 0..4 {
                s += b[m][n] * self.coefficients[m][n];
            }
        }
        s
    }

    /// The combination of lab-frame components equal to this one evaluated on
    /// Λ-transformed components: c′ = Λᵀ c Λ.
    pub fn pulled_back(&self, l: &LorentzMatrix) -> Self {
        let c = &self.coefficients;
        let out = std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let mut s = 0.0;
                for m in 0..4 {
                    for n in 0..4 {
                        s += l.0[m][a] * c[m][n] * l.0[n][b];
                    }
                }
                s
            })
        });
        Combination { label: self.label.clone(), coefficients: out }
    }
}

/// Vector and tensor components with vanishing vacuum spectrum at
/// p = (0, 0, 0, p³).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiselessComponents {
    pub p: FourVector,
    /// Each row is a covector c with noiseless c_μA^μ.
    pub vector: Vec<[f64; 4]>,
    pub vector_indices: Vec<usize>,
    pub tensor: Vec<Combination>,
}

const FRAME_TOL: f64 = 1e-12;

fn canonical_lists(p: FourVector) -> NoiselessComponents {
    let unit = |i: usize| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 });
    NoiselessComponents {
        p,
        vector: (0..3).map(unit).collect(),
        vector_indices: vec![0, 1, 2],
        tensor: vec![
            Combination::from_terms("B12", &[((1, 2), 1.0)]),
            Combination::from_terms("B01", &[((0, 1), 1.0)]),
            Combination::from_terms("B02", &[((0, 2), 1.0)]),
            Combination::from_terms("B11-B22", &[((1, 1), 1.0), ((2, 2), -1.0)]),
            Combination::from_terms("B00+B11", &[((0, 0), 1.0), ((1, 1), 1.0)]),
        ],
    }
}

/// Requires p purely along axis 3.
pub fn noiseless_components(p: FourVector) -> Result<NoiselessComponents> {
    let scale = p.euclidean_norm_sqr().sqrt();
    if scale == 0.0 || (0..3).any(|i| p[i].abs() > FRAME_TOL * scale) {
        return Err(Error::RequiresCanonicalFrame);
    }
    Ok(canonical_lists(p))
}

/// The canonical-frame lists pulled back to a general space-like p.
pub fn noiseless_components_at(p: FourVector) -> Result<NoiselessComponents> {
    let l = LorentzMatrix::canonical_frame(p)?;
    let base = canonical_lists(l.apply(p));
    Ok(NoiselessComponents {
        p,
        vector: base.vector.iter().map(|c| std::array::from_fn(|a| (0..4).map(|m| c[m] * l.0[m][a]).sum())).collect(),
        vector_indices: base.vector_indices,
        tensor: base.tensor.iter().map(|c| c.pulled_back(&l)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    #[test]
    fn vector_canonical_example() {
        let q = 1.7;
        let p = FourVector::new(0.0, 0.0, 0.0, q);
        let a = [c(0.4), c(0.0), c(0.0), c(-1.1)];
        let t = project_noiseless_vector(&a, &p);
        assert!((t[0] - c(-q * q * 0.4)).norm() < 1e-14);
        assert!(t[3].norm() < 1e-14);
        let long = [c(2.0 * p[0]), c(2.0 * p[1]), c(2.0 * p[2]), c(2.0 * p[3])];
        assert!(project_noiseless_vector(&long, &p).iter().all(|x| x.norm() < 1e-14));
    }

    #[test]
    fn tensor_projections() {
        let p = FourVector::new(0.3, -0.2, 0.5, 1.4);
        let metric: Matrix4c = std::array::from_fn(|m| std::array::from_fn(|n| c(g(m, n))));
        let out = project_noiseless_tensor(&metric, &p, true);
        assert!(trace(&out).norm() < 1e-13);
        let pp: Matrix4c = std::array::from_fn(|m| std::array::from_fn(|n| c(p[m] * p[n])));
        let out = project_noiseless_tensor(&pp, &p, false);
        assert!(out.iter().flatten().all(|x| x.norm() < 1e-13));
    }

    #[test]
    fn canonical_frame_required() {
        assert!(matches!(noiseless_components(FourVector::new(0.1, 0.0, 0.0, 1.0)), Err(Error::RequiresCanonicalFrame)));
        let n = noiseless_components(FourVector::new(0.0, 0.0, 0.0, 2.0)).unwrap();
        assert_eq!(n.vector_indices, vec![0, 1, 2]);
        let labels: Vec<&str> = n.tensor.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["B12", "B01", "B02", "B11-B22", "B00+B11"]);
    }
}
