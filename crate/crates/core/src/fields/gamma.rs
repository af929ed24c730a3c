use nalgebra::{Matrix2, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spacetime::g;
use crate::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Pauli matrices σ⁰..σ³.
pub fn pauli(i: usize) -> Matrix2<C64> {
    let (o, l, z) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match i {
        0 => Matrix2::new(l, o, o, l),
        1 => Matrix2::new(o, l, l, o),
        2 => Matrix2::new(o, -z, z, o),
        3 => Matrix2::new(l, o, o, -l),
        _ => panic!("pauli index {i} out of range"),
    }
}

fn blocks(a: Matrix2<C64>, b: Matrix2<C64>, cc: Matrix2<C64>, d: Matrix2<C64>) -> Matrix4<C64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&cc);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&d);
    m
}

/// Dirac matrices in the Weyl (chiral) representation.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaMatrices {
    pub gamma: [Matrix4<C64>; 4],
}

impl GammaMatrices {
    pub fn weyl() -> Self {
        let z = Matrix2::zeros();
        let g0 = blocks(z, pauli(0), pauli(0), z);
        let gk = |k: usize| blocks(z, pauli(k), -pauli(k), z);
        GammaMatrices { gamma: [g0, gk(1), gk(2), gk(3)] }
    }

    /// max over μ,ν of ‖{γ^μ,γ^ν} − 2g^{μν}·1‖.
    pub fn clifford_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                let ac = self.gamma[mu] * self.gamma[nu] + self.gamma[nu] * self.gamma[mu];
                let target = Matrix4::<C64>::identity() * c(2.0 * g(mu, nu), 0.0);
                worst = worst.max((ac - target).camax());
            }
        }
        worst
    }

    /// γ⁰γ^μ, the matrices sandwiched in ψ†γ⁰γ^μψ.
    pub fn current_products(&self) -> [Matrix4<C64>; 4] {
        std::array::from_fn(|mu| self.gamma[0] * self.gamma[mu])
    }
}

/// The explicit current matrices j⁰..j³ for ψ† j^μ ψ.
pub fn current_matrices() -> [Matrix4<C64>; 4] {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let j0 = Matrix4::identity();
    #[rustfmt::skip]
    let j1 = Matrix4::new(
        o, -l, o, o,
        -l, o, o, o,
        o, o, o, l,
        o, o, l, o,
    );
    #[rustfmt::skip]
    let j2 = Matrix4::new(
        o, i, o, o,
        -i, o, o, o,
        o, o, o, -i,
        o, o, i, o,
    );
    let j3 = Matrix4::from_diagonal(&Vector4::new(-l, l, l, -l));
    [j0, j1, j2, j3]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Handedness {
    L,
    R,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spinor {
    pub components: Vector4<C64>,
    pub handedness: Handedness,
    pub k3: f64,
    pub mass: f64,
}

impl Spinor {
    pub fn energy(&self) -> f64 {
        (self.mass * self.mass + self.k3 * self.k3).sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.components.iter().map(|z| z.norm_sqr()).sum()
    }

    /// a† M b for spinor component vectors.
    pub fn sandwich(&self, m: &Matrix4<C64>, other: &Spinor) -> C64 {
        (self.components.adjoint() * m * other.components)[(0, 0)]
    }
}

/// Positive-energy spinor for momentum (0,0,k³).
pub fn spinor_u(k3: f64, handedness: Handedness, m: f64) -> Result<Spinor> {
    if k3 == 0.0 {
        return Err(Error::ZeroMomentum);
    }
    let e = (m * m + k3 * k3).sqrt();
    let (lo, hi) = ((e - k3).max(0.0).sqrt(), (e + k3).sqrt());
    let pos = k3 > 0.0;
    let th = |b: bool| if b { 1.0 } else { 0.0 };
    let (tp, tm) = (th(pos), th(!pos));
    let v = match handedness {
        Handedness::L => [lo * tm, hi * tp, hi * tm, lo * tp],
        Handedness::R => [lo * tp, hi * tm, hi * tp, lo * tm],
    };
    let n = (2.0 * e).sqrt();
    Ok(Spinor {
        components: Vector4::from_fn(|i, _| c(v[i] / n, 0.0)),
        handedness,
        k3,
        mass: m,
    })
}

/// Negative-energy spinor by charge conjugation, v = iγ²u*.
pub fn spinor_v(k3: f64, handedness: Handedness, m: f64) -> Result<Spinor> {
    let u = spinor_u(k3, handedness, m)?;
    let g2 = GammaMatrices::weyl().gamma[2];
    let comps = g2 * u.components.map(|z| z.conj()) * c(0.0, 1.0);
    Ok(Spinor { components: comps, ..u })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_algebra_is_exact() {
        assert_eq!(GammaMatrices::weyl().clifford_defect(), 0.0);
    }

    #[test]
    fn current_matrices_match_gamma_products() {
        let prods = GammaMatrices::weyl().current_products();
        let js = current_matrices();
        for mu in 0..4 {
            assert_eq!(prods[mu], js[mu], "component {mu}");
            assert_eq!(js[mu].adjoint(), js[mu]);
        }
        assert_eq!(js[0], Matrix4::identity());
    }

    #[test]
    fn massless_limits() {
        let l = spinor_u(2.0, Handedness::L, 0.0).unwrap();
        let r = spinor_u(2.0, Handedness::R, 0.0).unwrap();
        let re = |s: &Spinor| s.components.map(|z| z.re);
        assert_eq!(re(&l), Vector4::new(0.0, 1.0, 0.0, 0.0));
        assert_eq!(re(&r), Vector4::new(0.0, 0.0, 1.0, 0.0));
        let l = spinor_u(-2.0, Handedness::L, 0.0).unwrap();
        assert_eq!(re(&l), Vector4::new(1.0, 0.0, 0.0, 0.0));
        assert!(matches!(spinor_u(0.0, Handedness::L, 1.0), Err(Error::ZeroMomentum)));
    }

    #[test]
    fn spinors_solve_the_dirac_hamiltonian() {
        // H = α³k³ + βm with α³ = γ⁰γ³, β = γ⁰.
        let gm = GammaMatrices::weyl();
        for &(k3, m) in &[(0.7, 1.3), (-2.1, 0.4), (5.0, 0.0)] {
            let h = gm.current_products()[3] * c(k3, 0.0) + gm.gamma[0] * c(m, 0.0);
            let e = (k3 * k3 + m * m).sqrt();
            for hand in [Handedness::L, Handedness::R] {
                let u = spinor_u(k3, hand, m).unwrap();
                assert!((u.norm_sqr() - 1.0).abs() < 1e-14);
                assert!((h * u.components - u.components * c(e, 0.0)).camax() < 1e-13);
                let v = spinor_v(k3, hand, m).unwrap();
                // v(k) carries energy −E at momentum −k.
                let hm = gm.current_products()[3] * c(-k3, 0.0) + gm.gamma[0] * c(m, 0.0);
                assert!((hm * v.components + v.components * c(e, 0.0)).camax() < 1e-13);
            }
        }
    }
}
