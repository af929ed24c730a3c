use serde::{Deserialize, Serialize};

use super::observable::{LinearForm, QuadraticObservable};
use crate::error::{Error, Result};
use crate::fock::{Channel, FockSpace, Ladder, SparseOperator};
use crate::spacetime::FourVector;
use crate::C64;

/// Sign convention for the spatial block T^{ij}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum StressConvention {
    /// T^{ij} = −EⁱEʲ − BⁱBʲ + δ^{ij}(E²+B²)/2, from g^{μν}F²/4 − F^{μα}F^ν_α.
    #[default]
    Covariant,
    /// T^{ij} = EⁱEʲ + BⁱBʲ − δ^{ij}(E²+B²)/2.
    MaxwellStress,
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = v.iter().map(|c| c * c).sum::<f64>().sqrt();
    v.map(|c| c / n)
}

/// Real transverse polarizations (e_V, e_H) for wave vector k ≠ 0.
///
/// e_V is x̂ made orthogonal to k (ŷ when k ∥ x̂); e_H = k̂ × e_V.
pub fn polarizations(k: [f64; 3]) -> Result<([f64; 3], [f64; 3])> {
    let kn = k.iter().map(|c| c * c).sum::<f64>().sqrt();
    if kn == 0.0 {
        return Err(Error::ZeroMomentum);
    }
    let kh = k.map(|c| c / kn);
    let seed = if kh[0].abs() > 1.0 - 1e-12 { [0.0, 1.0, 0.0] } else { [1.0, 0.0, 0.0] };
    let proj: f64 = seed.iter().zip(&kh).map(|(a, b)| a * b).sum();
    let ev = unit([seed[0] - proj * kh[0], seed[1] - proj * kh[1], seed[2] - proj * kh[2]]);
    Ok((ev, cross(kh, ev)))
}

/// Linear forms for A, E = −∂_t A and B = ∇×A.
#[derive(Debug, Clone)]
pub struct EmFieldForms {
    pub a: [LinearForm; 3],
    pub e: [LinearForm; 3],
    pub b: [LinearForm; 3],
}

pub fn em_field_forms(space: &FockSpace) -> Result<EmFieldForms> {
    let mut a: [LinearForm; 3] = Default::default();
    let mut e: [LinearForm; 3] = Default::default();
    let mut b: [LinearForm; 3] = Default::default();
    let mut seen = false;
    for (i, m) in space.modes().iter().enumerate() {
        if !matches!(m.channel, Channel::PhotonH | Channel::PhotonV) {
            continue;
        }
        seen = true;
        let vol = space.grid(m.channel).expect("channel has a grid").volume();
        let (ev, eh) = polarizations(m.k)?;
        let pol = if m.channel == Channel::PhotonV { ev } else { eh };
        let kxe = cross(m.k, pol);
        let n = (2.0 * m.energy * vol).sqrt().recip();
        let (ann, cre) = (Ladder::annihilate(i), Ladder::create(i));
        for j in 0..3 {
            a[j].push(C64::new(n * pol[j], 0.0), ann);
            a[j].push(C64::new(n * pol[j], 0.0), cre);
            e[j].push(C64::new(0.0, n * m.energy * pol[j]), ann);
            e[j].push(C64::new(0.0, -n * m.energy * pol[j]), cre);
            b[j].push(C64::new(0.0, n * kxe[j]), ann);
            b[j].push(C64::new(0.0, -n * kxe[j]), cre);
        }
    }
    if !seen {
        return Err(Error::UnknownMode("no photon channel in this space".into()));
    }
    Ok(EmFieldForms { a, e, b })
}

/// F^{μν}(x) as 16 row-major operators: F^{0i} = −E^i, F^{ij} = −ε^{ijk}B^k.
pub fn field_strength(space: &FockSpace, x: &FourVector) -> Result<Vec<SparseOperator>> {
    let f = em_field_forms(space)?;
    let e: Vec<SparseOperator> = f.e.iter().map(|l| l.realize_at(space, x)).collect();
    let b: Vec<SparseOperator> = f.b.iter().map(|l| l.realize_at(space, x)).collect();
    let zero = SparseOperator::zeros(space.dim());
    Ok((0..16)
        .map(|i| match (i / 4, i % 4) {
            (m, n) if m == n => zero.clone(),
            (0, j) => e[j - 1].scale(C64::new(-1.0, 0.0)),
            (j, 0) => e[j - 1].clone(),
            (j, k) => {
                // ε^{jkl} for the remaining index l; +1 for cyclic (1,2,3).
                let sign = if (k + 3 - j) % 3 == 1 { 1.0 } else { -1.0 };
                b[5 - j - k].scale(C64::new(-sign, 0.0))
            }
        })
        .collect())
}

/// Normal-ordered electromagnetic T^{μν} as a local density.
pub fn stress_tensor_em(
    mu: usize,
    nu: usize,
    space: &FockSpace,
    convention: StressConvention,
) -> Result<QuadraticObservable> {
    if mu > 3 || nu > 3 {
        return Err(Error::InvalidArgument(format!("tensor index ({mu},{nu}) out of range")));
    }
    let f = em_field_forms(space)?;
    let one = C64::new(1.0, 0.0);
    let half = C64::new(0.5, 0.0);
    let mut t = QuadraticObservable::new(format!("T{mu}{nu}"));
    let add_energy = |t: &mut QuadraticObservable, c: C64| {
        for j in 0..3 {
            t.add_product(space, c, &f.e[j], &f.e[j]);
            t.add_product(space, c, &f.b[j], &f.b[j]);
        }
    };
    match (mu, nu) {
        (0, 0) => add_energy(&mut t, half),
        (0, i) | (i, 0) => {
            let (j, k) = (i % 3, (i + 1) % 3);
            t.add_product(space, one, &f.e[j], &f.b[k]);
            t.add_product(space, -one, &f.e[k], &f.b[j]);
        }
        (i, j) => {
            let s = match convention {
                StressConvention::Covariant => one,
                StressConvention::MaxwellStress => -one,
            };
            t.add_product(space, -s, &f.e[i - 1], &f.e[j - 1]);
            t.add_product(space, -s, &f.b[i - 1], &f.b[j - 1]);
            if i == j {
                add_energy(&mut t, s * half);
            }
        }
    }
    Ok(t.simplified())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_fock_space, ModeGrid, Species};
    use crate::spacetime::g;
    use std::f64::consts::PI;

    fn photon_space() -> FockSpace {
        let gr = ModeGrid::new([2.0 * PI; 3], [(0, 0), (-1, 1), (-1, 1)], Species::Boson, 0.0).unwrap();
        build_fock_space(&[(Channel::PhotonH, gr.clone()), (Channel::PhotonV, gr)], 2, 2).unwrap()
    }

    #[test]
    fn field_strength_is_antisymmetric_and_matches_b() {
        let s = photon_space();
        let f = field_strength(&s, &FourVector::default()).unwrap();
        for m in 0..4 {
            for n in 0..4 {
                assert!(f[4 * m + n].add(&f[4 * n + m]).unwrap().max_abs() < 1e-15);
            }
        }
        // F^{12} = −B³
        let b3 = em_field_forms(&s).unwrap().b[2].realize_at(&s, &FourVector::default());
        assert!(f[4 + 2].add(&b3).unwrap().max_abs() < 1e-15);
        assert!(f[4 + 2].max_abs() > 0.1);
    }

    #[test]
    fn polarizations_are_transverse_unit_vectors() {
        for k in [[0.0, 0.0, 1.0], [0.0, 0.0, -2.0], [1.0, 0.0, 0.0], [0.3, -1.2, 0.7]] {
            let (v, h) = polarizations(k).unwrap();
            for e in [v, h] {
                assert!((e.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-14);
                assert!(e.iter().zip(&k).map(|(a, b)| a * b).sum::<f64>().abs() < 1e-14);
            }
        }
        assert_eq!(polarizations([0.0, 0.0, 3.0]).unwrap().0, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn trace_vanishes_and_tensor_is_hermitian() {
        let s = photon_space();
        let comps: Vec<_> =
            (0..4).map(|m| stress_tensor_em(m, m, &s, StressConvention::Covariant).unwrap()).collect();
        let parts: Vec<_> = (0..4).map(|m| (C64::new(g(m, m), 0.0), &comps[m])).collect();
        let trace = QuadraticObservable::combine("trace", &parts).realize(&s);
        assert!(trace.max_abs() < 1e-13);
        for mu in 0..4 {
            for nu in 0..4 {
                let t = stress_tensor_em(mu, nu, &s, StressConvention::Covariant).unwrap();
                assert!(t.realize(&s).hermiticity_defect() < 1e-13);
            }
        }
    }
}
