use nalgebra::Matrix4;

use super::gamma::{current_matrices, spinor_u, spinor_v, Handedness};
use super::observable::{LinearForm, QuadraticObservable};
use crate::error::{Error, Result};
use crate::fock::{Channel, FockSpace, Ladder, SparseOperator};
use crate::spacetime::FourVector;
use crate::C64;

fn particle_channel(c: Channel) -> Option<(Handedness, bool)> {
    match c {
        Channel::DiracL => Some((Handedness::L, false)),
        Channel::DiracR => Some((Handedness::R, false)),
        Channel::AntiDiracL => Some((Handedness::L, true)),
        Channel::AntiDiracR => Some((Handedness::R, true)),
        _ => None,
    }
}

/// The four spinor components of ψ = Σ V^{−1/2}(a^X_k u^X_k e^{−ik·x} + b^{†X}_k v^X_k e^{ik·x}).
///
/// Antiparticle terms are present only when the space carries the
/// `AntiDirac*` channels. Modes must lie on the k³ axis.
pub fn dirac_field_forms(space: &FockSpace) -> Result<[LinearForm; 4]> {
    let mut out: [LinearForm; 4] = Default::default();
    let mut seen = false;
    for (i, m) in space.modes().iter().enumerate() {
        let Some((hand, anti)) = particle_channel(m.channel) else { continue };
        seen = true;
        if m.k[0] != 0.0 || m.k[1] != 0.0 {
            return Err(Error::InvalidArgument("Dirac modes must have k = (0,0,k³)".into()));
        }
        let grid = space.grid(m.channel).expect("channel has a grid");
        let norm = grid.volume().sqrt().recip();
        let (spinor, ladder) = if anti {
            (spinor_v(m.k[2], hand, grid.mass)?, Ladder::create(i))
        } else {
            (spinor_u(m.k[2], hand, grid.mass)?, Ladder::annihilate(i))
        };
        for (a, f) in out.iter_mut().enumerate() {
            f.push(spinor.components[a] * norm, ladder);
        }
    }
    if !seen {
        return Err(Error::UnknownMode("no Dirac channel in this space".into()));
    }
    Ok(out)
}

pub fn dirac_field(space: &FockSpace, x: &FourVector) -> Result<[SparseOperator; 4]> {
    let f = dirac_field_forms(space)?;
    Ok(std::array::from_fn(|a| f[a].realize_at(space, x)))
}

/// Normal-ordered ψ† M ψ as a local density.
pub fn dirac_bilinear(space: &FockSpace, m: &Matrix4<C64>, label: &str) -> Result<QuadraticObservable> {
    let psi = dirac_field_forms(space)?;
    let psid: Vec<LinearForm> = psi.iter().map(|f| f.adjoint()).collect();
    let mut o = QuadraticObservable::new(label);
    for a in 0..4 {
        for b in 0..4 {
            if m[(a, b)] != C64::new(0.0, 0.0) {
                o.add_product(space, m[(a, b)], &psid[a], &psi[b]);
            }
        }
    }
    Ok(o.simplified())
}

/// j^μ = ψ† j^μ ψ with the explicit current matrices.
pub fn dirac_current(mu: usize, space: &FockSpace) -> Result<QuadraticObservable> {
    if mu > 3 {
        return Err(Error::InvalidArgument(format!("current index {mu} out of range")));
    }
    dirac_bilinear(space, &current_matrices()[mu], &format!("j{mu}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_fock_space, Expectation, ModeGrid, Species, StateVector};
    use std::f64::consts::PI;

    fn full_space(mass: f64) -> FockSpace {
        let g = ModeGrid::line(3, 2.0 * PI, 1, Species::Fermion, mass).unwrap();
        let chans = [Channel::DiracL, Channel::DiracR, Channel::AntiDiracL, Channel::AntiDiracR];
        let grids: Vec<_> = chans.iter().map(|&c| (c, g.clone())).collect();
        build_fock_space(&grids, 1, 8).unwrap()
    }

    #[test]
    fn single_particle_wavefunction() {
        let s = full_space(0.8);
        let x = FourVector::new(0.7, 0.0, 0.0, -0.4);
        let psi = dirac_field(&s, &x).unwrap();
        let m = s.mode_index(Channel::DiracL, [0, 0, 1]).unwrap();
        let mut cfg = vec![0u8; s.modes().len()];
        cfg[m] = 1;
        let one = s.index_of(&cfg).unwrap();
        let u = spinor_u(1.0, Handedness::L, 0.8).unwrap();
        let k = FourVector::from_parts(u.energy(), [0.0, 0.0, 1.0]);
        let phase = C64::from_polar((2.0 * PI).sqrt().recip(), -k.dot(&x));
        for a in 0..4 {
            assert!((psi[a].get(0, one) - u.components[a] * phase).norm() < 1e-15);
            assert_eq!(psi[a].get(0, 0), C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn equal_time_anticommutator() {
        let s = full_space(1.3);
        let x = FourVector::new(0.2, 0.0, 0.0, 0.9);
        let y = FourVector::new(0.2, 0.0, 0.0, -1.7);
        let px = dirac_field(&s, &x).unwrap();
        let py = dirac_field(&s, &y).unwrap();
        let delta: f64 = [1.0f64, -1.0].iter().map(|k| (k * (x[3] - y[3])).cos()).sum::<f64>() / (2.0 * PI);
        for a in 0..4 {
            for b in 0..4 {
                let ac = px[a].anticommutator(&py[b].adjoint()).unwrap();
                let want = if a == b { delta } else { 0.0 };
                let id = SparseOperator::identity(s.dim()).scale(C64::new(want, 0.0));
                assert!(ac.sub(&id).unwrap().max_abs() < 1e-13, "({a},{b})");
                let aa = px[a].anticommutator(&py[b]).unwrap();
                assert!(aa.max_abs() < 1e-13);
            }
        }
    }

    #[test]
    fn currents_are_hermitian_with_zero_vacuum_value() {
        let s = full_space(0.6);
        for mu in 0..4 {
            let j = dirac_current(mu, &s).unwrap();
            let op = j.realize(&s);
            assert!(op.hermiticity_defect() < 1e-14);
            assert!(StateVector::vacuum(&s).expectation(&op).unwrap().norm() < 1e-15);
        }
    }
}
