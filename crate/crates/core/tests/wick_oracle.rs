//! Wick engine against exact traces over a truncated Fock space.

use std::f64::consts::PI;

use qfnoise_core::correlators::{exact_correlator, wick_npoint, LadderInsertion, Vertex};
use qfnoise_core::fock::{build_fock_space, Channel, FockSpace, ModeGrid, Species};
use qfnoise_core::spacetime::CtpTime;
use qfnoise_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ENERGIES: [f64; 3] = [1.3, 1.7, 2.1];

/// Three zero-momentum modes, one per channel, with the mass setting the energy.
fn space(species: Species, cap: u8) -> FockSpace {
    let channels = match species {
        Species::Boson => [Channel::Scalar, Channel::PhotonH, Channel::PhotonV],
        Species::Fermion => [Channel::DiracL, Channel::DiracR, Channel::AntiDiracL],
    };
    let grids: Vec<_> = channels
        .iter()
        .zip(ENERGIES)
        .map(|(&c, e)| {
            let g = ModeGrid::new([2.0 * PI; 3], [(0, 0), (0, 0), (0, 0)], species, e).unwrap().with_zero_mode(true);
            (c, g)
        })
        .collect();
    let total = if species == Species::Fermion { 3 } else { cap as u32 };
    build_fock_space(&grids, cap, total).unwrap()
}

fn random_vertices(rng: &mut ChaCha8Rng, species: Species, n: usize, max_factors: usize) -> Vec<Vertex> {
    (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=max_factors);
            let factors = (0..k)
                .map(|_| {
                    let m = rng.gen_range(0..3);
                    LadderInsertion { mode: m, species, energy: ENERGIES[m], dagger: rng.gen_bool(0.5) }
                })
                .collect();
            let time = CtpTime { branch: 0, t: C64::new(rng.gen_range(-2.0..2.0), 0.0), s: rng.gen_range(0.0..1.0) };
            Vertex { factors, time }
        })
        .collect()
}

fn check(species: Species, cap: u8, betas: &[Option<f64>]) {
    let s = space(species, cap);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut nonzero = 0;
    for &beta in betas {
        for trial in 0..120 {
            let n = 2 + trial % 3;
            let vs = random_vertices(&mut rng, species, n, 1);
            let want = exact_correlator(&s, &vs, beta).unwrap();
            let got = wick_npoint(&vs, beta);
            let scale = want.norm().max(1.0);
            assert!((got - want).norm() <= 1e-10 * scale, "{species:?} beta={beta:?} n={n}: {got} vs {want}");
            if want.norm() > 1e-6 {
                nonzero += 1;
            }
        }
    }
    assert!(nonzero > 20, "too few nontrivial samples: {nonzero}");
}

#[test]
fn bosonic_up_to_four_points() {
    check(Species::Boson, 24, &[Some(1.0), Some(2.0), None]);
}

#[test]
fn fermionic_up_to_four_points() {
    check(Species::Fermion, 1, &[Some(1.0), Some(2.0), None]);
}

#[test]
fn normal_ordered_bilinear_vertices() {
    for species in [Species::Boson, Species::Fermion] {
        let cap = if species == Species::Boson { 20 } else { 1 };
        let s = space(species, cap);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let mut vs = random_vertices(&mut rng, species, 3, 2);
            // Normal-order each vertex: creators left.
            for v in &mut vs {
                v.factors.sort_by_key(|f| !f.dagger);
                if v.factors.len() == 2 && v.factors[0].mode == v.factors[1].mode && v.factors[0].dagger == v.factors[1].dagger && species == Species::Fermion {
                    v.factors.pop();
                }
            }
            let want = exact_correlator(&s, &vs, Some(1.5)).unwrap();
            let got = wick_npoint(&vs, Some(1.5));
            assert!((got - want).norm() <= 1e-10 * want.norm().max(1.0), "{species:?}: {got} vs {want}");
        }
    }
}
