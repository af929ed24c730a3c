use std::f64::consts::PI;

use proptest::prelude::*;
use qfnoise_core::fields::{scalar_field_form, QuadraticObservable};
use qfnoise_core::fock::{build_fock_space, Channel, FockSpace, ModeGrid, Species};
use qfnoise_core::spacetime::FourVector;
use qfnoise_core::spectral::{lehmann_spectral_density, massless_current_spectrum, massless_energy_spectrum, suppression_fit};
use qfnoise_core::C64;

/// Massless scalar on a line of length 2π, so k = n and E = |n|.
fn line_space(n_max: i32, cap: u8, total: u32) -> (FockSpace, QuadraticObservable) {
    let grid = ModeGrid::line(3, 2.0 * PI, n_max, Species::Boson, 0.0).unwrap();
    let space = build_fock_space(&[(Channel::Scalar, grid)], cap, total).unwrap();
    let phi = scalar_field_form(&space).unwrap();
    let mut sq = QuadraticObservable::new("phi2");
    sq.add_product(&space, C64::new(1.0, 0.0), &phi, &phi);
    (space, sq)
}

#[test]
fn spacelike_suppression_slope() {
    let (space, sq) = line_space(3, 3, 4);
    let betas: Vec<f64> = (0..11).map(|i| 2.0 + i as f64).collect();
    for p in [FourVector::new(1.0, 0.0, 0.0, 3.0), FourVector::new(0.0, 0.0, 0.0, 2.0), FourVector::new(-1.0, 0.0, 0.0, 3.0)] {
        let fit = suppression_fit(&space, &sq, &sq, p, &betas).unwrap();
        assert!(fit.respects_bound(0.05), "{p:?}: slope {} bound {}", fit.slope, fit.bound_slope);
        // Cheapest initial state carries a particle of energy (|p| − p⁰)/2.
        let attained = -(p.spatial_norm() - p[0]) / 2.0;
        assert!((fit.slope / attained - 1.0).abs() < 0.05, "slope {} vs {attained}", fit.slope);
    }
}

#[test]
fn zero_temperature_spacelike_has_no_terms() {
    let (space, sq) = line_space(3, 3, 4);
    for n in 1..=3 {
        for j in -(n - 1)..n {
            let p = FourVector::new(j as f64, 0.0, 0.0, n as f64);
            let s = lehmann_spectral_density(&space, &sq, &sq, p, None).unwrap();
            assert_eq!(s.terms, 0, "{p:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn massless_spectra_vanish_spacelike(
        d in 1usize..=3,
        k in prop::array::uniform3(-10.0f64..10.0),
        frac in -0.999f64..0.999,
        mu in 0usize..4,
        nu in 0usize..4,
    ) {
        let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        prop_assume!(kn > 1e-6);
        let p = FourVector::from_parts(frac * kn, k);
        prop_assume!(p.dot(&p) < 0.0);
        prop_assert!(massless_current_spectrum(d, p).unwrap().evaluate(mu, nu).is_zero());
        prop_assert!(massless_energy_spectrum(d, p).unwrap().evaluate(0, 0).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn detailed_balance(beta in prop::sample::select(vec![0.5, 1.0, 2.0]), p0 in -4i32..=4, p3 in -4i32..=4) {
        let (space, sq) = line_space(2, 3, 4);
        let p = FourVector::new(p0 as f64, 0.0, 0.0, p3 as f64);
        let fwd = lehmann_spectral_density(&space, &sq, &sq, p, Some(beta)).unwrap();
        let bwd = lehmann_spectral_density(&space, &sq, &sq, -p, Some(beta)).unwrap();
        prop_assert!(fwd.g.im.abs() < 1e-14);
        if fwd.g.norm() > 1e-13 {
            let r = bwd.g / fwd.g;
            prop_assert!((r.re - (-beta * p0 as f64).exp()).abs() < 1e-10 && r.im.abs() < 1e-10);
        }
    }
}
