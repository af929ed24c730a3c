use std::f64::consts::PI;

use qfnoise_core::fields::{scalar_field_form, stress_tensor_scalar, QuadraticObservable};
use qfnoise_core::fock::{build_fock_space, Channel, FockSpace, ModeGrid, Species};
use qfnoise_core::measurement::*;
use qfnoise_core::spacetime::FourVector;
use qfnoise_core::C64;

fn massless_line(n_max: i32) -> FockSpace {
    let grid = ModeGrid::line(3, 2.0 * PI, n_max, Species::Boson, 0.0).unwrap();
    build_fock_space(&[(Channel::Scalar, grid)], 2, 2).unwrap()
}

fn phi_squared(space: &FockSpace) -> QuadraticObservable {
    let phi = scalar_field_form(space).unwrap();
    let mut out = QuadraticObservable::new("phi2");
    out.add_product(space, C64::new(1.0, 0.0), &phi, &phi);
    out
}

fn spacelike_lattice_points() -> Vec<FourVector> {
    // τ = 2L puts the temporal zeros at multiples of 1/2.
    let mut out = Vec::new();
    for p1 in [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0] {
        for p0 in [0.0, 0.5, -0.5, 1.5, -2.5] {
            if p0 * p0 < p1 * p1 {
                out.push(FourVector::new(p0, 0.0, 0.0, p1));
            }
        }
    }
    out
}

#[test]
fn vacuum_variance_vanishes_at_spacelike_p() {
    let space = massless_line(3);
    let grid = space.grid(Channel::Scalar).unwrap();
    let w = MeasurementWindow::full_box(grid, 2.0 * grid.lengths[2]).unwrap();
    let points = spacelike_lattice_points();
    assert!(points.len() >= 10);
    for density in [phi_squared(&space), stress_tensor_scalar(0, 0, &space).unwrap(), stress_tensor_scalar(0, 3, &space).unwrap()] {
        for p in &points {
            let (sbar, spacelike) = spacelike_windowed_observable(&space, &density, p, &w);
            assert!(spacelike);
            let v = vacuum_variance(&space, &sbar).unwrap();
            assert!(v <= 1e-12, "{p:?}: {v}");
        }
    }
}

#[test]
fn timelike_p_is_noisy() {
    let space = massless_line(3);
    let grid = space.grid(Channel::Scalar).unwrap();
    let w = MeasurementWindow::full_box(grid, 2.0 * grid.lengths[2]).unwrap();
    // Massless T⁰⁰ on a line has no opposite-mover pairs, so use :φ²:.
    let density = phi_squared(&space);
    let (sbar, spacelike) = spacelike_windowed_observable(&space, &density, &FourVector::new(3.0, 0.0, 0.0, 1.0), &w);
    assert!(!spacelike);
    assert!(vacuum_variance(&space, &sbar).unwrap() > 1e-3);
}

#[test]
fn localization_leakage_is_monotone_and_bounds_homodyne_noise() {
    let space = massless_line(3);
    let density = stress_tensor_scalar(0, 0, &space).unwrap();
    let sigma_ts = [0.5, 1.0, 2.0, 4.0, 8.0];
    let rep = localization_effect(&space, &density, (0.0, 2.0), 1.0, &sigma_ts).unwrap();
    assert!(rep.monotone, "{rep:?}");
    assert!(rep.gaussian_rate.unwrap() < 0.0);
    let cfg = HomodyneConfig { attenuation: 0.9, phase: 0.3, ..HomodyneConfig::new(0.05) };
    let ideal = HomodyneConfig::new(0.05);
    for pt in &rep.points {
        let budget = difference_variance(pt.vacuum_variance, &ideal);
        assert!(difference_variance(pt.vacuum_variance, &cfg) <= budget);
    }
}

#[test]
fn homodyne_real_inputs() {
    for s in [-2.0, -0.3, 0.0, 0.7, 5.0] {
        let r = homodyne_difference(s, &HomodyneConfig::new(0.01)).unwrap();
        assert!((r.exact - r.linearized).abs() <= 1e-15 * r.linearized.abs().max(1.0));
    }
}
