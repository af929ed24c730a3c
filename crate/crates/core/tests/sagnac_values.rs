use std::f64::consts::PI;

use qfnoise_core::fields::{QuadraticObservable, StressConvention};
use qfnoise_core::fock::{Channel, SagnacKind};
use qfnoise_core::measurement::*;
use qfnoise_core::spacetime::FourVector;

const CASES: [(f64, f64); 4] = [(2.0 * PI, 0.5), (2.0 * PI, 1.0), (2.0 * PI, 2.0), (PI, 1.0)];

fn run(kind: SagnacKind, l: f64, m: f64, obs: SagnacObservable, conv: StressConvention) -> (SagnacRun, MomentReport) {
    let r = SagnacRun::new(kind, l, m, obs, 1, conv).unwrap();
    let rep = r.moments(4).unwrap();
    assert_eq!(rep.leaked, 0.0);
    (r, rep)
}

#[test]
fn dirac_signals_and_eigenstate_property() {
    for (l, m) in CASES {
        let (r, rep) = run(SagnacKind::DiracA, l, m, SagnacObservable::J0, StressConvention::Covariant);
        let k = r.kinematics;
        assert!((rep.moments[0].re - r.window.tau * k.mass / (2.0 * k.energy)).abs() < 1e-10);
        assert!(rep.defect < 1e-10);

        let (r, rep) = run(SagnacKind::DiracB, l, m, SagnacObservable::J1, StressConvention::Covariant);
        let k = r.kinematics;
        assert!((rep.moments[0].re - r.window.tau * k.k3 / (2.0 * k.energy)).abs() < 1e-10, "{}", rep.moments[0]);
        assert!(rep.defect < 1e-10);
    }
}

#[test]
fn scalar_energy_density_matches_main_text() {
    for (l, m) in CASES {
        let (r, rep) = run(SagnacKind::Scalar, l, m, SagnacObservable::T00, StressConvention::Covariant);
        let k = r.kinematics;
        let main = r.window.tau * m * m / (2.0 * k.energy);
        for (n, v) in rep.moments.iter().enumerate() {
            assert!((v.re - main.powi(n as i32 + 1)).abs() < 1e-10 * main.powi(n as i32 + 1).max(1.0));
        }
        assert!(rep.defect < 1e-10);
    }
}

#[test]
fn photon_signals_by_convention() {
    for (l, _) in CASES {
        for (conv, sign) in [(StressConvention::Covariant, -1.0), (StressConvention::MaxwellStress, 1.0)] {
            for obs in [SagnacObservable::T11PlusT00, SagnacObservable::HalfT11MinusT22, SagnacObservable::T11, SagnacObservable::MinusT22] {
                let (r, rep) = run(SagnacKind::PhotonV, l, 0.0, obs, conv);
                let want = sign * r.kinematics.energy * r.window.tau / 2.0;
                assert!((rep.moments[0].re - want).abs() < 1e-10, "{obs:?} {conv:?}: {} vs {want}", rep.moments[0]);
                assert!(rep.defect < 1e-10);
            }
            let (_, rep) = run(SagnacKind::PhotonV, l, 0.0, SagnacObservable::T00, conv);
            assert!(rep.moments.iter().all(|v| v.norm() < 1e-12));
        }
    }
}

#[test]
fn orthogonal_polarization_sees_nothing() {
    let r = SagnacRun::new(SagnacKind::PhotonV, 2.0 * PI, 0.0, SagnacObservable::T11PlusT00, 1, StressConvention::Covariant).unwrap();
    let space = &r.space;
    let h_only: QuadraticObservable =
        r.observable.restricted("H", |l| space.modes()[l.mode].channel == Channel::PhotonH);
    let rep = moments(space, &r.state, &h_only, 2).unwrap();
    assert!(rep.moments.iter().all(|v| v.norm() < 1e-12));
}

#[test]
fn vacuum_expectation_and_hermiticity() {
    for kind in [SagnacKind::DiracA, SagnacKind::DiracB, SagnacKind::Scalar, SagnacKind::PhotonV] {
        let obs = match kind {
            SagnacKind::DiracA => SagnacObservable::J0,
            SagnacKind::DiracB => SagnacObservable::J1,
            SagnacKind::Scalar => SagnacObservable::T00,
            SagnacKind::PhotonV => SagnacObservable::T11PlusT00,
        };
        let r = SagnacRun::new(kind, 2.0 * PI, 1.0, obs, 1, StressConvention::Covariant).unwrap();
        assert!(r.observable.hermiticity_defect(&r.space).unwrap() < 1e-12);
        assert!(vacuum_variance(&r.space, &r.observable).unwrap() < 1e-12);
    }
}

#[test]
fn incommensurate_window_reports_sinc_correction() {
    let r = SagnacRun::new(SagnacKind::Scalar, 2.0 * PI, 1.0, SagnacObservable::T00, 1, StressConvention::Covariant).unwrap();
    let window = MeasurementWindow::full_box(r.space.grid(Channel::Scalar).unwrap(), r.window.tau * 1.3).unwrap();
    let off = SagnacRun::with_window(r.space.clone(), r.config, window, SagnacObservable::T00, StressConvention::Covariant).unwrap();
    let rep = off.moments(2).unwrap();
    // The standing-wave pair has zero frequency transfer, so the mean scales with τ;
    // pair creation no longer cancels and pushes weight out of the truncation.
    let k = off.kinematics;
    assert!((rep.moments[0].re - off.window.tau / (2.0 * k.energy)).abs() < 1e-10);
    assert!(rep.leaked > 1e-3);
}

#[test]
fn open_space_substitution() {
    let r = SagnacRun::new(SagnacKind::DiracB, 2.0 * PI, 1.0, SagnacObservable::J1, 1, StressConvention::Covariant).unwrap();
    let grid = r.space.grid(Channel::DiracL).unwrap();
    let w = MeasurementWindow::open_space(grid, 10.0, r.kinematics.velocity).unwrap();
    assert!((w.tau - 10.0 / r.kinematics.velocity).abs() < 1e-12);
    let p = FourVector::new(0.0, 0.0, 0.0, 2.0 * r.kinematics.k3);
    assert!(p.dot(&p) < 0.0);
}
