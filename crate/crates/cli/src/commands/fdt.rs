use std::f64::consts::PI;

use qfnoise_core::fields::{scalar_field_form, QuadraticObservable};
use qfnoise_core::fock::{build_fock_space, Channel, ModeGrid, SparseOperator, Species};
use qfnoise_core::spacetime::FourVector;
use qfnoise_core::spectral::{lehmann_from_operators, SpectralSample};
use qfnoise_core::C64;

use super::{scalar_line, truncation_rows, Context, TRUNCATION_HEADER};
use crate::artifacts::{p_label, ArtifactDir};
use crate::error::CliError;
use crate::report::{Check, Provenance, RunReport};

pub fn run(ctx: &Context, dir: &mut ArtifactDir) -> Result<RunReport, CliError> {
    let c = &ctx.cfg.fdt;
    let tol = &ctx.cfg.tolerances;
    let mut report = RunReport::new("fdt", ctx.cfg.seed);
    let space = scalar_line(&c.line)?;
    let origin = FourVector::default();
    let phi_form = scalar_field_form(&space)?;
    let phi = phi_form.realize_at(&space, &origin);
    let mut sq = QuadraticObservable::new("phi2");
    sq.add_product(&space, C64::new(1.0, 0.0), &phi_form, &phi_form);
    let phi2 = sq.realize(&space);
    let ops: [(&str, &SparseOperator); 2] = [("phi", &phi), ("phi2", &phi2)];

    let unit = 2.0 * PI / c.line.length;
    let mut samples: Vec<SpectralSample> = Vec::new();
    for &beta in &c.betas {
        for n0 in c.p0_range.0..=c.p0_range.1 {
            for n3 in c.p3_range.0..=c.p3_range.1 {
                let p = FourVector::new(n0 as f64 * unit, 0.0, 0.0, n3 as f64 * unit);
                for (label, op) in ops {
                    let fwd = lehmann_from_operators(&space, (label, op), (label, op), p, Some(beta), None)?;
                    let bwd = lehmann_from_operators(&space, (label, op), (label, op), -p, Some(beta), None)?;
                    if fwd.g.norm() > tol.fdt_floor {
                        let name = format!("beta={beta}/{label}/p={}", p_label(&p));
                        let ratio = bwd.g / (fwd.g * (-beta * p[0]).exp());
                        report.push(Check::within(format!("{name}/ratio"), ratio.re, 1.0, tol.fdt, Provenance::Identity));
                        report.push(Check::within(format!("{name}/imag"), ratio.im, 0.0, tol.fdt, Provenance::Identity));
                    }
                    samples.push(fwd);
                }
            }
        }
    }
    dir.spectral("spectral.csv", &samples)?;
    dir.csv("truncation.csv", &TRUNCATION_HEADER, truncation_rows(&space, c.line.cap, &c.betas))?;

    // One massive zero-momentum mode against the truncated Gibbs sum.
    let grid = ModeGrid::new([c.line.length; 3], [(0, 0); 3], Species::Boson, 1.0)?.with_zero_mode(true);
    let volume = grid.volume();
    let single = build_fock_space(&[(Channel::Scalar, grid)], c.single_mode_cap, c.single_mode_cap as u32)?;
    let phi1 = scalar_field_form(&single)?.realize_at(&single, &origin);
    let e = 1.0;
    for &beta in &c.betas {
        let p = FourVector::new(e, 0.0, 0.0, 0.0);
        let got = lehmann_from_operators(&single, ("phi", &phi1), ("phi", &phi1), p, Some(beta), None)?;
        let z: f64 = (0..=c.single_mode_cap).map(|n| (-beta * e * n as f64).exp()).sum();
        let want: f64 = (0..c.single_mode_cap).map(|n| (-beta * e * n as f64).exp() * (n + 1) as f64).sum::<f64>() / (z * 2.0 * e * volume);
        report.push(Check::relative(format!("single-mode/beta={beta}/gibbs"), got.g.re, want, tol.fdt, Provenance::Oracle));
        let back = lehmann_from_operators(&single, ("phi", &phi1), ("phi", &phi1), -p, Some(beta), None)?;
        report.push(Check::within(
            format!("single-mode/beta={beta}/ratio"),
            back.g.re / (got.g.re * (-beta * e).exp()),
            1.0,
            tol.fdt,
            Provenance::Identity,
        ));
    }
    Ok(report)
}
