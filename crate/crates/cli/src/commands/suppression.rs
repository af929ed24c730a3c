use std::f64::consts::PI;

use qfnoise_core::fields::{scalar_field_form, QuadraticObservable};
use qfnoise_core::spacetime::FourVector;
use qfnoise_core::spectral::{lehmann_from_operators, suppression_fit_operators};
use qfnoise_core::C64;

use super::{scalar_line, truncation_rows, Context, TRUNCATION_HEADER};
use crate::artifacts::{p_label, ArtifactDir};
use crate::error::CliError;
use crate::report::{Check, Provenance, RunReport};

pub fn run(ctx: &Context, dir: &mut ArtifactDir) -> Result<RunReport, CliError> {
    let c = &ctx.cfg.suppression;
    let tol = ctx.cfg.tolerances.suppression_slope;
    let mut report = RunReport::new("suppression", ctx.cfg.seed);
    let space = scalar_line(&c.line)?;
    let phi = scalar_field_form(&space)?;
    let mut sq = QuadraticObservable::new("phi2");
    sq.add_product(&space, C64::new(1.0, 0.0), &phi, &phi);
    let op = sq.realize(&space);

    let unit = 2.0 * PI / c.line.length;
    let mut samples = Vec::new();
    let mut fits = Vec::new();
    for &(n0, n3) in &c.momenta {
        let p = FourVector::new(n0 as f64 * unit, 0.0, 0.0, n3 as f64 * unit);
        if p.dot(&p) >= 0.0 {
            return Err(CliError::Config(format!("suppression momentum {} is not space-like", p_label(&p))));
        }
        for &beta in &c.betas {
            samples.push(lehmann_from_operators(&space, ("phi2", &op), ("phi2", &op), p, Some(beta), None)?);
        }
        let zero_t = lehmann_from_operators(&space, ("phi2", &op), ("phi2", &op), p, None, None)?;
        let name = format!("p={}", p_label(&p));
        report.push(Check::within(format!("{name}/vacuum"), zero_t.g.norm(), 0.0, 0.0, Provenance::Identity));
        samples.push(zero_t);

        let fit = suppression_fit_operators(&space, ("phi2", &op), ("phi2", &op), p, &c.betas)?;
        // The bound is an envelope: never exceeded, and attained when p⁰ ≥ 0.
        report.push(Check::at_most(format!("{name}/slope-bound"), fit.slope, fit.bound_slope * (1.0 - tol), Provenance::Bound));
        if p[0] >= 0.0 {
            report.push(Check::relative(format!("{name}/slope"), fit.slope, fit.bound_slope, tol, Provenance::ClosedForm));
        }
        fits.push(fit);
    }
    dir.spectral("spectral.csv", &samples)?;
    dir.csv("truncation.csv", &TRUNCATION_HEADER, truncation_rows(&space, c.line.cap, &c.betas))?;
    dir.json("fits.json", &fits)?;
    Ok(report)
}
