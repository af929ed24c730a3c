use qfnoise_core::fields::{scalar_field_form, QuadraticObservable};
use qfnoise_core::measurement::{difference_variance, homodyne_difference, localization_effect, richardson_ratio, HomodyneConfig};
use qfnoise_core::C64;

use super::{scalar_line, Context};
use crate::artifacts::ArtifactDir;
use crate::error::CliError;
use crate::report::{Check, Provenance, RunReport};

/// Probe values of S̄ for the readout table.
const SBAR: [f64; 5] = [-2.0, -0.3, 0.0, 0.7, 5.0];
/// Largest |αS̄| at which the cubic-remainder ratio is checked.
const RICHARDSON_MAX: f64 = 0.1;

pub fn run(ctx: &Context, dir: &mut ArtifactDir) -> Result<RunReport, CliError> {
    let c = &ctx.cfg.homodyne;
    let mut report = RunReport::new("homodyne", ctx.cfg.seed);
    let mut rows = Vec::new();
    for &alpha in &c.alphas {
        let cfg = HomodyneConfig { alpha, attenuation: c.attenuation, phase: c.phase, tuning: c.tuning };
        for s in SBAR {
            let r = homodyne_difference(s, &cfg)?;
            let scale = r.linearized.abs().max(1.0);
            report.push(Check::within(format!("readout/alpha={alpha}/sbar={s}"), r.exact, r.linearized, 4.0 * f64::EPSILON * scale, Provenance::Identity));
            rows.push(
                [alpha, s, r.exact, r.linearized, r.unitary, r.unitary_linearized].iter().map(|x| x.to_string()).chain([r.strong.to_string()]).collect::<Vec<_>>(),
            );
        }
        if alpha <= RICHARDSON_MAX {
            let ratio = richardson_ratio(1.0, &cfg)?;
            report.push(Check::within(format!("cubic-remainder/alpha={alpha}"), ratio, 8.0, 0.1, Provenance::ClosedForm));
        }
    }
    dir.csv("readout.csv", &["alpha", "sbar", "exact", "linearized", "unitary", "unitary_linearized", "strong"], rows)?;

    // Dark counts: vacuum variance of the localized density, read out through
    // the attenuated, dephased port, against the ideal-port budget.
    let space = scalar_line(&c.line)?;
    let phi = scalar_field_form(&space)?;
    let mut density = QuadraticObservable::new("phi2");
    density.add_product(&space, C64::new(1.0, 0.0), &phi, &phi);
    let loc = localization_effect(&space, &density, c.p_bar, c.sigma_x, &c.sigma_ts)?;
    report.push(Check::flag("localization/monotone", loc.monotone, Provenance::Bound));
    let mut dark = Vec::new();
    for &alpha in &c.alphas {
        let cfg = HomodyneConfig { alpha, attenuation: c.attenuation, phase: c.phase, tuning: c.tuning };
        let ideal = HomodyneConfig::new(alpha);
        for pt in &loc.points {
            let var = difference_variance(pt.vacuum_variance, &cfg);
            let budget = difference_variance(pt.vacuum_variance, &ideal);
            report.push(Check::at_most(format!("dark-count/alpha={alpha}/sigma_t={}", pt.sigma_t), var, budget, Provenance::Bound));
            dark.push(vec![alpha.to_string(), pt.sigma_t.to_string(), var.to_string(), budget.to_string()]);
        }
    }
    dir.csv(
        "localization.csv",
        &["sigma_t", "leakage", "vacuum_variance"],
        loc.points.iter().map(|p| vec![p.sigma_t.to_string(), p.leakage.to_string(), p.vacuum_variance.to_string()]),
    )?;
    dir.csv("dark_counts.csv", &["alpha", "sigma_t", "variance", "budget"], dark)?;
    dir.json("localization.json", &loc)?;
    Ok(report)
}
