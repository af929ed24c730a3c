use qfnoise_core::spectral::{log_space, noise_scaling, signal_vs_noise_curve, NoiseKind, NoiseScaling};
use rayon::prelude::*;

use super::Context;
use crate::artifacts::ArtifactDir;
use crate::error::CliError;
use crate::report::{Check, Provenance, RunReport};

fn kind_label(k: NoiseKind) -> &'static str {
    match k {
        NoiseKind::Current => "current",
        NoiseKind::Energy => "energy",
    }
}

pub fn run(ctx: &Context, dir: &mut ArtifactDir) -> Result<RunReport, CliError> {
    let c = &ctx.cfg.scaling;
    let tol = ctx.cfg.tolerances.exponent;
    let mut report = RunReport::new("scaling", ctx.cfg.seed);

    let jobs: Vec<(NoiseKind, usize)> =
        [NoiseKind::Current, NoiseKind::Energy].into_iter().flat_map(|k| (1..=3).map(move |d| (k, d))).collect();
    let fits = jobs
        .par_iter()
        .map(|&(kind, d)| {
            let ell = c.volume.powf(1.0 / d as f64);
            noise_scaling(kind, d, c.volume, c.tau_min * ell, c.tau_max * ell, c.points)
        })
        .collect::<Result<Vec<NoiseScaling>, _>>()?;

    report.push(Check::new("tau-range/decades", (c.tau_max / c.tau_min).log10(), 1.0, crate::report::Relation::AtLeast, 0.0, Provenance::Bound));
    for fit in &fits {
        let name = format!("{}/D={}", kind_label(fit.kind), fit.dimension);
        report.push(Check::within(format!("{name}/exponent"), fit.exponent, fit.expected, tol, Provenance::ClosedForm));
        dir.csv(
            &format!("noise_{}_D{}.csv", kind_label(fit.kind), fit.dimension),
            &["tau", "mean_square"],
            fit.taus.iter().zip(&fit.values).map(|(t, v)| vec![t.to_string(), v.to_string()]),
        )?;
    }
    dir.json("exponents.json", &fits)?;

    let taus = log_space(c.curve_tau_min, c.curve_tau_max, c.curve_points);
    for d in 1..=3 {
        let curve = signal_vs_noise_curve(d, c.curve_energy, &taus)?;
        dir.csv(
            &format!("signal_vs_noise_D{d}.csv"),
            &["tau", "signal", "noise", "ratio"],
            curve.rows.iter().map(|r| vec![r.tau.to_string(), r.signal.to_string(), r.noise.to_string(), r.ratio.to_string()]),
        )?;
    }
    Ok(report)
}
