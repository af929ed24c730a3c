use qfnoise_core::correlators::{three_point_combination, OrderingScheme, NOISELESS_COMBINATION};
use qfnoise_core::spacetime::FourVector;

use super::Context;
use crate::artifacts::ArtifactDir;
use crate::error::CliError;
use crate::report::{Check, Provenance, RunReport};

/// p = (v, 0, 0, w/2), q = (−v, 0, 0, w/2), k = p + q.
fn legs(v: f64, w: f64) -> (FourVector, FourVector, FourVector) {
    let p = FourVector::new(v, 0.0, 0.0, w / 2.0);
    let q = FourVector::new(-v, 0.0, 0.0, w / 2.0);
    (p + q, p, q)
}

pub fn run(ctx: &Context, dir: &mut ArtifactDir) -> Result<RunReport, CliError> {
    let c = &ctx.cfg.threepoint;
    let tol = ctx.cfg.tolerances.threepoint;
    let mut report = RunReport::new("threepoint", ctx.cfg.seed);
    let mut rows = Vec::new();

    let (k, p, q) = legs(0.0, c.w);
    let zz = three_point_combination(k, p, q, &[((3, 3), 1.0)], c.m, OrderingScheme::KeldyshSymmetric)?;
    let want = c.w * c.w / 8.0 + c.m * c.m / 2.0;
    report.push(Check::relative("T33 at v=0", zz.numerator, want, tol, Provenance::ClosedForm));
    rows.push(("T33 at v=0", zz.numerator, want));

    let (k, p, q) = legs(c.v, c.w);
    let nl = three_point_combination(k, p, q, &NOISELESS_COMBINATION, c.m, OrderingScheme::KeldyshSymmetric)?;
    let want = -2.0 * c.v * c.v;
    report.push(Check::relative("noiseless combination", nl.numerator, want, tol, Provenance::ClosedForm));
    rows.push(("noiseless combination", nl.numerator, want));

    let e = (c.m * c.m + c.w * c.w / 4.0).sqrt();
    let (k, p, q) = legs(e, c.w);
    let tb = three_point_combination(k, p, q, &NOISELESS_COMBINATION, c.m, OrderingScheme::ThreeBranch)?;
    let on_shell = tb.on_shell_term.unwrap_or(f64::NAN);
    let want = -2.0 * e * e;
    report.push(Check::relative("three-branch on-shell", on_shell, want, tol, Provenance::ClosedForm));
    rows.push(("three-branch on-shell", on_shell, want));

    dir.csv(
        "prefactors.csv",
        &["quantity", "w", "m", "v", "computed", "expected"],
        rows.iter().map(|(n, got, want)| {
            vec![n.to_string(), c.w.to_string(), c.m.to_string(), c.v.to_string(), got.to_string(), want.to_string()]
        }),
    )?;
    Ok(report)
}
