use std::f64::consts::PI;

use qfnoise_core::fields::{dirac_current, field_strength, scalar_field_form, stress_tensor_scalar, QuadraticObservable};
use qfnoise_core::fock::{build_fock_space, Channel, FockSpace, ModeGrid, SparseOperator, Species};
use qfnoise_core::measurement::{spacelike_windowed_observable, vacuum_variance, MeasurementWindow};
use qfnoise_core::spacetime::{g, FourVector};
use qfnoise_core::spectral::lehmann_from_operators;
use qfnoise_core::tensors::*;
use qfnoise_core::C64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{scalar_line, Context};
use crate::artifacts::{p_label, ArtifactDir};
use crate::config::LineConfig;
use crate::error::CliError;
use crate::report::{Check, Provenance, RunReport};

/// Lower bound imposed on coefficients that positivity makes non-negative.
const SIGN_TOL: f64 = 1e-10;

pub fn run(ctx: &Context, dir: &mut ArtifactDir) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("noiseless", ctx.cfg.seed);
    let mut rng = ctx.rng("noiseless");
    let points = vacuum_variances(ctx, &mut rng, &mut report, dir)?;
    tensor_pipeline(ctx, &points, &mut report, dir)?;
    model_fits(ctx, &mut rng, &mut report)?;
    projectors(ctx, &mut rng, &mut report, dir)?;
    Ok(report)
}

fn phi_squared(space: &FockSpace) -> Result<QuadraticObservable, CliError> {
    let phi = scalar_field_form(space)?;
    let mut sq = QuadraticObservable::new("phi2");
    sq.add_product(space, C64::new(1.0, 0.0), &phi, &phi);
    Ok(sq)
}

/// Space-like lattice momenta whose p⁰ is a temporal zero of the window.
fn candidates(line: &LineConfig, tau_lengths: u32, p3_max: i32) -> Vec<FourVector> {
    let unit = 2.0 * PI / line.length;
    let t = tau_lengths as i32;
    let mut out = Vec::new();
    for n3 in (-p3_max..=p3_max).filter(|&n| n != 0) {
        for j in -(n3.abs() * t - 1)..=(n3.abs() * t - 1) {
            out.push(FourVector::new(j as f64 * unit / t as f64, 0.0, 0.0, n3 as f64 * unit));
        }
    }
    out
}

fn vacuum_variances(
    ctx: &Context,
    rng: &mut ChaCha8Rng,
    report: &mut RunReport,
    dir: &mut ArtifactDir,
) -> Result<Vec<FourVector>, CliError> {
    let c = &ctx.cfg.noiseless;
    let tol = ctx.cfg.tolerances.vacuum_variance;
    let space = scalar_line(&c.line)?;
    let grid = space.grid(Channel::Scalar).expect("scalar grid");
    let window = MeasurementWindow::full_box(grid, c.tau_lengths as f64 * c.line.length)?;
    let mut pts = candidates(&c.line, c.tau_lengths, c.p3_max);
    pts.shuffle(rng);
    pts.truncate(c.samples);
    if pts.len() < c.samples {
        return Err(CliError::Config(format!("only {} space-like lattice points available", pts.len())));
    }
    let densities = [phi_squared(&space)?, stress_tensor_scalar(0, 0, &space)?, stress_tensor_scalar(0, 3, &space)?];
    let mut rows = Vec::new();
    for d in &densities {
        for p in &pts {
            let (sbar, spacelike) = spacelike_windowed_observable(&space, d, p, &window);
            debug_assert!(spacelike);
            let v = vacuum_variance(&space, &sbar)?;
            report.push(Check::at_most(format!("variance/{}/p={}", d.label, p_label(p)), v, tol, Provenance::Bound));
            rows.push(vec![d.label.clone(), p[0].to_string(), p[3].to_string(), v.to_string()]);
        }
    }
    dir.csv("vacuum_variance.csv", &["density", "p0", "p3", "variance"], rows)?;
    Ok(pts)
}

fn vacuum_tensor(space: &FockSpace, ops: &[SparseOperator], rank: TensorRank, p: FourVector) -> Result<TensorCorrelation, CliError> {
    // Rank-2 data pairs single operators; rank-4 data pairs index pairs.
    let pairs: Vec<(usize, usize)> = match rank {
        TensorRank::Vector => (0..16).map(|i| (i / 4, i % 4)).collect(),
        _ => (0..256).map(|i| (i / 16, i % 16)).collect(),
    };
    let values = pairs
        .into_iter()
        .map(|(x, y)| Ok(lehmann_from_operators(space, ("X", &ops[x]), ("Y", &ops[y]), p, None, None)?.g))
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(TensorCorrelation::new(rank, p, values)?)
}

#[derive(Serialize)]
struct PipelineRecord {
    source: &'static str,
    max_abs: f64,
    fit: DecompositionFit,
}

fn tensor_pipeline(ctx: &Context, pts: &[FourVector], report: &mut RunReport, dir: &mut ArtifactDir) -> Result<(), CliError> {
    let line = &ctx.cfg.noiseless.tensor_line;
    let tol = ctx.cfg.tolerances.tensor_zero;
    let unit = 2.0 * PI / line.length;
    // Keep momenta the smaller lattice can resolve.
    let pts: Vec<FourVector> = pts.iter().copied().filter(|p| (p[3] / unit).abs() <= 2.0 * line.n_max as f64).take(4).collect();

    let scalar = scalar_line(line)?;
    let t_ops = (0..16).map(|i| Ok(stress_tensor_scalar(i / 4, i % 4, &scalar)?.realize(&scalar))).collect::<Result<Vec<_>, CliError>>()?;

    let dirac_grid = ModeGrid::line(3, line.length, line.n_max, Species::Fermion, line.mass)?;
    let channels = [Channel::DiracL, Channel::DiracR, Channel::AntiDiracL, Channel::AntiDiracR];
    let dirac = build_fock_space(&channels.map(|c| (c, dirac_grid.clone())), 1, line.total)?;
    let j_ops = (0..4).map(|m| Ok(dirac_current(m, &dirac)?.realize(&dirac))).collect::<Result<Vec<_>, CliError>>()?;

    let photon_grid = ModeGrid::line(3, line.length, line.n_max, Species::Boson, 0.0)?;
    let photon = build_fock_space(&[(Channel::PhotonH, photon_grid.clone()), (Channel::PhotonV, photon_grid)], line.cap, line.total)?;
    let f_ops = field_strength(&photon, &FourVector::default())?;

    let mut records = Vec::new();
    for p in &pts {
        let name = format!("p={}", p_label(p));

        let t = vacuum_tensor(&dirac, &j_ops, TensorRank::Vector, *p)?;
        let fit = decompose_vector(&t)?;
        let xi = fit.coefficient("xi").unwrap_or_default().norm();
        report.push(Check::at_most(format!("current/{name}/xi"), xi, tol, Provenance::Bound));
        let eta_pp = fit.coefficient("eta").unwrap_or_default().re * p.dot(p);
        report.push(Check::new(format!("current/{name}/eta-sign"), eta_pp, 0.0, crate::report::Relation::AtLeast, SIGN_TOL, Provenance::Bound));
        records.push(PipelineRecord { source: "dirac current", max_abs: t.max_abs(), fit });

        let t = vacuum_tensor(&scalar, &t_ops, TensorRank::Symmetric2, *p)?;
        let fit = decompose_symmetric(&t, false)?;
        for c in ["v", "f"] {
            let x = fit.coefficient(c).unwrap_or_default().norm();
            report.push(Check::at_most(format!("stress/{name}/{c}"), x, tol, Provenance::Bound));
        }
        let a = fit.coefficient("a").unwrap_or_default().re;
        report.push(Check::new(format!("stress/{name}/a-sign"), a, 0.0, crate::report::Relation::AtLeast, SIGN_TOL, Provenance::Bound));
        records.push(PipelineRecord { source: "scalar stress tensor", max_abs: t.max_abs(), fit });

        let t = vacuum_tensor(&photon, &f_ops, TensorRank::Antisymmetric2, *p)?;
        report.push(Check::at_most(format!("field-strength/{name}/max"), t.max_abs(), tol, Provenance::Bound));
        let fit = decompose_antisymmetric(&t)?;
        records.push(PipelineRecord { source: "field strength", max_abs: t.max_abs(), fit });
    }
    dir.json("tensor_fits.json", &records)?;
    Ok(())
}

fn random_spacelike(rng: &mut ChaCha8Rng) -> FourVector {
    loop {
        let k: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-3.0..3.0));
        let n = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        if n > 0.1 {
            return FourVector::from_parts(rng.gen_range(-0.9..0.9) * n, k);
        }
    }
}

fn model_fits(ctx: &Context, rng: &mut ChaCha8Rng, report: &mut RunReport) -> Result<(), CliError> {
    let trials = ctx.cfg.noiseless.model_trials;
    let tol = ctx.cfg.tolerances.model_fit;
    let mut worst = [0.0f64; 3];
    let mut residual = [0.0f64; 3];
    for _ in 0..trials {
        let p = random_spacelike(rng);
        let mut r = |lo: f64, hi: f64| C64::new(rng.gen_range(lo..hi), 0.0);
        let cases = [
            (TensorRank::Vector, vec![("eta", r(0.0, 2.0)), ("xi", r(-1.0, 1.0))]),
            (TensorRank::Symmetric2, vec![("a", r(0.0, 2.0)), ("b", r(-1.0, 1.0)), ("f", r(-1.0, 1.0)), ("v", r(-1.0, 1.0)), ("w", r(0.0, 2.0))]),
            (TensorRank::Antisymmetric2, vec![("a", r(0.0, 2.0)), ("v", r(-1.0, 1.0)), ("f", r(-1.0, 1.0))]),
        ];
        for (i, (rank, coeffs)) in cases.into_iter().enumerate() {
            let t = model_correlation(rank, p, &coeffs)?;
            let fit = match rank {
                TensorRank::Vector => decompose_vector(&t)?,
                TensorRank::Symmetric2 => decompose_symmetric(&t, false)?,
                TensorRank::Antisymmetric2 => decompose_antisymmetric(&t)?,
            };
            residual[i] = residual[i].max(fit.residual);
            for (name, want) in &coeffs {
                let got = fit.coefficient(name).unwrap_or(C64::new(f64::NAN, 0.0));
                worst[i] = worst[i].max((got - want).norm());
            }
        }
    }
    for (i, rank) in ["vector", "symmetric", "antisymmetric"].iter().enumerate() {
        report.push(Check::at_most(format!("model/{rank}/coefficients"), worst[i], tol, Provenance::Identity));
        report.push(Check::at_most(format!("model/{rank}/residual"), residual[i], tol, Provenance::Identity));
    }
    Ok(())
}

#[derive(Serialize)]
struct ProjectorSummary {
    trials: usize,
    vector_transverse: f64,
    general_trace: f64,
    general_sandwich: f64,
    /// Not an identity of the general form; reported for reference.
    general_transverse: f64,
    conserved_trace: f64,
    conserved_transverse: f64,
}

fn projectors(ctx: &Context, rng: &mut ChaCha8Rng, report: &mut RunReport, dir: &mut ArtifactDir) -> Result<(), CliError> {
    let trials = ctx.cfg.noiseless.projector_trials;
    let tol = ctx.cfg.tolerances.projector;
    let mut s = ProjectorSummary {
        trials,
        vector_transverse: 0.0,
        general_trace: 0.0,
        general_sandwich: 0.0,
        general_transverse: 0.0,
        conserved_trace: 0.0,
        conserved_transverse: 0.0,
    };
    let max_norm = |it: &mut dyn Iterator<Item = C64>| it.map(|x| x.norm()).fold(0.0, f64::max);
    for _ in 0..trials {
        let p = random_spacelike(rng);
        let e2 = p.euclidean_norm_sqr();
        let mut c = || C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let a: [C64; 4] = std::array::from_fn(|_| c());
        let raw: [C64; 16] = std::array::from_fn(|_| c());
        let b: Matrix4c = std::array::from_fn(|m| std::array::from_fn(|n| raw[4 * m.min(n) + m.max(n)]));

        let at = project_noiseless_vector(&a, &p);
        let pa: C64 = (0..4).map(|m| at[m] * (g(m, m) * p[m])).sum();
        s.vector_transverse = s.vector_transverse.max(pa.norm() / (e2.powf(1.5) * max_norm(&mut a.iter().copied())));

        let bmax = max_norm(&mut b.iter().flatten().copied());
        let gen = project_noiseless_tensor(&b, &p, false);
        s.general_trace = s.general_trace.max(trace(&gen).norm() / (e2.powi(3) * bmax));
        s.general_sandwich = s.general_sandwich.max(sandwich(&gen, &p).norm() / (e2.powi(3) * bmax));
        s.general_transverse = s.general_transverse.max(max_norm(&mut contract_first(&gen, &p).into_iter()) / (e2.powf(2.5) * bmax));

        // Conserved input: Π B Πᵀ with Π^μ_α = δ^μ_α − p^μ p_α/(p·p).
        let pp = p.dot(&p);
        let proj = |m: usize, a: usize| (if m == a { 1.0 } else { 0.0 }) - p[m] * g(a, a) * p[a] / pp;
        let cons: Matrix4c = std::array::from_fn(|m| {
            std::array::from_fn(|n| {
                let mut acc = C64::new(0.0, 0.0);
                for x in 0..4 {
                    for y in 0..4 {
                        acc += b[x][y] * (proj(m, x) * proj(n, y));
                    }
                }
                acc
            })
        });
        let out = project_noiseless_tensor(&cons, &p, true);
        let cmax = max_norm(&mut cons.iter().flatten().copied()).max(f64::MIN_POSITIVE);
        s.conserved_trace = s.conserved_trace.max(trace(&out).norm() / (e2.powf(1.5) * cmax));
        s.conserved_transverse = s.conserved_transverse.max(max_norm(&mut contract_first(&out, &p).into_iter()) / (e2.powf(1.5) * cmax));
    }
    for (name, v) in [
        ("vector/transverse", s.vector_transverse),
        ("general/traceless", s.general_trace),
        ("general/p.B.p", s.general_sandwich),
        ("conserved/traceless", s.conserved_trace),
        ("conserved/transverse", s.conserved_transverse),
    ] {
        report.push(Check::at_most(format!("projector/{name}"), v, tol, Provenance::Identity));
    }
    dir.json("projectors.json", &s)?;
    Ok(())
}
