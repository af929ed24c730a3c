use std::f64::consts::PI;

use qfnoise_core::correlators::{exact_correlator, wick_npoint, LadderInsertion, Vertex};
use qfnoise_core::fock::{build_fock_space, Channel, FockSpace, ModeGrid, Species};
use qfnoise_core::spacetime::CtpTime;
use qfnoise_core::C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{truncation_rows, Context, TRUNCATION_HEADER};
use crate::artifacts::ArtifactDir;
use crate::error::CliError;
use crate::report::{Check, Provenance, Relation, RunReport};

/// One zero-momentum mode per channel; the mass sets its energy.
fn space(species: Species, energies: &[f64], cap: u8) -> Result<FockSpace, CliError> {
    let channels = match species {
        Species::Boson => [Channel::Scalar, Channel::PhotonH, Channel::PhotonV],
        Species::Fermion => [Channel::DiracL, Channel::DiracR, Channel::AntiDiracL],
    };
    let grids = channels
        .iter()
        .zip(energies)
        .map(|(&c, &e)| Ok((c, ModeGrid::new([2.0 * PI; 3], [(0, 0); 3], species, e)?.with_zero_mode(true))))
        .collect::<Result<Vec<_>, CliError>>()?;
    let (cap, total) = match species {
        Species::Boson => (cap, cap as u32),
        Species::Fermion => (1, energies.len() as u32),
    };
    Ok(build_fock_space(&grids, cap, total)?)
}

fn vertices(rng: &mut ChaCha8Rng, species: Species, energies: &[f64], n: usize, bilinear: bool) -> Vec<Vertex> {
    (0..n)
        .map(|_| {
            let k = if bilinear { 2 } else { 1 };
            let mut factors: Vec<LadderInsertion> = (0..k)
                .map(|_| {
                    let m = rng.gen_range(0..energies.len());
                    LadderInsertion { mode: m, species, energy: energies[m], dagger: rng.gen_bool(0.5) }
                })
                .collect();
            if bilinear {
                // Normal order; a repeated fermionic operator would vanish.
                factors.sort_by_key(|f| !f.dagger);
                if species == Species::Fermion && factors[0].mode == factors[1].mode && factors[0].dagger == factors[1].dagger {
                    factors.pop();
                }
            }
            let time = CtpTime { branch: 0, t: C64::new(rng.gen_range(-2.0..2.0), 0.0), s: rng.gen_range(0.0..1.0) };
            Vertex { factors, time }
        })
        .collect()
}

struct Case {
    species: Species,
    beta: Option<f64>,
    points: usize,
    bilinear: bool,
    seed: u64,
}

fn label(c: &Case) -> String {
    let sp = if c.species == Species::Boson { "boson" } else { "fermion" };
    let beta = c.beta.map_or_else(|| "inf".to_string(), |b| b.to_string());
    let kind = if c.bilinear { "bilinear" } else { "field" };
    format!("{sp}/beta={beta}/{kind}-{}pt", c.points)
}

pub fn run(ctx: &Context, dir: &mut ArtifactDir) -> Result<RunReport, CliError> {
    let c = &ctx.cfg.wick;
    let tol = ctx.cfg.tolerances.wick;
    let mut report = RunReport::new("wick-check", ctx.cfg.seed);
    let mut rng = ctx.rng("wick-check");
    let betas: Vec<Option<f64>> = c.betas.iter().map(|&b| Some(b)).chain(c.zero_temperature.then_some(None)).collect();
    let mut cases = Vec::new();
    for species in [Species::Boson, Species::Fermion] {
        for &beta in &betas {
            for (points, bilinear) in [(2, false), (4, false), (2, true), (3, true)] {
                cases.push(Case { species, beta, points, bilinear, seed: rng.gen() });
            }
        }
    }
    let spaces = [space(Species::Boson, &c.energies, c.boson_cap)?, space(Species::Fermion, &c.energies, 1)?];
    let results = cases
        .par_iter()
        .map(|case| {
            let s = &spaces[(case.species == Species::Fermion) as usize];
            let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(case.seed);
            let mut worst = 0.0f64;
            let mut nontrivial = 0usize;
            let mut rows = Vec::new();
            for trial in 0..c.trials {
                let vs = vertices(&mut rng, case.species, &c.energies, case.points, case.bilinear);
                let want = exact_correlator(s, &vs, case.beta)?;
                let got = wick_npoint(&vs, case.beta);
                worst = worst.max((got - want).norm() / want.norm().max(1.0));
                nontrivial += (want.norm() > 1e-6) as usize;
                rows.push(vec![label(case), trial.to_string(), got.re.to_string(), got.im.to_string(), want.re.to_string(), want.im.to_string()]);
            }
            Ok((worst, nontrivial, rows))
        })
        .collect::<Result<Vec<_>, qfnoise_core::Error>>()?;

    let mut all_rows = Vec::new();
    // Guard against comparing zeros only: every (species, β) needs some nonzero values.
    let mut nonzero: Vec<(String, usize)> = Vec::new();
    for (case, (worst, nontrivial, rows)) in cases.iter().zip(results) {
        report.push(Check::at_most(format!("{}/max-error", label(case)), worst, tol, Provenance::Oracle));
        let group = label(case).rsplitn(2, '/').nth(1).unwrap_or_default().to_string();
        match nonzero.iter_mut().find(|(g, _)| *g == group) {
            Some((_, k)) => *k += nontrivial,
            None => nonzero.push((group, nontrivial)),
        }
        all_rows.extend(rows);
    }
    for (group, k) in nonzero {
        report.push(Check::new(format!("{group}/nontrivial"), k as f64, 1.0, Relation::AtLeast, 0.0, Provenance::Bound));
    }
    dir.csv("truncation.csv", &TRUNCATION_HEADER, truncation_rows(&spaces[0], c.boson_cap, &c.betas))?;
    dir.csv("wick.csv", &["case", "trial", "engine_re", "engine_im", "oracle_re", "oracle_im"], all_rows)?;
    Ok(report)
}
