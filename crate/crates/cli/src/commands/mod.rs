//! One module per subcommand. Each returns a [`RunReport`] and writes its
//! artifacts under `<out>/<command>/`.

mod fdt;
mod homodyne;
mod noiseless;
mod sagnac;
mod scaling;
mod suppression;
mod threepoint;
mod wick;

use std::path::Path;

use qfnoise_core::fock::{build_fock_space, Channel, FockSpace, ModeGrid, Species};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::artifacts::ArtifactDir;
use crate::config::{ExperimentConfig, LineConfig};
use crate::error::CliError;
use crate::report::RunReport;

pub const COMMANDS: [&str; 8] = ["fdt", "suppression", "noiseless", "scaling", "sagnac", "homodyne", "wick-check", "threepoint"];

pub struct Context<'a> {
    pub cfg: &'a ExperimentConfig,
    pub out: &'a Path,
}

impl Context<'_> {
    fn dir(&self, command: &str) -> Result<ArtifactDir, CliError> {
        ArtifactDir::new(self.out, command)
    }

    /// Independent stream per subcommand so adding checks to one leaves the others unchanged.
    fn rng(&self, command: &str) -> ChaCha8Rng {
        let salt = command.bytes().fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64));
        ChaCha8Rng::seed_from_u64(self.cfg.seed ^ salt)
    }
}

fn scalar_line(line: &LineConfig) -> Result<FockSpace, CliError> {
    let grid = ModeGrid::line(3, line.length, line.n_max, Species::Boson, line.mass)?;
    Ok(build_fock_space(&[(Channel::Scalar, grid)], line.cap, line.total)?)
}

pub fn run_command(name: &str, ctx: &Context) -> Result<RunReport, CliError> {
    let mut dir = ctx.dir(name)?;
    let mut report = match name {
        "fdt" => fdt::run(ctx, &mut dir),
        "suppression" => suppression::run(ctx, &mut dir),
        "noiseless" => noiseless::run(ctx, &mut dir),
        "scaling" => scaling::run(ctx, &mut dir),
        "sagnac" => sagnac::run(ctx, &mut dir),
        "homodyne" => homodyne::run(ctx, &mut dir),
        "wick-check" => wick::run(ctx, &mut dir),
        "threepoint" => threepoint::run(ctx, &mut dir),
        other => return Err(CliError::Config(format!("unknown command {other}"))),
    }?;
    report.artifacts = dir.written;
    Ok(report)
}

pub const TRUNCATION_HEADER: [&str; 4] = ["beta", "e_min", "cap", "bound"];

/// Occupation-cap error bound e^{−βE_min·cap} for each β.
fn truncation_rows(space: &FockSpace, cap: u8, betas: &[f64]) -> Vec<Vec<String>> {
    let e_min = space.modes().iter().map(|m| m.energy).fold(f64::INFINITY, f64::min);
    betas.iter().map(|&b| vec![b.to_string(), e_min.to_string(), cap.to_string(), (-b * e_min * cap as f64).exp().to_string()]).collect()
}
