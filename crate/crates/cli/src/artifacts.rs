use std::path::{Path, PathBuf};

use qfnoise_core::spectral::SpectralSample;

use crate::error::CliError;

pub const SPECTRAL_HEADER: [&str; 10] = ["p0", "p1", "p2", "p3", "ReG", "ImG", "beta", "X", "Y", "norm_tag"];

/// Output directory of one subcommand; records what it writes.
pub struct ArtifactDir {
    root: PathBuf,
    sub: String,
    pub written: Vec<String>,
}

impl ArtifactDir {
    pub fn new(root: &Path, sub: &str) -> Result<Self, CliError> {
        std::fs::create_dir_all(root.join(sub))?;
        Ok(ArtifactDir { root: root.to_path_buf(), sub: sub.into(), written: Vec::new() })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.written.push(format!("{}/{name}", self.sub));
        self.root.join(&self.sub).join(name)
    }

    pub fn csv<I, R>(&mut self, name: &str, header: &[&str], rows: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = String>,
    {
        let mut w = csv::Writer::from_path(self.path(name))?;
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn json<T: serde::Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(value)? + "\n";
        std::fs::write(self.path(name), text)?;
        Ok(())
    }

    pub fn spectral(&mut self, name: &str, samples: &[SpectralSample]) -> Result<(), CliError> {
        self.csv(name, &SPECTRAL_HEADER, samples.iter().map(spectral_row))
    }
}

pub fn spectral_row(s: &SpectralSample) -> Vec<String> {
    let mut row: Vec<String> = (0..4).map(|i| s.p[i].to_string()).collect();
    row.push(s.g.re.to_string());
    row.push(s.g.im.to_string());
    row.push(s.beta.map_or_else(|| "inf".to_string(), |b| b.to_string()));
    row.push(s.x.clone());
    row.push(s.y.clone());
    row.push(s.norm_tag.clone());
    row
}

/// Compact momentum label for check names.
pub fn p_label(p: &qfnoise_core::spacetime::FourVector) -> String {
    format!("({},{},{},{})", p[0], p[1], p[2], p[3])
}
