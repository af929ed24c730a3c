use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA: &str = "qfnoise.report/1";

/// How a computed value is compared with its expectation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// |computed − expected| ≤ tolerance
    Within,
    /// computed ≤ expected + tolerance
    AtMost,
    /// computed ≥ expected − tolerance
    AtLeast,
}

/// Where the expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Quoted closed-form expression.
    ClosedForm,
    /// Independent exact computation.
    Oracle,
    /// Algebraic identity or exact symmetry.
    Identity,
    /// Inequality or bound.
    Bound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub computed: f64,
    pub expected: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub provenance: Provenance,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, computed: f64, expected: f64, relation: Relation, tolerance: f64, provenance: Provenance) -> Self {
        let pass = match relation {
            Relation::Within => (computed - expected).abs() <= tolerance,
            Relation::AtMost => computed <= expected + tolerance,
            Relation::AtLeast => computed >= expected - tolerance,
        };
        Check { name: name.into(), computed, expected, relation, tolerance, provenance, pass }
    }

    pub fn within(name: impl Into<String>, computed: f64, expected: f64, tolerance: f64, provenance: Provenance) -> Self {
        Self::new(name, computed, expected, Relation::Within, tolerance, provenance)
    }

    /// Relative tolerance turned into an absolute one on |expected|.
    pub fn relative(name: impl Into<String>, computed: f64, expected: f64, rel: f64, provenance: Provenance) -> Self {
        Self::within(name, computed, expected, rel * expected.abs(), provenance)
    }

    pub fn at_most(name: impl Into<String>, computed: f64, bound: f64, provenance: Provenance) -> Self {
        Self::new(name, computed, bound, Relation::AtMost, 0.0, provenance)
    }

    pub fn flag(name: impl Into<String>, ok: bool, provenance: Provenance) -> Self {
        Self::within(name, if ok { 1.0 } else { 0.0 }, 1.0, 0.0, provenance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub command: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    /// Artifact paths relative to the output directory.
    pub artifacts: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str, seed: u64) -> Self {
        RunReport { schema: SCHEMA.into(), command: command.into(), seed, checks: Vec::new(), artifacts: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Keeps checks whose `command/name` contains `filter`.
    pub fn filtered(mut self, filter: &str) -> Self {
        let cmd = self.command.clone();
        self.checks.retain(|c| format!("{cmd}/{}", c.name).contains(filter));
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    Csv,
    #[default]
    Json,
}

pub const CHECK_HEADER: [&str; 8] = ["command", "name", "computed", "expected", "relation", "tolerance", "provenance", "pass"];

fn label<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

pub fn write_reports(reports: &[RunReport], path_stem: &Path, format: Format) -> Result<std::path::PathBuf, CliError> {
    match format {
        Format::Json => {
            let path = path_stem.with_extension("json");
            let doc = serde_json::json!({ "schema": SCHEMA, "reports": reports });
            std::fs::write(&path, serde_json::to_string_pretty(&doc)? + "\n")?;
            Ok(path)
        }
        Format::Csv => {
            let path = path_stem.with_extension("csv");
            let mut w = csv::Writer::from_path(&path)?;
            w.write_record(CHECK_HEADER)?;
            for r in reports {
                for c in &r.checks {
                    w.write_record([
                        r.command.clone(),
                        c.name.clone(),
                        c.computed.to_string(),
                        c.expected.to_string(),
                        label(&c.relation),
                        c.tolerance.to_string(),
                        label(&c.provenance),
                        c.pass.to_string(),
                    ])?;
                }
            }
            w.flush()?;
            Ok(path)
        }
    }
}
