//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs every subcommand with the shipped config (timing each), then the full
//! suite a second time into a fresh directory and compares the bytes.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{Duration, Instant};

use qfnoise_cli::{run_suite, Check, ExperimentConfig, RunReport, COMMANDS};

struct Criterion {
    id: u8,
    title: &'static str,
    limit: Duration,
    /// Commands whose runtime counts against the limit.
    commands: &'static [&'static str],
    select: fn(&str, &Check) -> bool,
}

fn prefix(c: &Check, p: &str) -> bool {
    c.name.starts_with(p)
}

const CRITERIA: [Criterion; 9] = [
    Criterion { id: 1, title: "eigenstate moments", limit: Duration::from_secs(30), commands: &["sagnac"], select: |cmd, c| cmd == "sagnac" && prefix(c, "eigenstate/") },
    Criterion {
        id: 2,
        title: "signal values and variant table",
        limit: Duration::from_secs(30),
        commands: &["sagnac"],
        select: |cmd, c| cmd == "sagnac" && (prefix(c, "signal/") || prefix(c, "variant/")),
    },
    Criterion {
        id: 3,
        title: "noiseless vacuum and thermal suppression",
        limit: Duration::from_secs(120),
        commands: &["noiseless", "suppression"],
        select: |cmd, c| (cmd == "noiseless" && prefix(c, "variance/")) || cmd == "suppression",
    },
    Criterion { id: 4, title: "fluctuation-dissipation", limit: Duration::from_secs(60), commands: &["fdt"], select: |cmd, _| cmd == "fdt" },
    Criterion {
        id: 5,
        title: "tensor zeros, model fits, projectors",
        limit: Duration::from_secs(60),
        commands: &["noiseless"],
        select: |cmd, c| cmd == "noiseless" && !prefix(c, "variance/"),
    },
    Criterion { id: 6, title: "noise scaling exponents", limit: Duration::from_secs(60), commands: &["scaling"], select: |cmd, _| cmd == "scaling" },
    Criterion { id: 7, title: "three-point prefactors", limit: Duration::from_secs(1), commands: &["threepoint"], select: |cmd, _| cmd == "threepoint" },
    Criterion { id: 8, title: "Wick engine vs exact traces", limit: Duration::from_secs(120), commands: &["wick-check"], select: |cmd, _| cmd == "wick-check" },
    Criterion { id: 9, title: "homodyne readout and dark counts", limit: Duration::from_secs(30), commands: &["homodyne"], select: |cmd, _| cmd == "homodyne" },
];

fn shipped() -> ExperimentConfig {
    ExperimentConfig::from_toml(include_str!("../config/default.toml")).expect("shipped config parses")
}

fn files(root: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    out
}

#[test]
fn acceptance() {
    let cfg = shipped();
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();

    let mut reports: Vec<RunReport> = Vec::new();
    let mut times: BTreeMap<&str, Duration> = BTreeMap::new();
    for name in COMMANDS {
        let start = Instant::now();
        reports.extend(run_suite(&cfg, first.path(), &[name]).expect("command runs"));
        times.insert(name, start.elapsed());
    }
    run_suite(&cfg, second.path(), &COMMANDS).expect("second run");

    let mut all_ok = true;
    for cr in &CRITERIA {
        let checks: Vec<&Check> = reports.iter().flat_map(|r| r.checks.iter().filter(move |c| (cr.select)(&r.command, c))).collect();
        let failed: Vec<&&Check> = checks.iter().filter(|c| !c.pass).collect();
        let runtime: Duration = cr.commands.iter().map(|c| times[c]).sum();
        let ok = !checks.is_empty() && failed.is_empty() && runtime <= cr.limit;
        all_ok &= ok;
        println!(
            "{} criterion {:>2}: {} ({} checks, {} failed, {:.2}s of {}s)",
            if ok { "PASS" } else { "FAIL" },
            cr.id,
            cr.title,
            checks.len(),
            failed.len(),
            runtime.as_secs_f64(),
            cr.limit.as_secs()
        );
        for c in failed.iter().take(5) {
            println!("      {}: computed {} expected {} tol {}", c.name, c.computed, c.expected, c.tolerance);
        }
    }

    let (a, b) = (files(first.path()), files(second.path()));
    let differing: Vec<&String> = a.keys().chain(b.keys()).filter(|k| a.get(*k) != b.get(*k)).collect();
    let ok = !a.is_empty() && differing.is_empty();
    all_ok &= ok;
    println!("{} criterion 10: byte-identical artifacts ({} files, {} differ)", if ok { "PASS" } else { "FAIL" }, a.len(), differing.len());

    assert!(all_ok, "acceptance criteria failed");
}
