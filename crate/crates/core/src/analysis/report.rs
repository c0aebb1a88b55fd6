//! Rendering of run results into the files the CLI writes. Everything is
//! computed in memory first, so a failed run leaves no partial output.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{
    chsh_report, run_blindness, run_correctness, run_hw_check, BlindnessReport, ConfusionMatrix, CorrectnessReport,
    Distribution, ExperimentConfig,
};
use crate::exec::Execution;
use crate::security::{security_report, SecurityReport};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Correctness,
    Blindness,
    Security,
    HwCheck,
    Chsh,
}

impl Subcommand {
    pub const ALL: [Subcommand; 5] = [
        Subcommand::Correctness,
        Subcommand::Blindness,
        Subcommand::Security,
        Subcommand::HwCheck,
        Subcommand::Chsh,
    ];
}

impl fmt::Display for Subcommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Subcommand::Correctness => "correctness",
            Subcommand::Blindness => "blindness",
            Subcommand::Security => "security",
            Subcommand::HwCheck => "hw-check",
            Subcommand::Chsh => "chsh",
        })
    }
}

impl FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Subcommand::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| Error::Config(format!("unknown subcommand {s:?}")))
    }
}

/// Named output files and a one-line summary for the terminal.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub files: Vec<(String, String)>,
    pub summary: String,
    /// Whether the run's own checks passed (always true for pure reports).
    pub pass: bool,
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn probs(d: Option<&Distribution>) -> Vec<String> {
    match d {
        Some(d) => d.probs.iter().map(|p| p.to_string()).collect(),
        None => vec![String::new(); 4],
    }
}

pub fn correctness_csv(report: &CorrectnessReport) -> Result<String> {
    let header = [
        "algorithm",
        "phi1",
        "phi2",
        "x1",
        "x2",
        "ideal_00",
        "ideal_01",
        "ideal_10",
        "ideal_11",
        "noisy_00",
        "noisy_01",
        "noisy_10",
        "noisy_11",
        "sampled_00",
        "sampled_01",
        "sampled_10",
        "sampled_11",
        "ideal_vs_uniform",
        "noisy_vs_uniform",
        "sampled_vs_uniform",
        "noisy_vs_ideal",
        "sampled_vs_noisy",
    ];
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            let a = &r.algorithm;
            let mut row = vec![
                r.label.clone(),
                a.phi[0].k().to_string(),
                a.phi[1].k().to_string(),
                u8::from(a.x[0]).to_string(),
                u8::from(a.x[1]).to_string(),
            ];
            row.extend(probs(Some(&r.ideal)));
            row.extend(probs(r.noisy.as_ref()));
            row.extend(probs(r.sampled.as_ref()));
            row.extend([
                r.ideal_distance_from_uniform.to_string(),
                opt(r.noisy_distance_from_uniform),
                opt(r.sampled_distance_from_uniform),
                opt(r.noisy_vs_ideal),
                opt(r.sampled_vs_noisy),
            ]);
            row
        })
        .collect();
    csv_string(&header, &rows)
}

pub fn confusion_csv(m: &ConfusionMatrix) -> Result<String> {
    let mut header = vec![""];
    header.extend(m.labels.iter().map(String::as_str));
    let rows: Vec<Vec<String>> = m
        .labels
        .iter()
        .zip(&m.cells)
        .map(|(l, row)| {
            std::iter::once(l.clone())
                .chain(row.iter().map(|d| d.to_string()))
                .collect()
        })
        .collect();
    csv_string(&header, &rows)
}

pub fn blindness_csv(report: &BlindnessReport) -> Result<String> {
    let rows: Vec<Vec<String>> = report
        .entries
        .iter()
        .map(|e| {
            let grid = serde_json::to_value(e.result.grid).map_err(|e| Error::Io(e.to_string()))?;
            Ok(vec![
                grid.as_str().unwrap_or_default().to_string(),
                report.mode.to_string(),
                e.result.fidelity_with_mixed.to_string(),
                e.result.entropy.to_string(),
                e.result.trace_distance_to_mixed.to_string(),
                e.reference.fidelity.to_string(),
                e.reference.entropy.to_string(),
            ])
        })
        .collect::<Result<_>>()?;
    csv_string(
        &[
            "grid",
            "mode",
            "fidelity",
            "entropy_bits",
            "trace_distance",
            "reference_fidelity",
            "reference_entropy_bits",
        ],
        &rows,
    )
}

pub fn security_csv(report: &SecurityReport) -> Result<String> {
    let rows: Vec<Vec<String>> = report
        .crsr
        .iter()
        .map(|v| {
            vec![
                v.n_clients.to_string(),
                v.theta.k().to_string(),
                v.probe.to_string(),
                v.assignments.to_string(),
                v.equal.to_string(),
                v.max_distance.to_string(),
            ]
        })
        .collect();
    csv_string(
        &["n_clients", "theta_k", "probe", "assignments", "equal", "max_distance"],
        &rows,
    )
}

#[derive(Serialize)]
struct CorrectnessSummary<'a> {
    mode: String,
    shots: Option<u64>,
    seed: u64,
    algorithms: usize,
    max_ideal_vs_uniform: f64,
    max_noisy_vs_ideal: Option<f64>,
    max_sampled_vs_noisy: Option<f64>,
    confusion_noisy: Option<&'a ConfusionMatrix>,
    confusion_sampled: Option<&'a ConfusionMatrix>,
}

fn max_of(it: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    it.collect::<Option<Vec<f64>>>()
        .map(|v| v.into_iter().fold(0.0, f64::max))
}

/// Runs one subcommand under `config` and renders its outputs.
pub fn run_subcommand(cmd: Subcommand, config: &ExperimentConfig, exec: Execution) -> Result<RunOutput> {
    config.validate()?;
    match cmd {
        Subcommand::Correctness => {
            let r = run_correctness(config, exec)?;
            let summary = CorrectnessSummary {
                mode: r.mode.to_string(),
                shots: r.shots,
                seed: r.seed,
                algorithms: r.rows.len(),
                max_ideal_vs_uniform: r.rows.iter().map(|x| x.ideal_distance_from_uniform).fold(0.0, f64::max),
                max_noisy_vs_ideal: max_of(r.rows.iter().map(|x| x.noisy_vs_ideal)),
                max_sampled_vs_noisy: max_of(r.rows.iter().map(|x| x.sampled_vs_noisy)),
                confusion_noisy: r.confusion_noisy.as_ref(),
                confusion_sampled: r.confusion_sampled.as_ref(),
            };
            let mut files = vec![
                ("correctness.csv".to_string(), correctness_csv(&r)?),
                ("correctness.json".to_string(), json(&summary)?),
            ];
            if let Some(m) = &r.confusion_noisy {
                files.push(("confusion_noisy.csv".into(), confusion_csv(m)?));
            }
            if let Some(m) = &r.confusion_sampled {
                files.push(("confusion_sampled.csv".into(), confusion_csv(m)?));
            }
            Ok(RunOutput {
                files,
                summary: format!("correctness: {} algorithms in {} mode", r.rows.len(), r.mode),
                pass: true,
            })
        }
        Subcommand::Blindness => {
            let r = run_blindness(config, exec)?;
            let summary = r
                .entries
                .iter()
                .map(|e| format!("F={:.6} S={:.6}", e.result.fidelity_with_mixed, e.result.entropy))
                .collect::<Vec<_>>()
                .join(", ");
            Ok(RunOutput {
                files: vec![
                    ("blindness.csv".into(), blindness_csv(&r)?),
                    ("blindness.json".into(), json(&r)?),
                ],
                summary: format!("blindness ({}): {summary}", r.mode),
                pass: true,
            })
        }
        Subcommand::Security => {
            let algs: Vec<_> = config.algorithms().iter().map(|a| (a.phi, a.x)).collect();
            let r = security_report(&algs, exec)?;
            Ok(RunOutput {
                files: vec![
                    ("security.csv".into(), security_csv(&r)?),
                    ("security.json".into(), json(&r)?),
                ],
                summary: format!(
                    "security: {} (max real/ideal distance {})",
                    if r.pass { "pass" } else { "FAIL" },
                    r.crsr_max_distance
                ),
                pass: r.pass,
            })
        }
        Subcommand::HwCheck => {
            let r = run_hw_check(&config.timing, &config.voltages, config.seed)?;
            Ok(RunOutput {
                files: vec![("hw_check.json".into(), json(&r)?)],
                summary: format!(
                    "hw-check: {} (timing slack {:.1} ns)",
                    if r.pass { "pass" } else { "FAIL" },
                    r.timing.slack_ns
                ),
                pass: r.pass,
            })
        }
        Subcommand::Chsh => {
            let r = chsh_report(&config.noise)?;
            Ok(RunOutput {
                files: vec![("chsh.json".into(), json(&r)?)],
                summary: format!("chsh: ideal {:.6}, noise model {:.6}", r.ideal, r.noisy_model),
                pass: true,
            })
        }
    }
}
