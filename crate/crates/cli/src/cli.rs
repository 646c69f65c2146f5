//! Argument parsing and artifact emission.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::commands;
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "carnap", version, about = "Carnap updating, preference audits and decision-weight tools")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Self::Json => "json",
            Self::Csv => "csv",
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance override (violation and tie thresholds).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write artifacts into this directory instead of printing to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Horizon override for models and probes.
    #[arg(long, global = true)]
    pub horizon: Option<usize>,
    /// Format printed to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Posterior of a Carnap model given evidence.
    Update {
        /// `{"prior", "lambda", "horizon"}`, optionally with `diseases`.
        #[arg(long)]
        model: PathBuf,
        /// Label array or `{"observations": [...]}`.
        #[arg(long)]
        evidence: PathBuf,
    },
    /// Audit positive relatedness, exchangeability, disjoint causality and
    /// utility stability on seeded random probes.
    Axioms {
        #[arg(long)]
        agent: PathBuf,
        /// Probes per axiom.
        #[arg(long, default_value_t = 20)]
        probes: usize,
    },
    /// Recover λ and the prior from an agent's conditional preferences.
    Identify {
        #[arg(long)]
        agent: PathBuf,
        /// Standard-sequence length used to elicit utility.
        #[arg(long, default_value_t = 16)]
        steps: usize,
    },
    /// Elicit a standard sequence and the utility it implies.
    Elicit {
        #[arg(long)]
        agent: PathBuf,
        /// Event labels, comma separated (default: first disease).
        #[arg(long, value_delimiter = ',')]
        event: Vec<String>,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// `g,G`; omitted means G is chosen so the sequence spans the interval.
        #[arg(long, value_delimiter = ',')]
        gauges: Option<Vec<f64>>,
        /// α₀ (default: bottom of the interval).
        #[arg(long)]
        start: Option<f64>,
        #[arg(long)]
        evidence: Option<PathBuf>,
    },
    /// Tradeoff-consistency audit of records or of an agent's probe battery.
    Consistency {
        #[arg(long)]
        agent: Option<PathBuf>,
        #[arg(long)]
        records: Option<PathBuf>,
        /// Probe grid levels.
        #[arg(long, default_value_t = 8)]
        levels: usize,
    },
    /// Measure decision weights from certainty equivalents and/or fit a
    /// weighting function to known-probability samples.
    Weights {
        /// Certainty-equivalent records on events.
        #[arg(long)]
        ce: Option<PathBuf>,
        /// `(p, W)` pairs on known-probability events.
        #[arg(long)]
        samples: Option<PathBuf>,
        #[arg(long, value_parser = ["linear", "tk", "prelec"], default_value = "tk")]
        family: String,
    },
    /// Correct a decision-weight table for a weighting function.
    Debias {
        /// Decision-weight table with optional pairs and chains.
        #[arg(long)]
        table: PathBuf,
        /// `linear`, `tk:<γ>` or `prelec:<α>,<β>`.
        #[arg(long, conflicts_with = "fit")]
        weighting: Option<String>,
        /// Output of `weights` holding a fitted function.
        #[arg(long)]
        fit: Option<PathBuf>,
    },
    /// Iterated Dempster combination next to Carnap updating over seeded runs.
    Simulate {
        /// Distribution of the observed disease, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [0.4, 0.3, 0.3])]
        q: Vec<f64>,
        /// Mass each observation puts on its disease.
        #[arg(long, default_value_t = 0.7)]
        mu: f64,
        /// Observations per run.
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Number of runs; run k uses seed + k.
        #[arg(long, default_value_t = 100)]
        runs: usize,
        /// Carnap strength (uniform prior).
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Weighting function for the corrected-judgment trajectory.
        #[arg(long, default_value = "tk:0.61")]
        weighting: String,
    },
}

/// A command's results before emission.
pub struct Output {
    pub name: &'static str,
    /// File stem of the main artifacts (defaults to the command name).
    pub stem: &'static str,
    /// Resolved parameters beyond the common flags.
    pub params: Value,
    /// Main result; the config is added as a `config` key.
    pub json: Map<String, Value>,
    pub csv: Option<String>,
    /// Extra files written only with `--out`.
    pub files: Vec<(String, String)>,
}

impl Output {
    pub fn new(name: &'static str, params: Value, json: Value) -> Self {
        let json = match json {
            Value::Object(m) => m,
            other => Map::from_iter([("result".to_string(), other)]),
        };
        Self { name, stem: name, params, json, csv: None, files: Vec::new() }
    }
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

pub fn config(common: &Common, output: &Output) -> Value {
    json!({
        "command": output.name,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": common.seed,
        "tol": common.tol,
        "horizon": common.horizon,
        "format": common.format.as_str(),
        "out": common.out.as_deref().map(path_str),
        "params": output.params,
    })
}

/// Runs a command; returns what should go to stdout.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let output = commands::dispatch(&cli.command, &cli.common)?;
    emit(&cli.common, output)
}

fn emit(common: &Common, output: Output) -> Result<String, CliError> {
    let cfg = config(common, &output);
    let mut doc = output.json.clone();
    doc.insert("config".into(), cfg.clone());
    let json_text = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values serialize") + "\n";
    match &common.out {
        None => match common.format {
            Format::Json => Ok(json_text),
            Format::Csv => output
                .csv
                .clone()
                .ok_or_else(|| CliError::schema(format!("`{}` has no CSV form", output.name))),
        },
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            let mut files = vec![(format!("{}.json", output.stem), json_text)];
            if let Some(csv) = &output.csv {
                files.push((format!("{}.csv", output.stem), csv.clone()));
            }
            files.extend(output.files);
            // CSV and SVG artifacts carry the config through this sidecar
            files.push(("config.json".into(), serde_json::to_string_pretty(&cfg).expect("JSON values serialize") + "\n"));
            for (name, text) in &files {
                let path = dir.join(name);
                std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
            }
            Ok(String::new())
        }
    }
}
