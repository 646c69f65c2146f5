//! JSON file formats and their conversion into library types.

use std::path::Path;

use carnap_core::agents::{Agent, CarnapAgent, ChoquetAgent, MixtureAgent, SeuAgent, UrnAgent};
use carnap_core::nonadditive::{CapacityTable, CeRecord, WeightingFamily};
use carnap_core::tradeoff::TradeoffRecord;
use carnap_core::{Act, CarnapModel, DiseaseSpace, Event, Evidence, OutcomeInterval, UtilityCurve};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Reads and parses a JSON file; parse failures are schema errors.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::schema(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::schema(format!("{}: {e}", path.display())))
}

/// `{"lo": .., "hi": ..}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct IntervalFile {
    pub lo: f64,
    pub hi: f64,
}

impl IntervalFile {
    pub fn resolve(self) -> Result<OutcomeInterval, CliError> {
        Ok(OutcomeInterval::new(self.lo, self.hi)?)
    }
}

fn space(labels: &Option<Vec<String>>, s: usize) -> Result<DiseaseSpace, CliError> {
    match labels {
        Some(l) if l.len() != s => Err(CliError::schema(format!("{} disease labels for {s} entries", l.len()))),
        Some(l) => Ok(DiseaseSpace::new(l.iter().cloned())?),
        None => Ok(DiseaseSpace::numbered(s)?),
    }
}

/// `{"prior": [..], "lambda": x, "horizon": T}` with optional labels.
///
/// Unknown keys are ignored, so a posterior file doubles as a model.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diseases: Option<Vec<String>>,
    pub prior: Vec<f64>,
    pub lambda: f64,
    pub horizon: usize,
}

impl ModelFile {
    pub fn resolve(&self, horizon: Option<usize>) -> Result<(DiseaseSpace, CarnapModel), CliError> {
        let space = space(&self.diseases, self.prior.len())?;
        let model = CarnapModel::new(self.prior.clone(), self.lambda, horizon.unwrap_or(self.horizon))?;
        Ok((space, model))
    }
}

/// Either a bare label array or `{"observations": [..]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum EvidenceFile {
    Labels(Vec<String>),
    Object { observations: Vec<String> },
}

impl EvidenceFile {
    pub fn labels(&self) -> &[String] {
        match self {
            Self::Labels(l) | Self::Object { observations: l } => l,
        }
    }

    pub fn resolve(&self, space: &DiseaseSpace) -> Result<Evidence, CliError> {
        Ok(space.evidence(self.labels())?)
    }
}

/// A named closed form or a list of `[outcome, utility]` knots.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum UtilityFile {
    Named(String),
    Grid(Vec<(f64, f64)>),
}

impl Default for UtilityFile {
    fn default() -> Self {
        Self::Named("linear".into())
    }
}

impl UtilityFile {
    pub fn resolve(&self) -> Result<UtilityCurve, CliError> {
        Ok(match self {
            Self::Named(n) => UtilityCurve::named(n)?,
            Self::Grid(k) => UtilityCurve::from_grid(k)?,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CapacityEntry {
    pub event: Vec<String>,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ComponentFile {
    pub prior: Vec<f64>,
    pub lambda: f64,
    pub horizon: usize,
}

/// Agent kinds and their parameters.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AgentKind {
    Seu { probabilities: Vec<f64> },
    Carnap { prior: Vec<f64>, lambda: f64, horizon: usize },
    Urn { tickets: Vec<u32> },
    Mixture { components: [ComponentFile; 2], weights: [f64; 2] },
    Choquet { capacity: Vec<CapacityEntry> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AgentFile {
    #[serde(flatten)]
    pub kind: AgentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diseases: Option<Vec<String>>,
    #[serde(default = "default_interval")]
    pub interval: IntervalFile,
    #[serde(default)]
    pub utility: UtilityFile,
}

fn default_interval() -> IntervalFile {
    IntervalFile { lo: 0.0, hi: 100.0 }
}

impl AgentFile {
    fn size(&self) -> Result<usize, CliError> {
        Ok(match &self.kind {
            AgentKind::Seu { probabilities } => probabilities.len(),
            AgentKind::Carnap { prior, .. } => prior.len(),
            AgentKind::Urn { tickets } => tickets.len(),
            AgentKind::Mixture { components, .. } => components[0].prior.len(),
            AgentKind::Choquet { .. } => match &self.diseases {
                Some(d) => d.len(),
                None => return Err(CliError::schema("a choquet agent needs explicit `diseases`")),
            },
        })
    }

    /// Builds the agent; `horizon` overrides any model horizon.
    pub fn resolve(&self, horizon: Option<usize>) -> Result<(DiseaseSpace, Box<dyn Agent + Sync>), CliError> {
        let space = space(&self.diseases, self.size()?)?;
        let iv = self.interval.resolve()?;
        let u = self.utility.resolve()?;
        let agent: Box<dyn Agent + Sync> = match &self.kind {
            AgentKind::Seu { probabilities } => Box::new(SeuAgent::new(probabilities.clone(), u, iv)?),
            AgentKind::Carnap { prior, lambda, horizon: t } => {
                Box::new(CarnapAgent::new(CarnapModel::new(prior.clone(), *lambda, horizon.unwrap_or(*t))?, u, iv))
            }
            AgentKind::Urn { tickets } => Box::new(UrnAgent::new(tickets.clone(), u, iv)?),
            AgentKind::Mixture { components, weights } => {
                let m = |c: &ComponentFile| CarnapModel::new(c.prior.clone(), c.lambda, horizon.unwrap_or(c.horizon));
                Box::new(MixtureAgent::new([m(&components[0])?, m(&components[1])?], *weights, u, iv)?)
            }
            AgentKind::Choquet { capacity } => {
                Box::new(ChoquetAgent::new(capacity_table(&space, capacity)?, u, iv)?)
            }
        };
        Ok((space, agent))
    }
}

pub fn capacity_table(space: &DiseaseSpace, entries: &[CapacityEntry]) -> Result<CapacityTable, CliError> {
    let mut table = CapacityTable::new(space.len());
    for e in entries {
        let event = space.event(&e.event)?;
        if table.insert(event, e.value).is_some() {
            return Err(CliError::schema(format!("capacity lists {:?} twice", e.event)));
        }
    }
    Ok(table)
}

pub fn event_labels(space: &DiseaseSpace, event: &Event) -> Vec<String> {
    event.members().iter().map(|&d| space.label(d).to_string()).collect()
}

/// One tradeoff record: `α_A f ∼ β_A g` and `γ_A f ∼ δ_A g`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RecordFile {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub event: Vec<String>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    #[serde(default)]
    pub evidence: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RecordsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diseases: Option<Vec<String>>,
    #[serde(default = "default_interval")]
    pub interval: IntervalFile,
    pub records: Vec<RecordFile>,
}

impl RecordsFile {
    pub fn from_records(space: &DiseaseSpace, interval: OutcomeInterval, records: &[TradeoffRecord]) -> Self {
        Self {
            diseases: Some(space.labels().to_vec()),
            interval: IntervalFile { lo: interval.lo(), hi: interval.hi() },
            records: records
                .iter()
                .map(|r| RecordFile {
                    alpha: r.alpha,
                    beta: r.beta,
                    gamma: r.gamma,
                    delta: r.delta,
                    event: event_labels(space, &r.event),
                    f: r.f.outcomes().to_vec(),
                    g: r.g.outcomes().to_vec(),
                    evidence: r.evidence.observations().iter().map(|&d| space.label(d).to_string()).collect(),
                })
                .collect(),
        }
    }

    pub fn resolve(&self) -> Result<(DiseaseSpace, Vec<TradeoffRecord>), CliError> {
        let s = match (&self.diseases, self.records.first()) {
            (Some(d), _) => d.len(),
            (None, Some(r)) => r.f.len(),
            (None, None) => 2,
        };
        let space = space(&self.diseases, s)?;
        let iv = self.interval.resolve()?;
        let records = self
            .records
            .iter()
            .map(|r| {
                Ok(TradeoffRecord {
                    alpha: r.alpha,
                    beta: r.beta,
                    gamma: r.gamma,
                    delta: r.delta,
                    event: space.event(&r.event)?,
                    f: Act::new(iv, r.f.clone())?,
                    g: Act::new(iv, r.g.clone())?,
                    evidence: space.evidence(&r.evidence)?,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok((space, records))
    }
}

/// `(A:stake) ∼ ce` observations for measuring decision weights.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CeFile {
    pub diseases: Vec<String>,
    #[serde(default)]
    pub utility: UtilityFile,
    pub records: Vec<CeEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CeEntry {
    pub event: Vec<String>,
    #[serde(default = "unit_stake")]
    pub stake: f64,
    pub ce: f64,
}

fn unit_stake() -> f64 {
    1.0
}

impl CeFile {
    pub fn resolve(&self) -> Result<(DiseaseSpace, Vec<CeRecord>, UtilityCurve), CliError> {
        let space = DiseaseSpace::new(self.diseases.iter().cloned())?;
        let records = self
            .records
            .iter()
            .map(|r| Ok(CeRecord { event: space.event(&r.event)?, stake: r.stake, ce: r.ce }))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok((space, records, self.utility.resolve()?))
    }
}

/// `[[p, W], ..]` or `{"samples": [[p, W], ..]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum SamplesFile {
    Bare(Vec<(f64, f64)>),
    Object { samples: Vec<(f64, f64)> },
}

impl SamplesFile {
    pub fn samples(&self) -> &[(f64, f64)] {
        match self {
            Self::Bare(s) | Self::Object { samples: s } => s,
        }
    }
}

/// A set-function table with optional pairs and refinement chains to audit.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TableFile {
    pub diseases: Vec<String>,
    pub entries: Vec<CapacityEntry>,
    #[serde(default)]
    pub pairs: Vec<(Vec<String>, Vec<String>)>,
    #[serde(default)]
    pub chains: Vec<Vec<Vec<Vec<String>>>>,
}

pub type Chain = Vec<Vec<Event>>;

impl TableFile {
    pub fn resolve(&self) -> Result<(DiseaseSpace, CapacityTable, Vec<(Event, Event)>, Vec<Chain>), CliError> {
        let space = DiseaseSpace::new(self.diseases.iter().cloned())?;
        let table = capacity_table(&space, &self.entries)?;
        let pairs = self
            .pairs
            .iter()
            .map(|(a, b)| Ok((space.event(a)?, space.event(b)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        let chains = self
            .chains
            .iter()
            .map(|chain| {
                chain
                    .iter()
                    .map(|level| level.iter().map(|cell| Ok(space.event(cell)?)).collect::<Result<Vec<_>, CliError>>())
                    .collect::<Result<Vec<_>, CliError>>()
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok((space, table, pairs, chains))
    }
}

/// `linear`, `tk:<γ>` or `prelec:<α>,<β>`.
pub fn parse_weighting(spec: &str) -> Result<WeightingFamily, CliError> {
    let bad = || CliError::schema(format!("bad weighting function `{spec}`"));
    let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
    let nums = params
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<Vec<_>, _>>()?;
    let w = match (name.trim(), nums.as_slice()) {
        ("linear", []) => WeightingFamily::Linear,
        ("tk", [gamma]) => WeightingFamily::Tk { gamma: *gamma },
        ("prelec", [alpha, beta]) => WeightingFamily::Prelec { alpha: *alpha, beta: *beta },
        _ => return Err(bad()),
    };
    if !w.is_admissible() {
        return Err(CliError::domain(format!("weighting function `{spec}` is not admissible")));
    }
    Ok(w)
}

pub fn weighting_json(w: &WeightingFamily) -> serde_json::Value {
    match *w {
        WeightingFamily::Linear => serde_json::json!({ "family": "linear" }),
        WeightingFamily::Tk { gamma } => serde_json::json!({ "family": "tk", "gamma": gamma }),
        WeightingFamily::Prelec { alpha, beta } => serde_json::json!({ "family": "prelec", "alpha": alpha, "beta": beta }),
    }
}

pub fn weighting_spec(w: &WeightingFamily) -> String {
    match *w {
        WeightingFamily::Linear => "linear".into(),
        WeightingFamily::Tk { gamma } => format!("tk:{gamma}"),
        WeightingFamily::Prelec { alpha, beta } => format!("prelec:{alpha},{beta}"),
    }
}
