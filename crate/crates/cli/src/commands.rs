//! Subcommand bodies. Each returns an [`Output`]; emission lives in `cli`.

use std::path::Path;

use carnap_core::agents::Agent;
use carnap_core::carnap::{
    check_disjoint_causality, check_exchangeability, check_positive_relatedness, check_utility_stability, identify,
    IdentifyOptions,
};
use carnap_core::nonadditive::{
    additivity_report, debias, degeneracy_experiment, fit_w, measure_w, AdditivityReport, CapacityTable,
    DegeneracyConfig, FamilyKind, Trajectory,
};
use carnap_core::tradeoff::{
    certify_records, check_order_axioms, detect_tradeoff_inconsistency, elicit_standard_sequence,
    probability_from_exchange, probe_battery, span_standard_sequence, tradeoff_pairs, utility_from_sequence,
    Direction, OrderReport, PreferenceTable, ProbeGrid, SequenceProbe, TradeoffViolation,
};
use carnap_core::{binary_act, Act, DiseaseSpace, Error, Event, Evidence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cli::{Command, Common, Output};
use crate::error::CliError;
use crate::schema::{
    event_labels, parse_weighting, read_json, weighting_json, weighting_spec, AgentFile, CeFile, EvidenceFile,
    ModelFile, RecordsFile, SamplesFile, TableFile,
};
use crate::svg::{Chart, Series};

/// Default tolerance for tradeoff violations and preference ties.
pub const DEFAULT_TOL: f64 = 1e-6;

pub fn dispatch(command: &Command, common: &Common) -> Result<Output, CliError> {
    match command {
        Command::Update { model, evidence } => update(model, evidence, common),
        Command::Axioms { agent, probes } => axioms(agent, *probes, common),
        Command::Identify { agent, steps } => identify_cmd(agent, *steps, common),
        Command::Elicit { agent, event, steps, gauges, start, evidence } => {
            elicit(agent, event, *steps, gauges.as_deref(), *start, evidence.as_deref(), common)
        }
        Command::Consistency { agent, records, levels } => {
            consistency(agent.as_deref(), records.as_deref(), *levels, common)
        }
        Command::Weights { ce, samples, family } => weights(ce.as_deref(), samples.as_deref(), family),
        Command::Debias { table, weighting, fit } => debias_cmd(table, weighting.as_deref(), fit.as_deref()),
        Command::Simulate { q, mu, steps, runs, lambda, weighting } => {
            simulate(q, *mu, *steps, *runs, *lambda, weighting, common)
        }
    }
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::schema(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn path_json(p: &Path) -> Value {
    Value::String(p.display().to_string())
}

fn update(model_path: &Path, evidence_path: &Path, common: &Common) -> Result<Output, CliError> {
    let file: ModelFile = read_json(model_path)?;
    let (space, model) = file.resolve(common.horizon)?;
    let evidence: EvidenceFile = read_json(evidence_path)?;
    let evidence = evidence.resolve(&space)?;
    let report = model.update(&evidence)?;
    let lambda = model.lambda() + report.total as f64;
    let mut out = Output::new(
        "update",
        json!({ "model": path_json(model_path), "evidence": path_json(evidence_path) }),
        json!({
            "diseases": space.labels(),
            // next-round model: the posterior becomes the prior with λ' = λ + N
            "prior": report.posterior,
            "lambda": lambda,
            "horizon": model.horizon(),
            "posterior": report.posterior,
            "counts": report.counts,
            "total": report.total,
            "prior_weight": report.prior_weight,
            "data_weight": report.data_weight,
            "previous": { "prior": model.prior(), "lambda": model.lambda() },
        }),
    );
    out.stem = "posterior";
    out.csv = Some(csv_text(
        &["disease", "prior", "count", "posterior"],
        (0..space.len()).map(|d| {
            vec![
                space.label(d).to_string(),
                num(model.prior()[d]),
                report.counts[d].to_string(),
                num(report.posterior[d]),
            ]
        }),
    )?);
    Ok(out)
}

#[derive(Default)]
struct Audit {
    probes: usize,
    skipped: usize,
    failures: usize,
    witnesses: Vec<Value>,
    status: Option<(&'static str, String)>,
}

impl Audit {
    const MAX_WITNESSES: usize = 5;

    fn record(&mut self, result: Result<(bool, Value), Error>) {
        match result {
            Ok((pass, detail)) => {
                self.probes += 1;
                if !pass {
                    self.failures += 1;
                    if self.witnesses.len() < Self::MAX_WITNESSES {
                        self.witnesses.push(detail);
                    }
                }
            }
            Err(Error::Inapplicable(why)) => self.status = Some(("inapplicable", why.to_string())),
            Err(e) => {
                self.skipped += 1;
                if self.status.is_none() {
                    self.status = Some(("error", e.to_string()));
                }
            }
        }
    }

    fn to_json(&self) -> Value {
        let (status, note) = match &self.status {
            Some((s, n)) if self.probes == 0 || *s == "inapplicable" => (*s, Some(n.clone())),
            other => (if self.failures > 0 { "fail" } else { "pass" }, other.as_ref().map(|(_, n)| n.clone())),
        };
        json!({
            "status": status,
            "probes": self.probes,
            "failures": self.failures,
            "skipped": self.skipped,
            "witnesses": self.witnesses,
            "note": note,
        })
    }
}

// Random evidence the agent can condition on (an urn cannot yield more
// draws of a disease than it holds tickets); falls back to no evidence.
fn random_evidence(rng: &mut ChaCha8Rng, agent: &dyn Agent, max_len: usize) -> Evidence {
    let s = agent.diseases();
    let iv = agent.interval();
    let probe = Act::constant(iv, s, iv.lo()).expect("interval endpoints are valid outcomes");
    for _ in 0..50 {
        let len = rng.random_range(0..=max_len);
        let obs = (0..len).map(|_| rng.random_range(0..s)).collect();
        let e = Evidence::from_indices(s, obs).expect("indices drawn inside the space");
        if agent.certainty_equivalent(&probe, &e).is_ok() {
            return e;
        }
    }
    Evidence::empty(s)
}

fn distinct(rng: &mut ChaCha8Rng, s: usize, k: usize) -> Vec<usize> {
    let mut picked: Vec<usize> = Vec::with_capacity(k);
    while picked.len() < k {
        let d = rng.random_range(0..s);
        if !picked.contains(&d) {
            picked.push(d);
        }
    }
    picked
}

fn axioms(agent_path: &Path, probes: usize, common: &Common) -> Result<Output, CliError> {
    let file: AgentFile = read_json(agent_path)?;
    let (space, agent) = file.resolve(common.horizon)?;
    let agent = agent.as_ref();
    let s = space.len();
    let iv = agent.interval();
    let stake = iv.hi();
    let horizon = common.horizon.or(agent.horizon()).unwrap_or(10);
    let max_len = horizon.saturating_sub(2);
    let labels = |e: &Evidence| -> Vec<String> { e.observations().iter().map(|&d| space.label(d).to_string()).collect() };
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);

    let (mut related, mut exchange, mut causal, mut stable) =
        (Audit::default(), Audit::default(), Audit::default(), Audit::default());
    for _ in 0..probes {
        let e = random_evidence(&mut rng, agent, max_len);
        let d = rng.random_range(0..s);
        related.record(check_positive_relatedness(agent, &e, d, stake).map(|c| {
            (c.pass, json!({ "evidence": labels(&e), "disease": space.label(d), "before": c.before, "after": c.after }))
        }));

        let ij = distinct(&mut rng, s, 2);
        exchange.record(check_exchangeability(agent, &e, ij[0], ij[1], stake).map(|c| {
            (c.pass, json!({ "evidence": labels(&e), "pair": [space.label(ij[0]), space.label(ij[1])], "y": c.y, "y_prime": c.y_prime }))
        }));

        if s >= 3 {
            let t = distinct(&mut rng, s, 3);
            causal.record(check_disjoint_causality(agent, &e, (t[0], t[1], t[2]), stake).map(|c| {
                let triple = [space.label(t[0]), space.label(t[1]), space.label(t[2])];
                (c.pass, json!({ "evidence": labels(&e), "triple": triple, "x": c.x, "x_prime": c.x_prime }))
            }));
        } else {
            causal.record(check_disjoint_causality(agent, &e, (0, 1, 1), stake).map(|c| (c.pass, Value::Null)));
        }

        let e2 = random_evidence(&mut rng, agent, horizon);
        let event = Event::singleton(s, rng.random_range(0..s))?;
        let probe = SequenceProbe {
            event: event.clone(),
            low_gauge: iv.lo(),
            high_gauge: iv.lo() + 0.05 * (iv.hi() - iv.lo()),
            start: iv.lo(),
            steps: 4,
        };
        // place the first step at 5% of the span when the agent can say where
        let probe = probe.recalibrated(agent, &Evidence::empty(s), probe.high_gauge).unwrap_or(probe);
        stable.record(check_utility_stability(agent, &Evidence::empty(s), &e2, &probe).map(|c| {
            (c.pass, json!({ "event": event_labels(&space, &event), "evidence": labels(&e2), "first": c.first, "second": c.second, "max_diff": c.max_diff }))
        }));
    }
    Ok(Output::new(
        "axioms",
        json!({ "agent": path_json(agent_path), "probes": probes, "probe_horizon": horizon, "stake": stake }),
        json!({
            "diseases": space.labels(),
            "axioms": {
                "positive_relatedness": related.to_json(),
                "exchangeability": exchange.to_json(),
                "disjoint_causality": causal.to_json(),
                "utility_stability": stable.to_json(),
            },
            "untestable": ["supnorm continuity", "sigma-additivity"],
        }),
    ))
}

fn identify_cmd(agent_path: &Path, steps: usize, common: &Common) -> Result<Output, CliError> {
    let file: AgentFile = read_json(agent_path)?;
    let (space, agent) = file.resolve(common.horizon)?;
    let found = identify(agent.as_ref(), &IdentifyOptions { steps, ..Default::default() })?;
    let d = &found.diagnostics;
    Ok(Output::new(
        "identify",
        json!({ "agent": path_json(agent_path), "steps": steps }),
        json!({
            "diseases": space.labels(),
            "lambda": found.lambda,
            "prior": found.prior,
            "diagnostics": {
                "lambda_per_disease": d.lambda_per_disease,
                "after_own_observation": d.after_own_observation,
                "lambda_spread": d.lambda_spread,
                "prior_sum": d.prior_sum,
                "consistent_with_carnap": d.consistent_with_carnap,
                "utility_knots": d.utility_knots,
            },
        }),
    ))
}

fn elicit(
    agent_path: &Path,
    event: &[String],
    steps: usize,
    gauges: Option<&[f64]>,
    start: Option<f64>,
    evidence_path: Option<&Path>,
    common: &Common,
) -> Result<Output, CliError> {
    let file: AgentFile = read_json(agent_path)?;
    let (space, agent) = file.resolve(common.horizon)?;
    let agent = agent.as_ref();
    let iv = agent.interval();
    let event = if event.is_empty() { Event::singleton(space.len(), 0)? } else { space.event(event)? };
    let evidence = match evidence_path {
        Some(p) => read_json::<EvidenceFile>(p)?.resolve(&space)?,
        None => Evidence::empty(space.len()),
    };
    let seq = match gauges {
        None => span_standard_sequence(agent, &event, steps, &evidence)?,
        Some(g) if g.len() != 2 => return Err(CliError::schema("--gauges takes exactly two values `g,G`")),
        Some(g) => elicit_standard_sequence(agent, &event, (g[0], g[1]), start.unwrap_or(iv.lo()), steps, &evidence)?,
    };
    let utility = utility_from_sequence(&seq)?;
    let knots = utility.knots().unwrap_or_default();
    let stake = *seq.points.last().expect("sequences are non-empty");
    let probability = probability_from_exchange(agent, &utility, &event, stake, &evidence).ok();

    let mut out = Output::new(
        "elicit",
        json!({
            "agent": path_json(agent_path),
            "event": event_labels(&space, &event),
            "steps": steps,
            "gauges": gauges,
            "start": start,
            "evidence": evidence_path.map(path_json),
        }),
        json!({
            "event": event_labels(&space, &event),
            "gauges": [seq.gauges.0, seq.gauges.1],
            "points": seq.points,
            "utility": knots,
            "probability": probability,
        }),
    );
    out.csv = Some(csv_text(
        &["k", "alpha", "utility"],
        knots.iter().enumerate().map(|(k, &(x, u))| vec![k.to_string(), num(x), num(u)]),
    )?);
    let chart = Chart {
        title: "Elicited utility".into(),
        x_label: "outcome".into(),
        y_label: "U".into(),
        y_range: Some((0.0, 1.0)),
        series: vec![
            Series { name: "standard sequence".into(), points: knots.clone(), dashed: false, markers: false },
            Series { name: "knots".into(), points: knots, dashed: false, markers: true },
        ],
    };
    out.files.push(("elicit.svg".into(), chart.render()));
    Ok(out)
}

fn violation_json(v: &TradeoffViolation) -> Value {
    json!({
        "code": TradeoffViolation::CODE,
        "first": v.first,
        "second": v.second,
        "alpha": v.alpha,
        "alpha_prime": v.alpha_prime,
        "beta": v.shared.0,
        "gamma": v.shared.1,
        "delta": v.shared.2,
        "direction": match v.direction { Direction::Above => "above", Direction::Below => "below" },
        "severity": v.severity(),
    })
}

fn order_json(report: &OrderReport, names: &[String]) -> Value {
    let mut findings = Vec::new();
    for c in &report.cycles {
        findings.push(json!({ "code": OrderReport::CYCLE, "acts": c.iter().map(|&i| &names[i]).collect::<Vec<_>>() }));
    }
    for &(w, b) in &report.monotonicity {
        findings.push(json!({ "code": OrderReport::MONOTONICITY, "acts": [&names[w], &names[b]] }));
    }
    for &(i, j) in &report.gaps {
        findings.push(json!({ "code": OrderReport::GAP, "acts": [&names[i], &names[j]] }));
    }
    Value::Array(findings)
}

fn order_audit(agent: &dyn Agent, levels: &[f64], tol: f64) -> Result<Value, CliError> {
    let s = agent.diseases();
    let iv = agent.interval();
    let mut acts: Vec<(String, Act)> = Vec::new();
    for &x in levels {
        acts.push((format!("sure {x}"), Act::constant(iv, s, x)?));
        for d in 0..s.min(2) {
            acts.push((format!("d{}:{x}", d + 1), binary_act(iv, &Event::singleton(s, d)?, x)?));
        }
    }
    let table = PreferenceTable::from_agent(agent, acts, &Evidence::empty(s), tol)?;
    let names: Vec<String> = table.acts.iter().map(|(n, _)| n.clone()).collect();
    Ok(order_json(&check_order_axioms(&table), &names))
}

fn consistency(agent_path: Option<&Path>, records_path: Option<&Path>, levels: usize, common: &Common) -> Result<Output, CliError> {
    let tol = common.tol.unwrap_or(DEFAULT_TOL);
    let agent = match agent_path {
        Some(p) => Some(read_json::<AgentFile>(p)?.resolve(common.horizon)?),
        None => None,
    };
    let (space, interval, records, order) = match (records_path, &agent) {
        (Some(p), _) => {
            let file: RecordsFile = read_json(p)?;
            let (space, records) = file.resolve()?;
            if let Some((_, a)) = &agent {
                certify_records(a.as_ref(), &records, tol.max(1e-9))?;
            }
            (space, file.interval.resolve()?, records, None)
        }
        (None, Some((space, a))) => {
            let a = a.as_ref();
            let grid = ProbeGrid { levels, ..Default::default() };
            let evidence = Evidence::empty(space.len());
            let records = probe_battery(a, &grid, &evidence)?;
            let iv = a.interval();
            let order = order_audit(a, &grid.level_values(iv.lo(), iv.hi()), tol)?;
            (space.clone(), iv, records, Some(order))
        }
        (None, None) => return Err(CliError::schema("consistency needs --agent or --records")),
    };
    let pairs = tradeoff_pairs(&records)?;
    let violations = detect_tradeoff_inconsistency(&pairs, tol);
    let mut out = Output::new(
        "consistency",
        json!({
            "agent": agent_path.map(path_json),
            "records": records_path.map(path_json),
            "levels": levels,
            "tol": tol,
        }),
        json!({
            "records": records.len(),
            "violations": violations.iter().map(violation_json).collect::<Vec<_>>(),
            "order": order,
        }),
    );
    out.csv = Some(csv_text(
        &["code", "first", "second", "alpha", "alpha_prime", "beta", "gamma", "delta", "severity"],
        violations.iter().map(|v| {
            vec![
                TradeoffViolation::CODE.to_string(),
                v.first.to_string(),
                v.second.to_string(),
                num(v.alpha),
                num(v.alpha_prime),
                num(v.shared.0),
                num(v.shared.1),
                num(v.shared.2),
                num(v.severity()),
            ]
        }),
    )?);
    if records_path.is_none() {
        let file = RecordsFile::from_records(&space, interval, &records);
        out.files.push(("records.json".into(), serde_json::to_string_pretty(&file).expect("records serialize") + "\n"));
    }
    Ok(out)
}

fn table_json(space: &DiseaseSpace, table: &CapacityTable) -> Value {
    Value::Array(
        table.iter().map(|(e, v)| json!({ "event": event_labels(space, e), "value": v })).collect(),
    )
}

fn additivity_json(space: &DiseaseSpace, report: &AdditivityReport) -> Value {
    json!({
        "pairs": report.pairs.iter().map(|p| json!({
            "a": event_labels(space, &p.a),
            "b": event_labels(space, &p.b),
            "gap": p.gap,
            "class": p.class.code(),
        })).collect::<Vec<_>>(),
        "chains": report.chains.iter().map(|c| json!({ "d": c.d, "nondecreasing": c.nondecreasing })).collect::<Vec<_>>(),
    })
}

// disjoint nonempty listed pairs whose union has a value
fn listed_pairs(table: &CapacityTable) -> Vec<(Event, Event)> {
    let events: Vec<&Event> = table.iter().map(|(e, _)| e).filter(|e| !e.is_empty()).collect();
    let mut pairs = Vec::new();
    for (i, a) in events.iter().enumerate() {
        for b in &events[i + 1..] {
            if a.is_disjoint(b) && table.value(&a.union(b)).is_ok() {
                pairs.push(((*a).clone(), (*b).clone()));
            }
        }
    }
    pairs
}

fn weights(ce_path: Option<&Path>, samples_path: Option<&Path>, family: &str) -> Result<Output, CliError> {
    if ce_path.is_none() && samples_path.is_none() {
        return Err(CliError::schema("weights needs --ce and/or --samples"));
    }
    let mut result = serde_json::Map::new();
    let mut csv_rows = Vec::new();
    let mut files = Vec::new();
    if let Some(p) = ce_path {
        let file: CeFile = read_json(p)?;
        let (space, records, utility) = file.resolve()?;
        let m = measure_w(space.len(), &records, &utility)?;
        let report = additivity_report(&m.table, &listed_pairs(&m.table), &[])?;
        result.insert("diseases".into(), json!(space.labels()));
        result.insert("table".into(), table_json(&space, &m.table));
        result.insert(
            "nonadditive".into(),
            Value::Array(
                m.nonadditive
                    .iter()
                    .map(|g| json!({
                        "code": carnap_core::nonadditive::ComplementGap::CODE,
                        "event": event_labels(&space, &g.event),
                        "weight": g.weight,
                        "complement_weight": g.complement_weight,
                    }))
                    .collect(),
            ),
        );
        result.insert("additivity".into(), additivity_json(&space, &report));
    }
    if let Some(p) = samples_path {
        let samples: SamplesFile = read_json(p)?;
        let samples = samples.samples();
        let kind = match family {
            "linear" => FamilyKind::Linear,
            "prelec" => FamilyKind::Prelec,
            _ => FamilyKind::Tk,
        };
        let fit = fit_w(samples, kind)?;
        let mut fit_json = weighting_json(&fit.family);
        let obj = fit_json.as_object_mut().expect("weighting JSON is an object");
        obj.insert("spec".into(), json!(weighting_spec(&fit.family)));
        obj.insert("residual".into(), json!(fit.residual));
        obj.insert("clamped".into(), json!(fit.clamped));
        obj.insert("iterations".into(), json!(fit.iterations));
        result.insert("fit".into(), fit_json);
        csv_rows.extend(samples.iter().map(|&(p, w)| vec![num(p), num(w), num(fit.family.eval(p))]));
        let curve: Vec<(f64, f64)> = (0..=200).map(|k| k as f64 / 200.0).map(|p| (p, fit.family.eval(p))).collect();
        let chart = Chart {
            title: format!("Fitted weighting function ({})", weighting_spec(&fit.family)),
            x_label: "probability p".into(),
            y_label: "w(p)".into(),
            y_range: Some((0.0, 1.0)),
            series: vec![
                Series { name: "w".into(), points: curve, dashed: false, markers: false },
                Series { name: "diagonal".into(), points: vec![(0.0, 0.0), (1.0, 1.0)], dashed: true, markers: false },
                Series { name: "samples".into(), points: samples.to_vec(), dashed: false, markers: true },
            ],
        };
        files.push(("weights.svg".into(), chart.render()));
    }
    let mut out = Output::new(
        "weights",
        json!({ "ce": ce_path.map(path_json), "samples": samples_path.map(path_json), "family": family }),
        Value::Object(result),
    );
    if samples_path.is_some() {
        out.csv = Some(csv_text(&["p", "w_observed", "w_fitted"], csv_rows)?);
    }
    out.files = files;
    Ok(out)
}

fn debias_cmd(table_path: &Path, weighting: Option<&str>, fit_path: Option<&Path>) -> Result<Output, CliError> {
    let w = match (weighting, fit_path) {
        (Some(spec), _) => parse_weighting(spec)?,
        (None, Some(p)) => {
            let doc: Value = read_json(p)?;
            let spec = doc
                .pointer("/fit/spec")
                .and_then(Value::as_str)
                .ok_or_else(|| CliError::schema(format!("{}: no fitted weighting function", p.display())))?;
            parse_weighting(spec)?
        }
        (None, None) => return Err(CliError::schema("debias needs --weighting or --fit")),
    };
    let file: TableFile = read_json(table_path)?;
    let (space, table, pairs, chains) = file.resolve()?;
    let phi = debias(&table, &w)?;
    let report_w = additivity_report(&table, &pairs, &chains)?;
    let report_phi = additivity_report(&phi, &pairs, &chains)?;
    let rows: Vec<(Vec<String>, f64, f64)> = table
        .iter()
        .map(|(e, v)| (event_labels(&space, e), v, phi.get(e).expect("same events")))
        .collect();
    let mut out = Output::new(
        "debias",
        json!({ "table": path_json(table_path), "weighting": weighting_spec(&w), "fit": fit_path.map(path_json) }),
        json!({
            "diseases": space.labels(),
            "weighting": weighting_json(&w),
            "phi": rows.iter().map(|(e, wv, p)| json!({ "event": e, "w": wv, "phi": p })).collect::<Vec<_>>(),
            "additivity": { "w": additivity_json(&space, &report_w), "phi": additivity_json(&space, &report_phi) },
        }),
    );
    out.csv = Some(csv_text(
        &["event", "w", "phi"],
        rows.iter().map(|(e, wv, p)| vec![e.join("|"), num(*wv), num(*p)]),
    )?);
    Ok(out)
}

/// Medians and threshold rates over a batch of runs.
pub fn summarize(runs: &[Trajectory]) -> Value {
    let median = |mut v: Vec<f64>| -> f64 {
        v.sort_by(f64::total_cmp);
        let n = v.len();
        if n == 0 {
            f64::NAN
        } else if n % 2 == 1 {
            v[n / 2]
        } else {
            0.5 * (v[n / 2 - 1] + v[n / 2])
        }
    };
    let max_bel: Vec<f64> = runs.iter().map(Trajectory::final_max_bel).collect();
    let carnap: Vec<f64> = runs.iter().map(|t| t.final_carnap[0]).collect();
    let n = runs.len().max(1) as f64;
    json!({
        "runs": runs.len(),
        "median_final_max_bel": median(max_bel.clone()),
        "median_final_carnap_d1": median(carnap.clone()),
        "rate_max_bel_ge_0_95": max_bel.iter().filter(|&&b| b >= 0.95).count() as f64 / n,
        "rate_carnap_d1_in_0_3_0_5": carnap.iter().filter(|&&p| (0.3..=0.5).contains(&p)).count() as f64 / n,
        "runs_with_conflict": runs.iter().filter(|t| !t.conflicts.is_empty()).count(),
    })
}

fn simulate(
    q: &[f64],
    mu: f64,
    steps: usize,
    runs: usize,
    lambda: f64,
    weighting: &str,
    common: &Common,
) -> Result<Output, CliError> {
    let config = DegeneracyConfig { q: q.to_vec(), mu, steps, lambda, weighting: parse_weighting(weighting)? };
    let seeds: Vec<u64> = (0..runs.max(1) as u64).map(|k| common.seed.wrapping_add(k)).collect();
    let trajectories = seeds
        .par_iter()
        .map(|&seed| degeneracy_experiment(&config, seed))
        .collect::<Result<Vec<_>, _>>()?;
    let s = q.len();
    let label = |d: usize| format!("d{}", d + 1);

    let first = &trajectories[0];
    let trajectory_csv = csv_text(
        &["step", "measure", "disease", "value"],
        first.rows.iter().map(|r| vec![r.step.to_string(), r.measure.as_str().to_string(), label(r.disease), num(r.value)]),
    )?;
    let mut run_header = vec!["seed".to_string(), "conflicts".to_string()];
    run_header.extend((0..s).map(|d| format!("bel_{}", label(d))));
    run_header.extend((0..s).map(|d| format!("carnap_{}", label(d))));
    let run_rows = seeds.iter().zip(&trajectories).map(|(seed, t)| {
        let mut row = vec![seed.to_string(), t.conflicts.len().to_string()];
        row.extend(t.final_bel.iter().map(|&b| num(b)));
        row.extend(t.final_carnap.iter().map(|&p| num(p)));
        row
    });
    let header_refs: Vec<&str> = run_header.iter().map(String::as_str).collect();
    let runs_csv = csv_text(&header_refs, run_rows)?;

    let mut series = Vec::new();
    for measure in ["bel", "pl", "carnap", "phi"] {
        for d in 0..s {
            let points: Vec<(f64, f64)> = first
                .rows
                .iter()
                .filter(|r| r.disease == d && r.measure.as_str() == measure)
                .map(|r| (r.step as f64, r.value))
                .collect();
            series.push(Series { name: format!("{measure} {}", label(d)), points, dashed: measure == "phi", markers: false });
        }
    }
    let chart = Chart {
        title: format!("Dempster vs Carnap, seed {}", seeds[0]),
        x_label: "observations".into(),
        y_label: "value".into(),
        y_range: Some((0.0, 1.0)),
        series,
    };

    let mut out = Output::new(
        "simulate",
        json!({
            "q": q,
            "mu": mu,
            "steps": steps,
            "runs": seeds.len(),
            "lambda": lambda,
            "weighting": weighting_spec(&config.weighting),
            "seeds": [seeds[0], seeds[seeds.len() - 1]],
        }),
        json!({ "summary": summarize(&trajectories) }),
    );
    out.csv = Some(trajectory_csv.clone());
    out.files.push(("trajectory.csv".into(), trajectory_csv));
    out.files.push(("runs.csv".into(), runs_csv));
    out.files.push(("trajectory.svg".into(), chart.render()));
    Ok(out)
}
