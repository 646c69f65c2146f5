//! Utility and probability elicitation through tradeoffs.
//!
//! Two indifferences sharing the gauges `f`, `g` and a nonnull event `A`,
//!
//! ```text
//! α_A f ∼ β_A g    and    γ_A f ∼ δ_A g,
//! ```
//!
//! reveal `αβ ∼* γδ`: under expected utility `U(α) − U(β) = U(γ) − U(δ)`.
//! Chaining such observations yields standard sequences (outcomes equally
//! spaced in utility), hence the utility function; exchange rates of utility
//! units between events then yield probabilities. Two observations
//! `αβ ∼* γδ` and `α'β ∼* γδ` with `α' ≠ α` contradict expected utility.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::agents::{indifference_point, Agent, FreeSlot};
use crate::domain::{binary_act, splice, Act, Event, Evidence};
use crate::error::{Error, Result};
use crate::root::{bisect_increasing, Bisection};
use crate::utility::UtilityCurve;

/// Tolerance on certainty equivalents for nullity and record certification.
pub const NULL_TOL: f64 = 1e-12;

/// Is `event` null for the agent: does the outcome placed on it never move
/// the certainty equivalent?
///
/// The event is probed at both interval ends against constant backgrounds at
/// the lower end, zero and the upper end, which covers rank-dependent agents
/// as well as expected-utility ones.
pub fn is_null<A: Agent + ?Sized>(agent: &A, event: &Event, evidence: &Evidence) -> Result<bool> {
    if event.is_empty() {
        return Ok(true);
    }
    let iv = agent.interval();
    let s = agent.diseases();
    for background in [iv.lo(), 0.0, iv.hi()] {
        let base = Act::constant(iv, s, background)?;
        let low = agent.certainty_equivalent(&splice(iv, &base, event, iv.lo())?, evidence)?;
        let high = agent.certainty_equivalent(&splice(iv, &base, event, iv.hi())?, evidence)?;
        if (high - low).abs() > NULL_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nullity as far as a set of records can show it: the empty event, or a
/// record where different levels on the event leave the same act indifferent.
pub fn is_null_in_records(records: &[TradeoffRecord], event: &Event) -> bool {
    event.is_empty()
        || records.iter().any(|r| {
            &r.event == event && r.f == r.g && (r.alpha != r.beta || r.gamma != r.delta)
        })
}

/// An increasing outcome sequence equally spaced in the elicitor's utility.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardSequence {
    /// `α₀, α₁, …, α_m`.
    pub points: Vec<f64>,
    /// `(g, G)`: outcomes off the event on the two sides.
    pub gauges: (f64, f64),
    /// Event the sequence outcomes are placed on.
    pub event: Event,
}

/// Parameters of one standard-sequence elicitation.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceProbe {
    /// Event carrying the sequence outcomes.
    pub event: Event,
    /// `g`.
    pub low_gauge: f64,
    /// `G`.
    pub high_gauge: f64,
    /// `α₀`.
    pub start: f64,
    /// `m`.
    pub steps: usize,
}

impl SequenceProbe {
    /// Runs [`elicit_standard_sequence`].
    pub fn elicit<A: Agent + ?Sized>(&self, agent: &A, evidence: &Evidence) -> Result<StandardSequence> {
        elicit_standard_sequence(
            agent,
            &self.event,
            (self.low_gauge, self.high_gauge),
            self.start,
            self.steps,
            evidence,
        )
    }

    /// Same probe with the upper gauge re-solved so that the first step under
    /// `evidence` lands on `first_step`.
    pub fn recalibrated<A: Agent + ?Sized>(&self, agent: &A, evidence: &Evidence, first_step: f64) -> Result<Self> {
        let iv = agent.interval();
        let s = agent.diseases();
        // (α₁ on A, g off A) ∼ (α₀ on A, G off A), solved for G
        let target = splice(iv, &Act::constant(iv, s, self.low_gauge)?, &self.event, first_step)?;
        let slot = FreeSlot { base: splice(iv, &Act::constant(iv, s, 0.0)?, &self.event, self.start)?, event: self.event.complement() };
        let high_gauge = indifference_point(agent, &slot, &target, evidence)?;
        Ok(Self { high_gauge, ..self.clone() })
    }
}

/// Elicits `α₀ < α₁ < … < α_m` where `α_{k+1}` solves
/// `(α_{k+1} on A, g off A) ∼ (α_k on A, G off A)`.
///
/// When the next point would leave the outcome interval the error carries
/// the points elicited so far.
pub fn elicit_standard_sequence<A: Agent + ?Sized>(
    agent: &A,
    event: &Event,
    (g, big_g): (f64, f64),
    start: f64,
    steps: usize,
    evidence: &Evidence,
) -> Result<StandardSequence> {
    let iv = agent.interval();
    let s = agent.diseases();
    for (what, x) in [("start", start), ("gauge g", g), ("gauge G", big_g)] {
        iv.check(what, x)?;
    }
    if big_g < g {
        return Err(Error::InvalidParameter(format!("gauges must satisfy g <= G, got ({g}, {big_g})")));
    }
    if event.is_empty() || event.is_full() {
        return Err(Error::NullEvent);
    }
    let mut points = vec![start];
    if big_g == g {
        points.resize(steps + 1, start);
        return Ok(StandardSequence { points, gauges: (g, big_g), event: event.clone() });
    }
    let slot = FreeSlot { base: Act::constant(iv, s, g)?, event: event.clone() };
    let high = Act::constant(iv, s, big_g)?;
    for _ in 0..steps {
        let prev = *points.last().expect("sequence starts non-empty");
        let target = splice(iv, &high, event, prev)?;
        match indifference_point(agent, &slot, &target, evidence) {
            Ok(next) => points.push(next),
            Err(Error::NoSolution { .. }) => return Err(Error::Truncated { achieved: points }),
            Err(Error::Degenerate) => return Err(Error::NullEvent),
            Err(e) => return Err(e),
        }
    }
    Ok(StandardSequence { points, gauges: (g, big_g), event: event.clone() })
}

/// Elicits an `m`-step standard sequence from the bottom of the interval
/// whose last point lands on the top, choosing `G` by bisection (`g` and `α₀`
/// sit at the lower end).
///
/// If even `G` at the top of the interval cannot reach the upper end the
/// sequence for that gauge is returned.
pub fn span_standard_sequence<A: Agent + ?Sized>(
    agent: &A,
    event: &Event,
    steps: usize,
    evidence: &Evidence,
) -> Result<StandardSequence> {
    let iv = agent.interval();
    let (lo, hi) = (iv.lo(), iv.hi());
    let steps = steps.max(1);
    let run = |big_g: f64| elicit_standard_sequence(agent, event, (lo, big_g), lo, steps, evidence);
    match run(hi) {
        Ok(seq) => return Ok(seq),
        Err(Error::Truncated { .. }) => {}
        Err(e) => return Err(e),
    }
    let span = hi - lo;
    let overshoot = |big_g: f64| -> Result<f64> {
        match run(big_g) {
            Ok(seq) => Ok(seq.points[steps] - hi),
            Err(Error::Truncated { .. }) => Ok(span),
            Err(e) => Err(e),
        }
    };
    let rule = Bisection { tol: 1e-12 * span.max(1.0), max_iter: 200 };
    let big_g = bisect_increasing(overshoot, lo, hi, rule)?;
    match run(big_g) {
        Ok(seq) => Ok(seq),
        // landed a rounding error past the top: step back one ulp-sized notch
        Err(Error::Truncated { .. }) => run(big_g - (big_g - lo) * 1e-12),
        Err(e) => Err(e),
    }
}

/// Utility curve with `U(α_k) = k/m`, linear between knots.
pub fn utility_from_sequence(seq: &StandardSequence) -> Result<UtilityCurve> {
    let m = seq.points.len();
    if m < 2 {
        return Err(Error::Inconsistent("a standard sequence needs at least 2 points".into()));
    }
    if let Some(w) = seq.points.windows(2).find(|w| !(w[0] < w[1])) {
        return Err(Error::Inconsistent(format!("standard sequence not increasing at {} -> {}", w[0], w[1])));
    }
    let steps = (m - 1) as f64;
    let knots: Vec<(f64, f64)> = seq.points.iter().enumerate().map(|(k, &x)| (x, k as f64 / steps)).collect();
    UtilityCurve::from_grid(&knots)
}

/// `(U(c) − U(0)) / (U(x) − U(0))` from an observed `(A:x) ∼ c`.
pub fn probability_from_equivalence(utility: &UtilityCurve, stake: f64, ce: f64) -> Result<f64> {
    let u0 = utility.eval(0.0);
    let ux = utility.eval(stake) - u0;
    if ux == 0.0 {
        return Err(Error::DegenerateGauge);
    }
    Ok((utility.eval(ce) - u0) / ux)
}

/// Probability of `event` from the agent's certainty equivalent of
/// `(A:stake)`, measured with `utility`.
pub fn probability_from_exchange<A: Agent + ?Sized>(
    agent: &A,
    utility: &UtilityCurve,
    event: &Event,
    stake: f64,
    evidence: &Evidence,
) -> Result<f64> {
    if stake == 0.0 {
        return Err(Error::DegenerateGauge);
    }
    let act = binary_act(agent.interval(), event, stake)?;
    let ce = agent.certainty_equivalent(&act, evidence)?;
    probability_from_equivalence(utility, stake, ce)
}

/// The two equivalences `α_A f ∼ β_A g` and `γ_A f ∼ δ_A g`.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffRecord {
    /// `α`.
    pub alpha: f64,
    /// `β`.
    pub beta: f64,
    /// `γ`.
    pub gamma: f64,
    /// `δ`.
    pub delta: f64,
    /// `A`.
    pub event: Event,
    /// `f`.
    pub f: Act,
    /// `g`.
    pub g: Act,
    /// Evidence both equivalences are conditioned on.
    pub evidence: Evidence,
}

/// `αβ ∼* γδ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffPair {
    /// `α`.
    pub alpha: f64,
    /// `β`.
    pub beta: f64,
    /// `γ`.
    pub gamma: f64,
    /// `δ`.
    pub delta: f64,
}

/// Checks both equivalences of every record against an agent, to within
/// `tol` in certainty-equivalent units, and that each event is nonnull.
pub fn certify_records<A: Agent + ?Sized>(agent: &A, records: &[TradeoffRecord], tol: f64) -> Result<()> {
    let iv = agent.interval();
    for (n, r) in records.iter().enumerate() {
        if is_null(agent, &r.event, &r.evidence)? {
            return Err(Error::NullEvent);
        }
        for (x, y) in [(r.alpha, r.beta), (r.gamma, r.delta)] {
            let left = agent.certainty_equivalent(&splice(iv, &r.f, &r.event, x)?, &r.evidence)?;
            let right = agent.certainty_equivalent(&splice(iv, &r.g, &r.event, y)?, &r.evidence)?;
            if (left - right).abs() > tol {
                return Err(Error::Inconsistent(format!(
                    "record {n}: equivalence fails by {} in certainty equivalents",
                    left - right
                )));
            }
        }
    }
    Ok(())
}

/// The `∼*` relation induced by certified records. Records whose event the
/// data themselves show to be null are rejected.
pub fn tradeoff_pairs(records: &[TradeoffRecord]) -> Result<Vec<TradeoffPair>> {
    let mut checked: Vec<&Event> = Vec::new();
    for r in records {
        if !checked.contains(&&r.event) {
            if is_null_in_records(records, &r.event) {
                return Err(Error::NullEvent);
            }
            checked.push(&r.event);
        }
    }
    Ok(records.iter().map(|r| TradeoffPair { alpha: r.alpha, beta: r.beta, gamma: r.gamma, delta: r.delta }).collect())
}

/// Whether the second `α` of a violation is above or below the first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `α' > α`.
    Above,
    /// `α' < α`.
    Below,
}

/// Two `∼*` observations with the same `β, γ, δ` but different `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffViolation {
    /// Index of the earlier pair in the input.
    pub first: usize,
    /// Index of the later pair.
    pub second: usize,
    /// `α` of the earlier pair.
    pub alpha: f64,
    /// `α'` of the later pair.
    pub alpha_prime: f64,
    /// Shared `(β, γ, δ)`.
    pub shared: (f64, f64, f64),
    /// Sign of `α' − α`.
    pub direction: Direction,
}

impl TradeoffViolation {
    /// Machine-readable code.
    pub const CODE: &'static str = "TC-VIOLATION";

    /// `|α' − α|`.
    pub fn severity(&self) -> f64 {
        (self.alpha_prime - self.alpha).abs()
    }
}

fn key_cmp(a: &TradeoffPair, b: &TradeoffPair) -> Ordering {
    a.beta.total_cmp(&b.beta).then(a.gamma.total_cmp(&b.gamma)).then(a.delta.total_cmp(&b.delta))
}

/// Every pair of observations `αβ ∼* γδ`, `α'β ∼* γδ` with `|α' − α| > tol`,
/// most severe first. `(β, γ, δ)` must match exactly.
pub fn detect_tradeoff_inconsistency(pairs: &[TradeoffPair], tol: f64) -> Vec<TradeoffViolation> {
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by(|&a, &b| key_cmp(&pairs[a], &pairs[b]).then(a.cmp(&b)));
    let mut out = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && key_cmp(&pairs[order[start]], &pairs[order[end]]) == Ordering::Equal {
            end += 1;
        }
        let group = &order[start..end];
        for (n, &i) in group.iter().enumerate() {
            for &j in &group[n + 1..] {
                let (first, second) = (i.min(j), i.max(j));
                let (a, b) = (pairs[first].alpha, pairs[second].alpha);
                if (b - a).abs() > tol {
                    let p = pairs[first];
                    out.push(TradeoffViolation {
                        first,
                        second,
                        alpha: a,
                        alpha_prime: b,
                        shared: (p.beta, p.gamma, p.delta),
                        direction: if b > a { Direction::Above } else { Direction::Below },
                    });
                }
            }
        }
        start = end;
    }
    out.sort_by(|x, y| {
        y.severity().total_cmp(&x.severity()).then(x.first.cmp(&y.first)).then(x.second.cmp(&y.second))
    });
    out
}

/// Deterministic probe grid for tradeoff-consistency batteries.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeGrid {
    /// Number of outcome levels, spread uniformly strictly inside the
    /// interval.
    pub levels: usize,
    /// Events to probe; at least two distinct ones so that contradictions
    /// across events are visible. Empty means "the first two singletons".
    pub events: Vec<Event>,
}

impl Default for ProbeGrid {
    fn default() -> Self {
        Self { levels: 8, events: Vec::new() }
    }
}

impl ProbeGrid {
    /// Outcome levels of the grid.
    pub fn level_values(&self, lo: f64, hi: f64) -> Vec<f64> {
        let n = self.levels.max(2);
        (1..=n).map(|k| lo + (hi - lo) * k as f64 / (n + 1) as f64).collect()
    }
}

/// Generates tradeoff records by querying an agent.
///
/// For each probe event `A`, off-event level `p` of `f` and grid triple
/// `(β, γ, δ)` with `γ ≠ δ`: the off-event level `q` of `g` solves
/// `γ_A p ∼ δ_A q`, then `α` solves `α_A p ∼ β_A q`. Probes whose solutions
/// leave the interval are skipped. Every record shares its `(β, γ, δ)` with
/// the records for the other `p` values and events, so contradictions show
/// up as exact key matches.
pub fn probe_battery<A: Agent + ?Sized>(agent: &A, grid: &ProbeGrid, evidence: &Evidence) -> Result<Vec<TradeoffRecord>> {
    let iv = agent.interval();
    let s = agent.diseases();
    let events: Vec<Event> = if grid.events.is_empty() {
        vec![Event::singleton(s, 0)?, Event::singleton(s, 1)?]
    } else {
        grid.events.clone()
    };
    let levels = grid.level_values(iv.lo(), iv.hi());
    let mut records = Vec::new();
    for event in &events {
        if event.is_empty() || event.is_full() || is_null(agent, event, evidence)? || is_null(agent, &event.complement(), evidence)? {
            continue;
        }
        for &p in &levels {
            let f = Act::constant(iv, s, p)?;
            for &beta in &levels {
                for &gamma in &levels {
                    for &delta in &levels {
                        if gamma == delta {
                            continue;
                        }
                        let Some(q) = solve_or_skip(
                            agent,
                            &FreeSlot { base: splice(iv, &f, event, delta)?, event: event.complement() },
                            &splice(iv, &f, event, gamma)?,
                            evidence,
                        )?
                        else {
                            continue;
                        };
                        let g = Act::constant(iv, s, q)?;
                        let Some(alpha) = solve_or_skip(
                            agent,
                            &FreeSlot { base: f.clone(), event: event.clone() },
                            &splice(iv, &g, event, beta)?,
                            evidence,
                        )?
                        else {
                            continue;
                        };
                        records.push(TradeoffRecord {
                            alpha,
                            beta,
                            gamma,
                            delta,
                            event: event.clone(),
                            f: f.clone(),
                            g: g.clone(),
                            evidence: evidence.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(records)
}

fn solve_or_skip<A: Agent + ?Sized>(agent: &A, slot: &FreeSlot, target: &Act, evidence: &Evidence) -> Result<Option<f64>> {
    match indifference_point(agent, slot, target, evidence) {
        Ok(x) => Ok(Some(x)),
        Err(Error::NoSolution { .. }) | Err(Error::Degenerate) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Recorded comparison between two listed acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// `left ≻ right`.
    Strict,
    /// `left ∼ right`.
    Indifferent,
}

/// A finite table of pairwise preferences.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceTable {
    /// Acts being compared, optionally named.
    pub acts: Vec<(String, Act)>,
    /// `(left, right, comparison)` by act index.
    pub entries: Vec<(usize, usize, Comparison)>,
}

impl PreferenceTable {
    /// Every pair of `acts` ranked by the agent's certainty equivalents; ties
    /// within `tol` are recorded as indifference.
    pub fn from_agent<A: Agent + ?Sized>(
        agent: &A,
        acts: Vec<(String, Act)>,
        evidence: &Evidence,
        tol: f64,
    ) -> Result<Self> {
        let ces = acts.iter().map(|(_, a)| agent.certainty_equivalent(a, evidence)).collect::<Result<Vec<_>>>()?;
        let mut entries = Vec::new();
        for i in 0..acts.len() {
            for j in i + 1..acts.len() {
                let d = ces[i] - ces[j];
                entries.push(if d.abs() <= tol {
                    (i, j, Comparison::Indifferent)
                } else if d > 0.0 {
                    (i, j, Comparison::Strict)
                } else {
                    (j, i, Comparison::Strict)
                });
            }
        }
        Ok(Self { acts, entries })
    }
}

/// Findings of [`check_order_axioms`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OrderReport {
    /// Groups of acts tied in a preference cycle containing a strict step.
    pub cycles: Vec<Vec<usize>>,
    /// Unordered pairs with no recorded comparison.
    pub gaps: Vec<(usize, usize)>,
    /// `(worse, better)` where `better ≥ worse` pointwise yet `worse ≻ better`
    /// was recorded.
    pub monotonicity: Vec<(usize, usize)>,
}

impl OrderReport {
    /// Code for a transitivity cycle.
    pub const CYCLE: &'static str = "TRANS-CYCLE";
    /// Code for a monotonicity violation.
    pub const MONOTONICITY: &'static str = "MONO-VIOLATION";
    /// Code for an incompleteness gap.
    pub const GAP: &'static str = "INCOMPLETE";

    /// No findings.
    pub fn is_clean(&self) -> bool {
        self.cycles.is_empty() && self.gaps.is_empty() && self.monotonicity.is_empty()
    }
}

/// Audits weak ordering (transitivity, completeness) and monotonicity of a
/// preference table.
pub fn check_order_axioms(table: &PreferenceTable) -> OrderReport {
    let n = table.acts.len();
    let mut reach = vec![vec![false; n]; n];
    let mut known = vec![vec![false; n]; n];
    for i in 0..n {
        reach[i][i] = true;
    }
    let mut report = OrderReport::default();
    for &(l, r, c) in &table.entries {
        if l >= n || r >= n {
            continue;
        }
        reach[l][r] = true;
        known[l][r] = true;
        known[r][l] = true;
        if c == Comparison::Indifferent {
            reach[r][l] = true;
        } else if table.acts[r].1.dominates(&table.acts[l].1) {
            report.monotonicity.push((l, r));
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    // strongly connected groups that contain a strict step are cycles
    let mut seen = vec![false; n];
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let group: Vec<usize> = (0..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &j in &group {
            seen[j] = true;
        }
        let strict_inside = table
            .entries
            .iter()
            .any(|&(l, r, c)| c == Comparison::Strict && group.contains(&l) && group.contains(&r));
        if group.len() > 1 && strict_inside {
            report.cycles.push(group);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if !known[i][j] {
                report.gaps.push((i, j));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::{ChoquetAgent, SeuAgent};
    use crate::domain::OutcomeInterval;
    use crate::nonadditive::CapacityTable;

    fn iv(hi: f64) -> OutcomeInterval {
        OutcomeInterval::new(0.0, hi).unwrap()
    }

    fn seu(p: Vec<f64>, u: UtilityCurve, hi: f64) -> SeuAgent {
        SeuAgent::new(p, u, iv(hi)).unwrap()
    }

    #[test]
    fn nullity_examples() {
        let e = Evidence::empty(2);
        let a = seu(vec![0.3, 0.7], UtilityCurve::linear(), 1.0);
        assert!(is_null(&a, &Event::empty(2), &e).unwrap());
        assert!(!is_null(&a, &Event::singleton(2, 0).unwrap(), &e).unwrap());
        let ce = a.certainty_equivalent(&binary_act(iv(1.0), &Event::singleton(2, 0).unwrap(), 1.0).unwrap(), &e).unwrap();
        assert!((ce - 0.3).abs() < 1e-15);
        let z = seu(vec![0.0, 1.0], UtilityCurve::linear(), 1.0);
        assert!(is_null(&z, &Event::singleton(2, 0).unwrap(), &e).unwrap());
    }

    #[test]
    fn standard_sequence_examples() {
        let e = Evidence::empty(2);
        let a1 = Event::singleton(2, 0).unwrap();
        let a = seu(vec![0.5, 0.5], UtilityCurve::sqrt(), 100.0);
        let seq = elicit_standard_sequence(&a, &a1, (0.0, 9.0), 1.0, 3, &e).unwrap();
        for (x, want) in seq.points.iter().zip([1.0, 16.0, 49.0, 100.0]) {
            assert!((x - want).abs() < 1e-9, "{:?}", seq.points);
        }
        let flat = elicit_standard_sequence(&a, &a1, (4.0, 4.0), 1.0, 3, &e).unwrap();
        assert_eq!(flat.points, vec![1.0; 4]);

        let lin = seu(vec![0.5, 0.5], UtilityCurve::linear(), 100.0);
        let seq = elicit_standard_sequence(&lin, &a1, (0.0, 2.0), 0.0, 3, &e).unwrap();
        for (x, want) in seq.points.iter().zip([0.0, 2.0, 4.0, 6.0]) {
            assert!((x - want).abs() < 1e-10);
        }
    }

    #[test]
    fn truncation_reports_achieved_prefix() {
        let e = Evidence::empty(2);
        let a = seu(vec![0.5, 0.5], UtilityCurve::sqrt(), 100.0);
        match elicit_standard_sequence(&a, &Event::singleton(2, 0).unwrap(), (0.0, 9.0), 1.0, 5, &e) {
            Err(Error::Truncated { achieved }) => assert_eq!(achieved.len(), 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn utility_from_sequence_examples() {
        let ev = Event::singleton(2, 0).unwrap();
        let seq = |p: Vec<f64>| StandardSequence { points: p, gauges: (0.0, 1.0), event: ev.clone() };
        let u = utility_from_sequence(&seq(vec![0.0, 2.0, 4.0, 6.0])).unwrap();
        assert_eq!(u.eval(6.0), 1.0);
        assert!((u.eval(3.0) - 0.5).abs() < 1e-15);
        let u = utility_from_sequence(&seq(vec![1.0, 16.0, 49.0, 100.0])).unwrap();
        let root = UtilityCurve::sqrt().normalized(1.0, 100.0).unwrap();
        for x in [1.0, 16.0, 49.0, 100.0] {
            assert!((u.eval(x) - root.eval(x)).abs() < 1e-15);
        }
        let u = utility_from_sequence(&seq(vec![2.0, 5.0])).unwrap();
        assert_eq!((u.eval(2.0), u.eval(5.0)), (0.0, 1.0));
        assert!(utility_from_sequence(&seq(vec![2.0, 2.0])).is_err());
    }

    #[test]
    fn exchange_rate_examples() {
        assert_eq!(probability_from_equivalence(&UtilityCurve::linear(), 1e6, 300_000.0).unwrap(), 0.3);
        let a = seu(vec![0.5, 0.5], UtilityCurve::sqrt(), 100.0);
        let e = Evidence::empty(2);
        let p = probability_from_exchange(&a, &UtilityCurve::sqrt(), &Event::singleton(2, 0).unwrap(), 100.0, &e).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        let p = probability_from_exchange(&a, &UtilityCurve::sqrt(), &Event::full(2), 37.0, &e).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
        assert_eq!(probability_from_equivalence(&UtilityCurve::linear(), 0.0, 0.0), Err(Error::DegenerateGauge));
    }

    fn pair(a: f64, b: f64, c: f64, d: f64) -> TradeoffPair {
        TradeoffPair { alpha: a, beta: b, gamma: c, delta: d }
    }

    #[test]
    fn inconsistency_examples() {
        assert!(detect_tradeoff_inconsistency(&[], 0.0).is_empty());
        let v = detect_tradeoff_inconsistency(&[pair(2.0, 1.0, 5.0, 4.0), pair(3.0, 1.0, 5.0, 4.0)], 1e-9);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].direction, Direction::Above);
        assert_eq!(v[0].severity(), 1.0);
        let v = detect_tradeoff_inconsistency(
            &[pair(2.0, 1.0, 5.0, 4.0), pair(2.5, 1.0, 5.0, 4.0), pair(3.0, 1.0, 5.0, 4.0), pair(9.0, 2.0, 5.0, 4.0)],
            1e-9,
        );
        let sev: Vec<f64> = v.iter().map(|x| x.severity()).collect();
        assert_eq!(sev, vec![1.0, 0.5, 0.5]);
    }

    #[test]
    fn pairs_from_records() {
        let r = TradeoffRecord {
            alpha: 3.0,
            beta: 3.0,
            gamma: 5.0,
            delta: 5.0,
            event: Event::singleton(2, 0).unwrap(),
            f: Act::constant(iv(10.0), 2, 1.0).unwrap(),
            g: Act::constant(iv(10.0), 2, 1.0).unwrap(),
            evidence: Evidence::empty(2),
        };
        assert_eq!(tradeoff_pairs(&[r.clone()]).unwrap(), vec![pair(3.0, 3.0, 5.0, 5.0)]);
        let null = TradeoffRecord { alpha: 4.0, ..r.clone() };
        assert_eq!(tradeoff_pairs(&[r, null]), Err(Error::NullEvent));
        assert!(tradeoff_pairs(&[]).unwrap().is_empty());
    }

    #[test]
    fn seu_pairs_satisfy_utility_difference_equality() {
        let a = seu(vec![0.4, 0.6], UtilityCurve::sqrt(), 100.0);
        let grid = ProbeGrid { levels: 4, events: vec![] };
        let records = probe_battery(&a, &grid, &Evidence::empty(2)).unwrap();
        assert!(!records.is_empty());
        certify_records(&a, &records, 1e-9).unwrap();
        let u = UtilityCurve::sqrt();
        for p in tradeoff_pairs(&records).unwrap() {
            let lhs = u.eval(p.alpha) - u.eval(p.beta);
            let rhs = u.eval(p.gamma) - u.eval(p.delta);
            assert!((lhs - rhs).abs() < 1e-9);
        }
        assert!(detect_tradeoff_inconsistency(&tradeoff_pairs(&records).unwrap(), 1e-7).is_empty());
    }

    #[test]
    fn choquet_two_disease_battery_contradicts() {
        let mut cap = CapacityTable::new(2);
        cap.insert(Event::singleton(2, 0).unwrap(), 0.4);
        cap.insert(Event::singleton(2, 1).unwrap(), 0.4);
        let agent = ChoquetAgent::new(cap, UtilityCurve::linear(), iv(1.0)).unwrap();
        let records = probe_battery(&agent, &ProbeGrid::default(), &Evidence::empty(2)).unwrap();
        let v = detect_tradeoff_inconsistency(&tradeoff_pairs(&records).unwrap(), 1e-7);
        assert!(!v.is_empty());
    }

    #[test]
    fn order_axiom_examples() {
        let range = iv(10.0);
        let act = |x: f64, y: f64| Act::new(range, vec![x, y]).unwrap();
        let acts = vec![("f".into(), act(1.0, 2.0)), ("g".into(), act(2.0, 1.0)), ("h".into(), act(0.0, 3.0))];
        let cyc = PreferenceTable {
            acts: acts.clone(),
            entries: vec![(0, 1, Comparison::Strict), (1, 2, Comparison::Strict), (2, 0, Comparison::Strict)],
        };
        let r = check_order_axioms(&cyc);
        assert_eq!(r.cycles, vec![vec![0, 1, 2]]);
        assert!(r.gaps.is_empty() && r.monotonicity.is_empty());

        let mono = PreferenceTable {
            acts: vec![("f".into(), act(3.0, 3.0)), ("g".into(), act(1.0, 2.0))],
            entries: vec![(1, 0, Comparison::Strict)],
        };
        assert_eq!(check_order_axioms(&mono).monotonicity, vec![(1, 0)]);

        let gap = PreferenceTable { acts, entries: vec![(0, 1, Comparison::Indifferent)] };
        assert_eq!(check_order_axioms(&gap).gaps, vec![(0, 2), (1, 2)]);

        let a = seu(vec![0.3, 0.7], UtilityCurve::sqrt(), 10.0);
        let acts: Vec<(String, Act)> =
            (0..6).map(|k| (format!("a{k}"), act(k as f64, (6 - k) as f64 * 1.5))).collect();
        let table = PreferenceTable::from_agent(&a, acts, &Evidence::empty(2), 1e-12).unwrap();
        assert!(check_order_axioms(&table).is_clean());
    }
}
