//! Simulated decision makers.
//!
//! Each agent answers one question: how much utility does an act carry given
//! some evidence, and which sure outcome carries the same utility. Everything
//! else (indifference points, standard sequences, axiom checks) is built on
//! those two answers.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::carnap::CarnapModel;
use crate::domain::{splice, Act, Event, Evidence, OutcomeInterval};
use crate::error::{Error, Result};
use crate::nonadditive::CapacityTable;
use crate::root::{bisect_increasing, Bisection};
use crate::utility::UtilityCurve;

/// Tolerance on probability vectors summing to one.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// A preference oracle over acts, possibly conditioned on evidence.
pub trait Agent {
    /// Number of diseases the agent's acts range over.
    fn diseases(&self) -> usize;

    /// Outcome interval acts must respect.
    fn interval(&self) -> OutcomeInterval;

    /// Longest evidence the agent can condition on, if bounded.
    fn horizon(&self) -> Option<usize> {
        None
    }

    /// Utility value of `act` under `evidence`.
    fn value(&self, act: &Act, evidence: &Evidence) -> Result<f64>;

    /// The sure outcome whose utility under `evidence` is `value`.
    fn utility_inverse(&self, value: f64, evidence: &Evidence) -> Result<f64>;

    /// Certainty equivalent of `act`; see [`certainty_equivalent`].
    fn certainty_equivalent(&self, act: &Act, evidence: &Evidence) -> Result<f64> {
        let v = self.value(act, evidence)?;
        self.utility_inverse(v, evidence)
    }
}

/// The sure outcome `c` with `c ∼^E act`.
pub fn certainty_equivalent<A: Agent + ?Sized>(agent: &A, act: &Act, evidence: &Evidence) -> Result<f64> {
    agent.certainty_equivalent(act, evidence)
}

/// An act with one free outcome placed on `event`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeSlot {
    /// Outcomes off the event.
    pub base: Act,
    /// Where the free outcome goes.
    pub event: Event,
}

impl FreeSlot {
    /// The template with `x` filled in.
    pub fn fill(&self, interval: OutcomeInterval, x: f64) -> Result<Act> {
        splice(interval, &self.base, &self.event, x)
    }
}

/// Value spread across the interval below which the free event is treated
/// as null.
pub const DEGENERATE_GAP: f64 = 1e-12;

/// The free outcome `x` making `slot(x) ∼^E target`, by monotone bisection
/// run until the bracket collapses to adjacent floats.
///
/// A fixed tolerance on the value gap would translate into outcome errors
/// that grow as the free event becomes improbable.
pub fn indifference_point<A: Agent + ?Sized>(
    agent: &A,
    slot: &FreeSlot,
    target: &Act,
    evidence: &Evidence,
) -> Result<f64> {
    indifference_point_with(agent, slot, target, evidence, Bisection { tol: 0.0, max_iter: 1100 })
}

/// [`indifference_point`] with an explicit stopping rule.
pub fn indifference_point_with<A: Agent + ?Sized>(
    agent: &A,
    slot: &FreeSlot,
    target: &Act,
    evidence: &Evidence,
    rule: Bisection,
) -> Result<f64> {
    let iv = agent.interval();
    let goal = agent.value(target, evidence)?;
    let gap = |x: f64| -> Result<f64> { Ok(agent.value(&slot.fill(iv, x)?, evidence)? - goal) };
    let (g_lo, g_hi) = (gap(iv.lo())?, gap(iv.hi())?);
    if (g_hi - g_lo).abs() <= rule.tol.max(DEGENERATE_GAP) {
        return Err(Error::Degenerate);
    }
    bisect_increasing(gap, iv.lo(), iv.hi(), rule)
}

fn check_act(diseases: usize, interval: OutcomeInterval, act: &Act) -> Result<()> {
    if act.len() != diseases {
        return Err(Error::Schema(format!("act over {} diseases, agent has {}", act.len(), diseases)));
    }
    for &x in act.outcomes() {
        interval.check("outcome", x)?;
    }
    Ok(())
}

fn check_evidence(diseases: usize, horizon: Option<usize>, evidence: &Evidence) -> Result<()> {
    if evidence.space_size() != diseases {
        return Err(Error::Schema(format!(
            "evidence over {} diseases, agent has {}",
            evidence.space_size(),
            diseases
        )));
    }
    match horizon {
        Some(t) if evidence.total() > t => Err(Error::HorizonExceeded { needed: evidence.total(), horizon: t }),
        _ => Ok(()),
    }
}

fn check_simplex(p: &[f64]) -> Result<()> {
    if p.len() < 2 {
        return Err(Error::InvalidParameter("probability vector needs at least 2 entries".into()));
    }
    if p.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
        return Err(Error::InvalidParameter("probabilities must be finite and nonnegative".into()));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::InvalidParameter(format!("probabilities sum to {total}, not 1")));
    }
    Ok(())
}

fn expectation(probs: &[f64], utility: &UtilityCurve, act: &Act) -> f64 {
    probs.iter().zip(act.outcomes()).map(|(p, &x)| p * utility.eval(x)).sum()
}

// U⁻¹ restricted to the interval; values a hair outside the utility range of
// the interval are rounding noise and get clamped.
fn inverse_in(utility: &UtilityCurve, interval: OutcomeInterval, value: f64) -> Result<f64> {
    let (u_lo, u_hi) = (utility.eval(interval.lo()), utility.eval(interval.hi()));
    let slack = 1e-9 * (u_hi - u_lo).abs().max(1.0);
    if value < u_lo - slack || value > u_hi + slack {
        return Err(Error::Internal(format!("utility value {value} outside [{u_lo}, {u_hi}]")));
    }
    Ok(utility.inverse(value).clamp(interval.lo(), interval.hi()))
}

/// Subjective expected utility with fixed probabilities; ignores evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct SeuAgent {
    probabilities: Vec<f64>,
    utility: UtilityCurve,
    interval: OutcomeInterval,
}

impl SeuAgent {
    /// Probabilities must form a simplex.
    pub fn new(probabilities: Vec<f64>, utility: UtilityCurve, interval: OutcomeInterval) -> Result<Self> {
        check_simplex(&probabilities)?;
        Ok(Self { probabilities, utility, interval })
    }

    /// `P`.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `U`.
    pub fn utility(&self) -> &UtilityCurve {
        &self.utility
    }
}

/// `Σ_d P(d) U(f(d))`.
pub fn seu_value(agent: &SeuAgent, act: &Act) -> Result<f64> {
    check_act(agent.probabilities.len(), agent.interval, act)?;
    Ok(expectation(&agent.probabilities, &agent.utility, act))
}

impl Agent for SeuAgent {
    fn diseases(&self) -> usize {
        self.probabilities.len()
    }

    fn interval(&self) -> OutcomeInterval {
        self.interval
    }

    fn value(&self, act: &Act, evidence: &Evidence) -> Result<f64> {
        if evidence.space_size() != self.diseases() {
            return Err(Error::Schema("evidence over a different disease space".into()));
        }
        seu_value(self, act)
    }

    fn utility_inverse(&self, value: f64, _: &Evidence) -> Result<f64> {
        inverse_in(&self.utility, self.interval, value)
    }
}

/// Expected utility under Carnap's predictive probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct CarnapAgent {
    model: CarnapModel,
    utility: UtilityCurve,
    interval: OutcomeInterval,
}

impl CarnapAgent {
    /// Utility is fixed across evidence.
    pub fn new(model: CarnapModel, utility: UtilityCurve, interval: OutcomeInterval) -> Self {
        Self { model, utility, interval }
    }

    /// Underlying model.
    pub fn model(&self) -> &CarnapModel {
        &self.model
    }

    /// `U`.
    pub fn utility(&self) -> &UtilityCurve {
        &self.utility
    }
}

impl Agent for CarnapAgent {
    fn diseases(&self) -> usize {
        self.model.diseases()
    }

    fn interval(&self) -> OutcomeInterval {
        self.interval
    }

    fn horizon(&self) -> Option<usize> {
        Some(self.model.horizon())
    }

    fn value(&self, act: &Act, evidence: &Evidence) -> Result<f64> {
        check_act(self.diseases(), self.interval, act)?;
        let p = self.model.update(evidence)?.posterior;
        Ok(expectation(&p, &self.utility, act))
    }

    fn utility_inverse(&self, value: f64, _: &Evidence) -> Result<f64> {
        inverse_in(&self.utility, self.interval, value)
    }
}

/// Expected utility with probabilities from sampling without replacement.
///
/// With `K_i` tickets per disease, the next draw is `d_i` with probability
/// `(K_i - n_i) / (K - N)`: observations are negatively related.
#[derive(Debug, Clone, PartialEq)]
pub struct UrnAgent {
    tickets: Vec<u32>,
    utility: UtilityCurve,
    interval: OutcomeInterval,
}

impl UrnAgent {
    /// Every disease needs at least one ticket.
    pub fn new(tickets: Vec<u32>, utility: UtilityCurve, interval: OutcomeInterval) -> Result<Self> {
        if tickets.len() < 2 || tickets.contains(&0) {
            return Err(Error::InvalidParameter("urn needs >= 2 diseases with positive ticket counts".into()));
        }
        Ok(Self { tickets, utility, interval })
    }

    /// Predictive probabilities after `evidence`.
    pub fn predictive(&self, evidence: &Evidence) -> Result<Vec<f64>> {
        check_evidence(self.diseases(), self.horizon(), evidence)?;
        let total: u32 = self.tickets.iter().sum();
        for (d, (&k, &n)) in self.tickets.iter().zip(evidence.counts()).enumerate() {
            if n > k {
                return Err(Error::InvalidParameter(format!(
                    "disease {d} drawn {n} times from {k} tickets"
                )));
            }
        }
        let left = (total as usize - evidence.total()) as f64;
        Ok(self.tickets.iter().zip(evidence.counts()).map(|(&k, &n)| (k - n) as f64 / left).collect())
    }
}

impl Agent for UrnAgent {
    fn diseases(&self) -> usize {
        self.tickets.len()
    }

    fn interval(&self) -> OutcomeInterval {
        self.interval
    }

    fn horizon(&self) -> Option<usize> {
        Some(self.tickets.iter().sum::<u32>() as usize - 1)
    }

    fn value(&self, act: &Act, evidence: &Evidence) -> Result<f64> {
        check_act(self.diseases(), self.interval, act)?;
        Ok(expectation(&self.predictive(evidence)?, &self.utility, act))
    }

    fn utility_inverse(&self, value: f64, _: &Evidence) -> Result<f64> {
        inverse_in(&self.utility, self.interval, value)
    }
}

/// A two-component mixture of Carnap models: a latent common cause.
///
/// Component weights are updated by the exact likelihood of the observed
/// sequence under each component.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureAgent {
    components: [CarnapModel; 2],
    weights: [f64; 2],
    utility: UtilityCurve,
    interval: OutcomeInterval,
}

impl MixtureAgent {
    /// Components must share the disease space; weights form a simplex.
    pub fn new(
        components: [CarnapModel; 2],
        weights: [f64; 2],
        utility: UtilityCurve,
        interval: OutcomeInterval,
    ) -> Result<Self> {
        if components[0].diseases() != components[1].diseases() {
            return Err(Error::Schema("mixture components over different spaces".into()));
        }
        check_simplex(&weights)?;
        Ok(Self { components, weights, utility, interval })
    }

    /// Posterior component weights after `evidence`.
    pub fn component_weights(&self, evidence: &Evidence) -> Result<[f64; 2]> {
        let l0 = self.weights[0] * self.components[0].sequence_probability(evidence.observations())?;
        let l1 = self.weights[1] * self.components[1].sequence_probability(evidence.observations())?;
        let z = l0 + l1;
        if !(z > 0.0) {
            return Err(Error::Internal("mixture evidence has zero likelihood".into()));
        }
        Ok([l0 / z, l1 / z])
    }

    /// Mixture predictive probabilities after `evidence`.
    pub fn predictive(&self, evidence: &Evidence) -> Result<Vec<f64>> {
        check_evidence(self.diseases(), self.horizon(), evidence)?;
        let w = self.component_weights(evidence)?;
        let a = self.components[0].update(evidence)?.posterior;
        let b = self.components[1].update(evidence)?.posterior;
        Ok(a.iter().zip(&b).map(|(x, y)| w[0] * x + w[1] * y).collect())
    }
}

impl Agent for MixtureAgent {
    fn diseases(&self) -> usize {
        self.components[0].diseases()
    }

    fn interval(&self) -> OutcomeInterval {
        self.interval
    }

    fn horizon(&self) -> Option<usize> {
        Some(self.components[0].horizon().min(self.components[1].horizon()))
    }

    fn value(&self, act: &Act, evidence: &Evidence) -> Result<f64> {
        check_act(self.diseases(), self.interval, act)?;
        Ok(expectation(&self.predictive(evidence)?, &self.utility, act))
    }

    fn utility_inverse(&self, value: f64, _: &Evidence) -> Result<f64> {
        inverse_in(&self.utility, self.interval, value)
    }
}

/// Rank-dependent (Choquet) expected utility over a capacity.
///
/// Answers evidence-free queries only.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoquetAgent {
    capacity: CapacityTable,
    utility: UtilityCurve,
    interval: OutcomeInterval,
}

impl ChoquetAgent {
    /// The capacity must be normalized and monotone on its listed events.
    pub fn new(capacity: CapacityTable, utility: UtilityCurve, interval: OutcomeInterval) -> Result<Self> {
        let s = capacity.space_size();
        if capacity.get(&Event::empty(s)).is_some_and(|v| v != 0.0)
            || capacity.get(&Event::full(s)).is_some_and(|v| v != 1.0)
        {
            return Err(Error::InvalidParameter("capacity must give 0 to the empty event and 1 to D".into()));
        }
        if let Some((a, b)) = capacity.monotonicity_violations().first() {
            return Err(Error::InvalidParameter(format!(
                "capacity not monotone: {:?} ⊆ {:?}",
                a.members(),
                b.members()
            )));
        }
        Ok(Self { capacity, utility, interval })
    }

    /// `W`.
    pub fn capacity(&self) -> &CapacityTable {
        &self.capacity
    }
}

impl Agent for ChoquetAgent {
    fn diseases(&self) -> usize {
        self.capacity.space_size()
    }

    fn interval(&self) -> OutcomeInterval {
        self.interval
    }

    fn value(&self, act: &Act, evidence: &Evidence) -> Result<f64> {
        if !evidence.is_empty() {
            return Err(Error::EvidenceUnsupported);
        }
        let s = self.diseases();
        check_act(s, self.interval, act)?;
        // descending outcomes, ties by disease index
        let mut order: Vec<usize> = (0..s).collect();
        order.sort_by(|&a, &b| act.get(b).total_cmp(&act.get(a)).then(a.cmp(&b)));
        let mut members = Vec::with_capacity(s);
        let mut prev = 0.0;
        let mut total = 0.0;
        for d in order {
            members.push(d);
            let w = if members.len() == s { 1.0 } else { self.capacity.value(&Event::new(s, members.iter().copied())?)? };
            total += self.utility.eval(act.get(d)) * (w - prev);
            prev = w;
        }
        Ok(total)
    }

    fn utility_inverse(&self, value: f64, evidence: &Evidence) -> Result<f64> {
        if !evidence.is_empty() {
            return Err(Error::EvidenceUnsupported);
        }
        inverse_in(&self.utility, self.interval, value)
    }
}

/// Uniform probability vector over `s` diseases.
pub fn uniform(s: usize) -> Vec<f64> {
    vec![1.0 / s as f64; s]
}
