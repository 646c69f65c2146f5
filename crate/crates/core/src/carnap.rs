//! Carnap's updating rule and its decision-theoretic checks.
//!
//! The predictive probability of disease `i` after evidence with counts
//! `n_i` (total `N`) is
//!
//! ```text
//! p_i^E = (λ p_i^0 + n_i) / (λ + N)
//! ```
//!
//! a convex combination of the prior `p^0` and the observed frequencies with
//! weights `λ/(λ+N)` and `N/(λ+N)`. `λ` acts as a hypothetical sample size.
//!
//! The checks in this module query an [`Agent`] only through certainty
//! equivalents, the way one would interrogate a decision maker: they never
//! look at an agent's internal probabilities.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::agents::Agent;
use crate::domain::{binary_act, Event, Evidence};
use crate::error::{Error, Result};
use crate::tradeoff::{is_null, probability_from_exchange, span_standard_sequence, utility_from_sequence, SequenceProbe};
use crate::utility::UtilityCurve;

/// Smallest admissible prior probability.
pub const PRIOR_FLOOR: f64 = 1e-12;
/// Tolerance for preference checks stated as equalities or strict
/// inequalities between certainty equivalents.
pub const CHECK_TOL: f64 = 1e-9;
/// Tolerance for knot-by-knot comparison of standard sequences.
pub const KNOT_TOL: f64 = 1e-8;
/// Largest spread of per-disease `λ` estimates still considered Carnap.
pub const LAMBDA_SPREAD_TOL: f64 = 1e-6;

/// Interior prior, strength `λ` and a finite horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct CarnapModel {
    prior: Vec<f64>,
    lambda: f64,
    horizon: usize,
}

impl CarnapModel {
    /// Rejects priors below [`PRIOR_FLOOR`] rather than clamping them.
    pub fn new(prior: Vec<f64>, lambda: f64, horizon: usize) -> Result<Self> {
        if prior.len() < 2 {
            return Err(Error::InvalidParameter("prior needs at least 2 diseases".into()));
        }
        if let Some((i, p)) = prior.iter().enumerate().find(|(_, &p)| !(p >= PRIOR_FLOOR && p.is_finite())) {
            return Err(Error::InvalidParameter(format!("prior[{i}] = {p} below the floor {PRIOR_FLOOR}")));
        }
        let total: f64 = prior.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("prior sums to {total}, not 1")));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda = {lambda} must be positive")));
        }
        if horizon < 3 {
            return Err(Error::InvalidParameter(format!("horizon {horizon} must be at least 3")));
        }
        Ok(Self { prior, lambda, horizon })
    }

    /// `p^0`.
    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    /// `λ`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `T`.
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// `s`.
    pub fn diseases(&self) -> usize {
        self.prior.len()
    }

    fn predictive(&self, counts: &[u32], total: usize) -> Vec<f64> {
        let denom = self.lambda + total as f64;
        self.prior.iter().zip(counts).map(|(&p, &n)| (self.lambda * p + n as f64) / denom).collect()
    }

    /// Posterior after `evidence`; `N = T` is allowed.
    pub fn update(&self, evidence: &Evidence) -> Result<PosteriorReport> {
        if evidence.space_size() != self.diseases() {
            return Err(Error::Schema(format!(
                "evidence over {} diseases, model has {}",
                evidence.space_size(),
                self.diseases()
            )));
        }
        let n = evidence.total();
        if n > self.horizon {
            return Err(Error::HorizonExceeded { needed: n, horizon: self.horizon });
        }
        let denom = self.lambda + n as f64;
        Ok(PosteriorReport {
            posterior: self.predictive(evidence.counts(), n),
            counts: evidence.counts().to_vec(),
            total: n,
            prior_weight: self.lambda / denom,
            data_weight: n as f64 / denom,
        })
    }

    /// The model whose prior is the posterior after `evidence`, with
    /// `λ' = λ + N` and the same horizon.
    pub fn absorb(&self, evidence: &Evidence) -> Result<Self> {
        let report = self.update(evidence)?;
        Ok(Self { prior: report.posterior, lambda: self.lambda + report.total as f64, horizon: self.horizon })
    }

    /// Chain-rule probability of observing `sequence` in order.
    pub fn sequence_probability(&self, sequence: &[usize]) -> Result<f64> {
        if sequence.len() > self.horizon {
            return Err(Error::HorizonExceeded { needed: sequence.len(), horizon: self.horizon });
        }
        let mut counts = vec![0u32; self.diseases()];
        let mut prob = 1.0;
        for (t, &d) in sequence.iter().enumerate() {
            let p = *self.prior.get(d).ok_or(Error::UnknownIndex { index: d, size: self.diseases() })?;
            prob *= (self.lambda * p + counts[d] as f64) / (self.lambda + t as f64);
            counts[d] += 1;
        }
        Ok(prob)
    }

    /// Weighted pooling of evidence bodies, each calibrated by its own
    /// hypothetical sample size `λ_b`:
    ///
    /// `p_i = (λ p_i^0 + Σ_b λ_b n_{b,i}/N_b) / (λ + Σ_b λ_b)`.
    pub fn combine_evidence(&self, bodies: &[(Evidence, f64)]) -> Result<PosteriorReport> {
        let s = self.diseases();
        let mut num: Vec<f64> = self.prior.iter().map(|p| self.lambda * p).collect();
        let mut weight = 0.0;
        let mut counts = vec![0u32; s];
        let mut total = 0;
        for (b, (ev, lam_b)) in bodies.iter().enumerate() {
            if ev.space_size() != s {
                return Err(Error::Schema(format!("evidence body {b} over a different space")));
            }
            if !(*lam_b >= 0.0 && lam_b.is_finite()) {
                return Err(Error::InvalidParameter(format!("weight of body {b} must be >= 0")));
            }
            for (c, n) in counts.iter_mut().zip(ev.counts()) {
                *c += n;
            }
            total += ev.total();
            if *lam_b == 0.0 {
                continue;
            }
            if ev.is_empty() {
                return Err(Error::EmptyBody(b));
            }
            let nb = ev.total() as f64;
            for (x, &n) in num.iter_mut().zip(ev.counts()) {
                *x += lam_b * n as f64 / nb;
            }
            weight += lam_b;
        }
        let denom = self.lambda + weight;
        Ok(PosteriorReport {
            posterior: num.into_iter().map(|x| x / denom).collect(),
            counts,
            total,
            prior_weight: self.lambda / denom,
            data_weight: weight / denom,
        })
    }
}

/// Result of an update.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorReport {
    /// `p^E`.
    pub posterior: Vec<f64>,
    /// Counts used.
    pub counts: Vec<u32>,
    /// `N`.
    pub total: usize,
    /// `λ / (λ + N)`.
    pub prior_weight: f64,
    /// `N / (λ + N)`.
    pub data_weight: f64,
}

/// `(α_i + n_i) / (Σα + N)`.
pub fn dirichlet_posterior_mean(alpha: &[f64], counts: &[u32]) -> Result<Vec<f64>> {
    if alpha.len() != counts.len() {
        return Err(Error::Schema("alpha and counts differ in length".into()));
    }
    if let Some(a) = alpha.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
        return Err(Error::OutOfRange { what: "dirichlet alpha", value: *a, lo: 0.0, hi: f64::INFINITY });
    }
    let denom: f64 = alpha.iter().sum::<f64>() + counts.iter().map(|&n| n as f64).sum::<f64>();
    Ok(alpha.iter().zip(counts).map(|(a, &n)| (a + n as f64) / denom).collect())
}

fn need_horizon<A: Agent + ?Sized>(agent: &A, evidence: &Evidence, extra: usize) -> Result<()> {
    match agent.horizon() {
        Some(t) if evidence.total() + extra > t => {
            Err(Error::HorizonExceeded { needed: evidence.total() + extra, horizon: t })
        }
        _ => Ok(()),
    }
}

fn bet_ce<A: Agent + ?Sized>(agent: &A, d: usize, stake: f64, evidence: &Evidence) -> Result<f64> {
    let s = agent.diseases();
    let act = binary_act(agent.interval(), &Event::singleton(s, d)?, stake)?;
    agent.certainty_equivalent(&act, evidence)
}

/// Outcome of a positive-relatedness probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelatednessCheck {
    /// CE of `(d_i:stake)` under `E`.
    pub before: f64,
    /// CE of `(d_i:stake)` under `(E, d_i)`.
    pub after: f64,
    /// `after - before > CHECK_TOL`.
    pub pass: bool,
}

/// Does one more observation of `disease` make betting on it strictly more
/// attractive?
pub fn check_positive_relatedness<A: Agent + ?Sized>(
    agent: &A,
    evidence: &Evidence,
    disease: usize,
    stake: f64,
) -> Result<RelatednessCheck> {
    need_horizon(agent, evidence, 1)?;
    let before = bet_ce(agent, disease, stake, evidence)?;
    let after = bet_ce(agent, disease, stake, &evidence.appended(disease)?)?;
    Ok(RelatednessCheck { before, after, pass: after - before > CHECK_TOL })
}

/// Outcome of an exchangeability probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeabilityCheck {
    /// Sure amount matching "first `d_i`, then `d_j`".
    pub y: f64,
    /// Sure amount matching "first `d_j`, then `d_i`".
    pub y_prime: f64,
    /// `|y - y'| <= CHECK_TOL`.
    pub pass: bool,
}

/// Compares the two orders of observing `d_i` and `d_j`.
///
/// `x` solves `(d_j:stake) ∼^(E,d_i) x` and `y` solves `(d_i:x) ∼^E y`;
/// `y'` is the same construction with the roles swapped.
pub fn check_exchangeability<A: Agent + ?Sized>(
    agent: &A,
    evidence: &Evidence,
    i: usize,
    j: usize,
    stake: f64,
) -> Result<ExchangeabilityCheck> {
    need_horizon(agent, evidence, 2)?;
    let two_step = |first: usize, second: usize| -> Result<f64> {
        let x = bet_ce(agent, second, stake, &evidence.appended(first)?)?;
        bet_ce(agent, first, x, evidence)
    };
    let y = two_step(i, j)?;
    let y_prime = if i == j { y } else { two_step(j, i)? };
    Ok(ExchangeabilityCheck { y, y_prime, pass: (y - y_prime).abs() <= CHECK_TOL })
}

/// Outcome of a disjoint-causality probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CausalityCheck {
    /// CE of `(d_i:stake)` under `(E, d_j)`.
    pub x: f64,
    /// CE of `(d_i:stake)` under `(E, d_k)`.
    pub x_prime: f64,
    /// `|x - x'| <= CHECK_TOL`.
    pub pass: bool,
}

/// Does it matter for `d_i` which other disease was observed?
pub fn check_disjoint_causality<A: Agent + ?Sized>(
    agent: &A,
    evidence: &Evidence,
    (i, j, k): (usize, usize, usize),
    stake: f64,
) -> Result<CausalityCheck> {
    if agent.diseases() < 3 {
        return Err(Error::Inapplicable("disjoint causality is vacuous for fewer than 3 diseases"));
    }
    if i == j || j == k || i == k {
        return Err(Error::InvalidParameter(format!("triple ({i}, {j}, {k}) is not distinct")));
    }
    need_horizon(agent, evidence, 1)?;
    let x = bet_ce(agent, i, stake, &evidence.appended(j)?)?;
    let x_prime = bet_ce(agent, i, stake, &evidence.appended(k)?)?;
    Ok(CausalityCheck { x, x_prime, pass: (x - x_prime).abs() <= CHECK_TOL })
}

/// Outcome of a utility-stability probe.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityCheck {
    /// Standard sequence under the first evidence.
    pub first: Vec<f64>,
    /// Standard sequence under the second evidence, same start and lower
    /// gauge, upper gauge recalibrated on the first step.
    pub second: Vec<f64>,
    /// Largest knot difference.
    pub max_diff: f64,
    /// `max_diff <= KNOT_TOL`.
    pub pass: bool,
}

/// Checks that the tradeoff relation does not move with evidence.
///
/// A standard sequence is elicited under `e1`. Evidence changes the
/// probability of the probe event, so the same gauges would produce a
/// differently spaced sequence even with a fixed utility; the second run
/// therefore re-solves the upper gauge so that its first step reproduces
/// `α₀ → α₁`, then elicits the remaining steps under `e2`. With a stable
/// utility every later knot coincides. A probe event that is null under
/// either evidence carries no tradeoffs and is rejected.
pub fn check_utility_stability<A: Agent + ?Sized>(
    agent: &A,
    e1: &Evidence,
    e2: &Evidence,
    probe: &SequenceProbe,
) -> Result<StabilityCheck> {
    for e in [e1, e2] {
        if is_null(agent, &probe.event, e)? || is_null(agent, &probe.event.complement(), e)? {
            return Err(Error::NullEvent);
        }
    }
    let first = match probe.elicit(agent, e1) {
        Ok(seq) => seq.points,
        Err(Error::Truncated { achieved }) if achieved.len() >= 3 => achieved,
        Err(e) => return Err(e),
    };
    if first.len() < 3 {
        return Err(Error::Inconsistent("stability probe needs at least two steps".into()));
    }
    let recalibrated = probe.recalibrated(agent, e2, first[1])?;
    let steps = first.len() - 1;
    let second = match (SequenceProbe { steps, ..recalibrated }).elicit(agent, e2) {
        Ok(seq) => seq.points,
        Err(Error::Truncated { achieved }) => achieved,
        Err(e) => return Err(e),
    };
    let mut max_diff = first.iter().zip(&second).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if second.len() < first.len() {
        max_diff = f64::INFINITY;
    }
    Ok(StabilityCheck { first, second, max_diff, pass: max_diff <= KNOT_TOL })
}

/// Settings for [`identify`].
#[derive(Debug, Clone, PartialEq)]
pub struct IdentifyOptions {
    /// Standard-sequence length used to elicit utility.
    pub steps: usize,
    /// Event the utility is elicited on (default `{d_1}`).
    pub utility_event: usize,
    /// Use this utility instead of eliciting one.
    pub utility: Option<UtilityCurve>,
}

impl Default for IdentifyOptions {
    fn default() -> Self {
        Self { steps: 16, utility_event: 0, utility: None }
    }
}

/// Recovered Carnap parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Identification {
    /// Median of the per-disease estimates.
    pub lambda: f64,
    /// `p^0` from utility exchange rates under empty evidence.
    pub prior: Vec<f64>,
    /// Spread and per-disease detail.
    pub diagnostics: IdentifyDiagnostics,
}

/// Per-disease detail of an identification.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentifyDiagnostics {
    /// `λ_i = (1 - p_i') / (p_i' - p_i^0)` for each disease.
    pub lambda_per_disease: Vec<f64>,
    /// `p_i'`: probability of `d_i` after one observation of `d_i`.
    pub after_own_observation: Vec<f64>,
    /// `max_i |λ_i - λ| / λ`.
    pub lambda_spread: f64,
    /// `Σ p_i^0`; 1 for an additive agent.
    pub prior_sum: f64,
    /// False when the spread exceeds [`LAMBDA_SPREAD_TOL`].
    pub consistent_with_carnap: bool,
    /// Utility knots used for the exchange rates.
    pub utility_knots: Vec<(f64, f64)>,
}

/// Recovers `(λ, p^0)` from an agent's conditional preferences.
///
/// Utility is elicited first with a standard sequence spanning the outcome
/// interval; prior probabilities then follow from exchange rates of utility
/// units, and `λ` from how much a single own observation moves each
/// probability.
pub fn identify<A: Agent + ?Sized>(agent: &A, options: &IdentifyOptions) -> Result<Identification> {
    let s = agent.diseases();
    if s < 3 {
        return Err(Error::Inapplicable("identification needs at least 3 diseases"));
    }
    need_horizon(agent, &Evidence::empty(s), 1)?;
    let iv = agent.interval();
    if iv.hi() <= 0.0 {
        return Err(Error::InvalidParameter("identification needs positive outcomes".into()));
    }
    let empty = Evidence::empty(s);
    let utility = match &options.utility {
        Some(u) => u.clone(),
        None => {
            let event = Event::singleton(s, options.utility_event)?;
            let seq = span_standard_sequence(agent, &event, options.steps, &empty)?;
            utility_from_sequence(&seq)?
        }
    };
    let stake = iv.hi();
    let mut prior = Vec::with_capacity(s);
    let mut after = Vec::with_capacity(s);
    let mut lambdas = Vec::with_capacity(s);
    for d in 0..s {
        let event = Event::singleton(s, d)?;
        let p0 = probability_from_exchange(agent, &utility, &event, stake, &empty)?;
        let p1 = probability_from_exchange(agent, &utility, &event, stake, &empty.appended(d)?)?;
        let shift = p1 - p0;
        if shift <= 1e-10 {
            return Err(Error::NonIdentifiable { disease: d, shift });
        }
        prior.push(p0);
        after.push(p1);
        lambdas.push((1.0 - p1) / shift);
    }
    let lambda = median(&lambdas);
    let spread = lambdas.iter().map(|l| (l - lambda).abs() / lambda).fold(0.0, f64::max);
    let prior_sum = prior.iter().sum();
    Ok(Identification {
        lambda,
        prior,
        diagnostics: IdentifyDiagnostics {
            lambda_per_disease: lambdas,
            after_own_observation: after,
            lambda_spread: spread,
            prior_sum,
            consistent_with_carnap: spread <= LAMBDA_SPREAD_TOL,
            utility_knots: utility.knots().unwrap_or_default(),
        },
    })
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::{uniform, CarnapAgent, MixtureAgent, UrnAgent};
    use crate::domain::OutcomeInterval;

    fn unit() -> OutcomeInterval {
        OutcomeInterval::new(0.0, 1.0).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn update_examples() {
        let m = CarnapModel::new(vec![0.5, 0.3, 0.2], 2.0, 10).unwrap();
        let r = m.update(&Evidence::empty(3)).unwrap();
        assert_eq!(r.posterior, m.prior());
        assert_eq!((r.prior_weight, r.data_weight), (1.0, 0.0));
        let r = m.update(&Evidence::from_counts(&[2, 1, 0])).unwrap();
        close(&r.posterior, &[0.6, 0.32, 0.08], 1e-15);
        assert_eq!((r.prior_weight, r.data_weight), (0.4, 0.6));

        let m = CarnapModel::new(uniform(3), 3.0, 10).unwrap();
        let r = m.update(&Evidence::from_indices(3, vec![0]).unwrap()).unwrap();
        close(&r.posterior, &[0.5, 0.25, 0.25], 1e-15);
    }

    #[test]
    fn model_validation() {
        assert!(CarnapModel::new(vec![0.5, 0.5], 0.0, 5).is_err());
        assert!(CarnapModel::new(vec![0.5, 0.5], 1.0, 2).is_err());
        assert!(CarnapModel::new(vec![1.0, 0.0], 1.0, 5).is_err());
        assert!(CarnapModel::new(vec![0.5, 0.4], 1.0, 5).is_err());
        let m = CarnapModel::new(vec![0.5, 0.5], 1.0, 3).unwrap();
        assert!(m.update(&Evidence::from_counts(&[2, 1])).is_ok());
        assert!(matches!(m.update(&Evidence::from_counts(&[3, 1])), Err(Error::HorizonExceeded { .. })));
        assert!(matches!(m.update(&Evidence::empty(3)), Err(Error::Schema(_))));
    }

    #[test]
    fn sequence_probability_examples() {
        let m = CarnapModel::new(uniform(3), 3.0, 10).unwrap();
        assert_eq!(m.sequence_probability(&[]).unwrap(), 1.0);
        assert!((m.sequence_probability(&[0, 0]).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        let a = m.sequence_probability(&[0, 1, 0, 2]).unwrap();
        let b = m.sequence_probability(&[2, 0, 0, 1]).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn dirichlet_examples() {
        close(&dirichlet_posterior_mean(&[1.0, 1.0, 1.0], &[2, 1, 0]).unwrap(), &[0.5, 1.0 / 3.0, 1.0 / 6.0], 1e-15);
        close(&dirichlet_posterior_mean(&[2.0, 6.0], &[0, 0]).unwrap(), &[0.25, 0.75], 1e-15);
        assert!(dirichlet_posterior_mean(&[1.0, 0.0], &[0, 0]).is_err());
    }

    #[test]
    fn combine_evidence_examples() {
        let m = CarnapModel::new(vec![0.5, 0.3, 0.2], 2.0, 10).unwrap();
        let ev = Evidence::from_counts(&[2, 1, 0]);
        let single = m.combine_evidence(&[(ev.clone(), 3.0)]).unwrap();
        close(&single.posterior, &m.update(&ev).unwrap().posterior, 1e-15);

        let none = m.combine_evidence(&[(ev.clone(), 0.0)]).unwrap();
        close(&none.posterior, m.prior(), 1e-15);

        let tiny = CarnapModel::new(uniform(3), 1e-9, 10).unwrap();
        let pooled = tiny
            .combine_evidence(&[(Evidence::from_counts(&[4, 0, 0]), 5.0), (Evidence::from_counts(&[0, 2, 0]), 5.0)])
            .unwrap();
        close(&pooled.posterior, &[0.5, 0.5, 0.0], 1e-9);

        assert_eq!(m.combine_evidence(&[(Evidence::empty(3), 1.0)]), Err(Error::EmptyBody(0)));
    }

    fn carnap(prior: Vec<f64>, lambda: f64) -> CarnapAgent {
        CarnapAgent::new(CarnapModel::new(prior, lambda, 12).unwrap(), UtilityCurve::linear(), unit())
    }

    #[test]
    fn positive_relatedness_examples() {
        let a = carnap(uniform(3), 3.0);
        let r = check_positive_relatedness(&a, &Evidence::empty(3), 0, 1.0).unwrap();
        assert!(r.pass);
        assert!((r.before - 1.0 / 3.0).abs() < 1e-15 && (r.after - 0.5).abs() < 1e-15);

        let urn = UrnAgent::new(vec![2, 2, 2], UtilityCurve::linear(), unit()).unwrap();
        let r = check_positive_relatedness(&urn, &Evidence::empty(3), 0, 1.0).unwrap();
        assert!(!r.pass);
        assert!((r.after - 0.2).abs() < 1e-15);

        let full = Evidence::from_counts(&[4, 4, 4]);
        assert!(matches!(
            check_positive_relatedness(&a, &full, 0, 1.0),
            Err(Error::HorizonExceeded { .. })
        ));
    }

    #[test]
    fn exchangeability_examples() {
        let a = carnap(uniform(3), 3.0);
        let r = check_exchangeability(&a, &Evidence::empty(3), 0, 1, 1.0).unwrap();
        assert!(r.pass);
        assert!((r.y - 1.0 / 12.0).abs() < 1e-15 && (r.y_prime - 1.0 / 12.0).abs() < 1e-15);
        let r = check_exchangeability(&a, &Evidence::empty(3), 2, 2, 1.0).unwrap();
        assert_eq!(r.y, r.y_prime);
    }

    #[test]
    fn disjoint_causality_examples() {
        let a = carnap(vec![0.2, 0.3, 0.5], 2.0);
        let ev = Evidence::from_indices(3, vec![1, 2]).unwrap();
        assert!(check_disjoint_causality(&a, &ev, (0, 1, 2), 1.0).unwrap().pass);

        let c1 = CarnapModel::new(vec![0.6, 0.3, 0.1], 2.0, 10).unwrap();
        let c2 = CarnapModel::new(vec![0.1, 0.3, 0.6], 2.0, 10).unwrap();
        let mix = MixtureAgent::new([c1.clone(), c2], [0.5, 0.5], UtilityCurve::linear(), unit()).unwrap();
        let r = check_disjoint_causality(&mix, &Evidence::empty(3), (0, 1, 2), 1.0).unwrap();
        assert!(!r.pass);
        let same = MixtureAgent::new([c1.clone(), c1], [0.5, 0.5], UtilityCurve::linear(), unit()).unwrap();
        assert!(check_disjoint_causality(&same, &Evidence::empty(3), (0, 1, 2), 1.0).unwrap().pass);

        let two = CarnapAgent::new(CarnapModel::new(vec![0.5, 0.5], 1.0, 5).unwrap(), UtilityCurve::linear(), unit());
        assert!(matches!(
            check_disjoint_causality(&two, &Evidence::empty(2), (0, 1, 0), 1.0),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn identify_hand_example() {
        let a = carnap(vec![0.5, 0.3, 0.2], 2.0);
        let id = identify(&a, &IdentifyOptions::default()).unwrap();
        assert!((id.diagnostics.after_own_observation[0] - 2.0 / 3.0).abs() < 1e-10);
        assert!((id.lambda - 2.0).abs() < 1e-8, "{}", id.lambda);
        close(&id.prior, &[0.5, 0.3, 0.2], 1e-10);
        assert!(id.diagnostics.consistent_with_carnap);
    }

    #[test]
    fn identify_rejects_urns() {
        let urn = UrnAgent::new(vec![3, 4, 5], UtilityCurve::linear(), unit()).unwrap();
        assert!(matches!(identify(&urn, &IdentifyOptions::default()), Err(Error::NonIdentifiable { .. })));
    }

    #[test]
    fn identify_with_curved_utility() {
        let iv = OutcomeInterval::new(0.0, 100.0).unwrap();
        let agent = CarnapAgent::new(
            CarnapModel::new(vec![0.25, 0.35, 0.4], 4.0, 10).unwrap(),
            UtilityCurve::sqrt(),
            iv,
        );
        let opts = IdentifyOptions { utility: Some(UtilityCurve::sqrt()), ..Default::default() };
        let id = identify(&agent, &opts).unwrap();
        assert!((id.lambda - 4.0).abs() < 1e-9);
        close(&id.prior, &[0.25, 0.35, 0.4], 1e-12);
    }
}
