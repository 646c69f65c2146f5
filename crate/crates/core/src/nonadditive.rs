//! Nonadditive decision weights.
//!
//! A binary act `(A:x)` with `x >= 0` is valued `W(A) U(x)` with `U(0) = 0`,
//! where `W` need not be additive. Under the two-stage model `W = w ∘ φ`, a
//! probability weighting function `w` on `[0, 1]` distorts a judged
//! probability `φ` defined on events. `w` can be fitted where probabilities
//! are known and then inverted to recover `φ = w⁻¹ ∘ W`.
//!
//! This module also carries the pieces of Dempster–Shafer theory needed to
//! contrast iterated belief-function updating with Carnap's rule.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::Event;
use crate::error::{Error, Result};
use crate::root::{bisect_increasing, Bisection};
use crate::utility::UtilityCurve;

/// Classification tolerance for additivity gaps.
pub const ADDITIVITY_TOL: f64 = 1e-12;

/// Set-function values on listed events.
///
/// Normalization and monotonicity are reported, not enforced, because
/// measured tables can violate them.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CapacityTable {
    size: usize,
    values: BTreeMap<Event, f64>,
}

impl CapacityTable {
    /// Empty table over `size` diseases.
    pub fn new(size: usize) -> Self {
        Self { size, values: BTreeMap::new() }
    }

    /// Lists every event of a space of at most 20 diseases.
    pub fn from_fn(size: usize, mut f: impl FnMut(&Event) -> f64) -> Result<Self> {
        if size > 20 {
            return Err(Error::InvalidParameter(format!("cannot enumerate 2^{size} events")));
        }
        let mut t = Self::new(size);
        for mask in 0..1u64 << size {
            let e = Event::from_mask(size, mask)?;
            let v = f(&e);
            t.values.insert(e, v);
        }
        Ok(t)
    }

    /// Number of diseases.
    pub fn space_size(&self) -> usize {
        self.size
    }

    /// Sets `W(event)`, returning the previous value.
    pub fn insert(&mut self, event: Event, value: f64) -> Option<f64> {
        self.values.insert(event, value)
    }

    /// `W(event)` if listed.
    pub fn get(&self, event: &Event) -> Option<f64> {
        self.values.get(event).copied()
    }

    /// `W(event)`; the empty and sure events default to 0 and 1.
    pub fn value(&self, event: &Event) -> Result<f64> {
        match self.get(event) {
            Some(v) => Ok(v),
            None if event.is_empty() => Ok(0.0),
            None if event.is_full() => Ok(1.0),
            None => Err(Error::MissingEntry(format!("{:?}", event.members()))),
        }
    }

    /// Listed events in order.
    pub fn iter(&self) -> impl Iterator<Item = (&Event, f64)> {
        self.values.iter().map(|(e, v)| (e, *v))
    }

    /// Number of listed events.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Nothing listed.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Listed pairs `A ⊆ B` with `W(A) > W(B)`.
    pub fn monotonicity_violations(&self) -> Vec<(Event, Event)> {
        let mut out = Vec::new();
        for (a, va) in &self.values {
            for (b, vb) in &self.values {
                if a != b && a.is_subset(b) && va > vb {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }
}

/// An observed `(A:stake) ∼ ce`.
#[derive(Debug, Clone, PartialEq)]
pub struct CeRecord {
    /// `A`.
    pub event: Event,
    /// Prize on the event (1 in the canonical form).
    pub stake: f64,
    /// Certainty equivalent.
    pub ce: f64,
}

/// `W(A) + W(¬A) ≠ 1` for a listed complementary pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplementGap {
    /// `A`.
    pub event: Event,
    /// `W(A)`.
    pub weight: f64,
    /// `W(¬A)`.
    pub complement_weight: f64,
}

impl ComplementGap {
    /// Machine-readable code.
    pub const CODE: &'static str = "NONADDITIVE";
}

/// Output of [`measure_w`].
#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    /// `W` on every recorded event, plus `W(∅) = 0` and `W(D) = 1`.
    pub table: CapacityTable,
    /// Complementary pairs whose weights do not add to one.
    pub nonadditive: Vec<ComplementGap>,
}

/// `W(A) = U(ce) / U(stake)` from each record.
pub fn measure_w(space_size: usize, records: &[CeRecord], utility: &UtilityCurve) -> Result<Measurement> {
    if utility.eval(0.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter("decision weights need U(0) = 0".into()));
    }
    let mut table = CapacityTable::new(space_size);
    for r in records {
        if r.event.space_size() != space_size {
            return Err(Error::Schema("record event over a different space".into()));
        }
        if !(r.stake > 0.0) || r.ce < 0.0 {
            return Err(Error::OutOfRange { what: "nonnegative outcome", value: r.stake.min(r.ce), lo: 0.0, hi: f64::INFINITY });
        }
        let w = utility.eval(r.ce) / utility.eval(r.stake);
        if let Some(prev) = table.get(&r.event) {
            if (prev - w).abs() > 1e-12 {
                return Err(Error::Conflict { event: format!("{:?}", r.event.members()), first: prev, second: w });
            }
        }
        table.insert(r.event.clone(), w);
    }
    for (e, v) in [(Event::empty(space_size), 0.0), (Event::full(space_size), 1.0)] {
        if table.get(&e).is_none() {
            table.insert(e, v);
        }
    }
    let mut nonadditive = Vec::new();
    for (e, w) in table.iter() {
        if e.is_empty() || e.members()[0] != 0 {
            continue;
        }
        // each complementary pair once: the side containing disease 0
        if let Some(wc) = table.get(&e.complement()) {
            if (w + wc - 1.0).abs() > 1e-9 {
                nonadditive.push(ComplementGap { event: e.clone(), weight: w, complement_weight: wc });
            }
        }
    }
    Ok(Measurement { table, nonadditive })
}

/// `W(A) U(x)`.
pub fn binary_value(table: &CapacityTable, event: &Event, x: f64, utility: &UtilityCurve) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::OutOfRange { what: "binary prize", value: x, lo: 0.0, hi: f64::INFINITY });
    }
    Ok(table.value(event)? * utility.eval(x))
}

/// A probability weighting function `w` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightingFamily {
    /// `w(p) = p`.
    Linear,
    /// `w(p) = p^γ / (p^γ + (1 − p)^γ)^(1/γ)`.
    Tk {
        /// Curvature; inverse-S below 1.
        gamma: f64,
    },
    /// `w(p) = exp(−β (−ln p)^α)`.
    Prelec {
        /// Curvature.
        alpha: f64,
        /// Elevation.
        beta: f64,
    },
}

/// Which family [`fit_w`] should fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// No parameters.
    Linear,
    /// One parameter.
    Tk,
    /// Two parameters.
    Prelec,
}

const TK_BOX: (f64, f64) = (0.28 + 1e-6, 2.0);
const PRELEC_BOX: (f64, f64) = (1e-3, 10.0);

impl WeightingFamily {
    /// Family name as used in files.
    pub fn name(&self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Tk { .. } => "tk",
            Self::Prelec { .. } => "prelec",
        }
    }

    /// Parameters in a fixed order (`γ` or `α, β`).
    pub fn params(&self) -> Vec<f64> {
        match *self {
            Self::Linear => Vec::new(),
            Self::Tk { gamma } => vec![gamma],
            Self::Prelec { alpha, beta } => vec![alpha, beta],
        }
    }

    /// Parameters where `w` is a strictly increasing bijection of `[0, 1]`.
    pub fn is_admissible(&self) -> bool {
        match *self {
            Self::Linear => true,
            Self::Tk { gamma } => gamma > 0.28 && gamma <= 2.0,
            Self::Prelec { alpha, beta } => alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite(),
        }
    }

    /// `w(p)`, with `p` clamped to `[0, 1]`.
    pub fn eval(&self, p: f64) -> f64 {
        let p = p.clamp(0.0, 1.0);
        if p == 0.0 || p == 1.0 {
            return p;
        }
        match *self {
            Self::Linear => p,
            Self::Tk { gamma } => {
                let a = libm::pow(p, gamma);
                let b = libm::pow(1.0 - p, gamma);
                a / libm::pow(a + b, 1.0 / gamma)
            }
            Self::Prelec { alpha, beta } => libm::exp(-beta * libm::pow(-libm::log(p), alpha)),
        }
    }

    /// `w⁻¹(v)` by monotone bisection; endpoints map to themselves.
    pub fn inverse(&self, v: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange { what: "decision weight", value: v, lo: 0.0, hi: 1.0 });
        }
        if v == 0.0 || v == 1.0 || matches!(self, Self::Linear) {
            return Ok(v);
        }
        // run until the bracket collapses to adjacent floats
        bisect_increasing(|p| Ok(self.eval(p) - v), 0.0, 1.0, Bisection { tol: 0.0, max_iter: 1100 })
    }
}

/// Result of [`fit_w`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightFit {
    /// Fitted family.
    pub family: WeightingFamily,
    /// `Σ (w(p) − W)²` at the fit.
    pub residual: f64,
    /// The optimum was pushed onto the admissible box.
    pub clamped: bool,
    /// Gauss–Newton iterations used.
    pub iterations: usize,
}

fn build(kind: FamilyKind, theta: &[f64]) -> WeightingFamily {
    match kind {
        FamilyKind::Linear => WeightingFamily::Linear,
        FamilyKind::Tk => WeightingFamily::Tk { gamma: theta[0] },
        FamilyKind::Prelec => WeightingFamily::Prelec { alpha: theta[0], beta: theta[1] },
    }
}

fn sse(kind: FamilyKind, theta: &[f64], samples: &[(f64, f64)]) -> f64 {
    let w = build(kind, theta);
    samples.iter().map(|&(p, v)| (w.eval(p) - v) * (w.eval(p) - v)).sum()
}

fn project(kind: FamilyKind, theta: &mut [f64]) -> bool {
    let (lo, hi) = match kind {
        FamilyKind::Linear => return false,
        FamilyKind::Tk => TK_BOX,
        FamilyKind::Prelec => PRELEC_BOX,
    };
    let mut hit = false;
    for t in theta.iter_mut() {
        let c = t.clamp(lo, hi);
        hit |= c != *t;
        *t = c;
    }
    hit
}

/// Least-squares fit of a weighting family to `(p, W)` samples.
///
/// A fixed coarse grid picks the starting point, then damped Gauss–Newton
/// with central-difference Jacobians runs until the parameter step drops
/// below `1e-10`. Parameters are kept inside the admissible box; an optimum
/// on its boundary is flagged as clamped.
pub fn fit_w(samples: &[(f64, f64)], kind: FamilyKind) -> Result<WeightFit> {
    let n_params = match kind {
        FamilyKind::Linear => 0,
        FamilyKind::Tk => 1,
        FamilyKind::Prelec => 2,
    };
    if samples.len() < n_params.max(1) {
        return Err(Error::InvalidParameter(format!(
            "{} samples for a {n_params}-parameter family",
            samples.len()
        )));
    }
    for &(p, _) in samples {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange { what: "sample probability", value: p, lo: 0.0, hi: 1.0 });
        }
    }
    if kind == FamilyKind::Linear {
        return Ok(WeightFit { family: WeightingFamily::Linear, residual: sse(kind, &[], samples), clamped: false, iterations: 0 });
    }

    // coarse multi-start
    let starts: Vec<Vec<f64>> = match kind {
        FamilyKind::Tk => (0..=32).map(|k| vec![TK_BOX.0 + (TK_BOX.1 - TK_BOX.0) * k as f64 / 32.0]).collect(),
        _ => {
            let axis: Vec<f64> = (0..=16).map(|k| 0.1 * libm::pow(30.0, k as f64 / 16.0)).collect();
            axis.iter().flat_map(|&a| axis.iter().map(move |&b| vec![a, b])).collect()
        }
    };
    let mut theta = starts
        .into_iter()
        .min_by(|a, b| sse(kind, a, samples).total_cmp(&sse(kind, b, samples)))
        .expect("non-empty start grid");

    let mut cost = sse(kind, &theta, samples);
    let mut damping = 1e-6;
    let mut iterations = 0;
    let mut clamped = false;
    while iterations < 500 {
        iterations += 1;
        // residuals and Jacobian
        let w = build(kind, &theta);
        let r: Vec<f64> = samples.iter().map(|&(p, v)| w.eval(p) - v).collect();
        let mut jac = vec![vec![0.0; n_params]; samples.len()];
        for k in 0..n_params {
            let h = 1e-7 * theta[k].abs().max(1.0);
            let mut up = theta.clone();
            let mut dn = theta.clone();
            up[k] += h;
            dn[k] -= h;
            let (wu, wd) = (build(kind, &up), build(kind, &dn));
            for (row, &(p, _)) in jac.iter_mut().zip(samples) {
                row[k] = (wu.eval(p) - wd.eval(p)) / (2.0 * h);
            }
        }
        let mut jtj = vec![vec![0.0; n_params]; n_params];
        let mut jtr = vec![0.0; n_params];
        for (row, ri) in jac.iter().zip(&r) {
            for a in 0..n_params {
                jtr[a] += row[a] * ri;
                for b in 0..n_params {
                    jtj[a][b] += row[a] * row[b];
                }
            }
        }
        let mut accepted = false;
        let mut step_norm = 0.0;
        while damping < 1e12 {
            let mut m = jtj.clone();
            for (a, row) in m.iter_mut().enumerate() {
                row[a] += damping * (1.0 + jtj[a][a]);
            }
            let Some(step) = solve_small(&m, &jtr) else {
                damping *= 10.0;
                continue;
            };
            let mut cand: Vec<f64> = theta.iter().zip(&step).map(|(t, s)| t - s).collect();
            let hit = project(kind, &mut cand);
            let c = sse(kind, &cand, samples);
            if c <= cost {
                step_norm = cand.iter().zip(&theta).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
                step_norm = libm::sqrt(step_norm);
                theta = cand;
                cost = c;
                clamped = hit;
                damping = (damping / 10.0).max(1e-12);
                accepted = true;
                break;
            }
            damping *= 10.0;
        }
        if !accepted || step_norm < 1e-10 {
            break;
        }
    }
    let on_edge = match kind {
        FamilyKind::Tk => theta[0] <= TK_BOX.0 || theta[0] >= TK_BOX.1,
        FamilyKind::Prelec => theta.iter().any(|&t| t <= PRELEC_BOX.0 || t >= PRELEC_BOX.1),
        FamilyKind::Linear => false,
    };
    Ok(WeightFit { family: build(kind, &theta), residual: cost, clamped: clamped || on_edge, iterations })
}

// Gaussian elimination for the 1x1 / 2x2 normal equations.
fn solve_small(m: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    match b.len() {
        1 => (m[0][0] != 0.0).then(|| vec![b[0] / m[0][0]]),
        2 => {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if det == 0.0 || !det.is_finite() {
                return None;
            }
            Some(vec![(b[0] * m[1][1] - m[0][1] * b[1]) / det, (m[0][0] * b[1] - m[1][0] * b[0]) / det])
        }
        _ => None,
    }
}

/// `φ(A) = w⁻¹(W(A))` for every listed event.
pub fn debias(table: &CapacityTable, w: &WeightingFamily) -> Result<CapacityTable> {
    let mut phi = CapacityTable::new(table.space_size());
    for (e, v) in table.iter() {
        phi.insert(e.clone(), w.inverse(v)?);
    }
    Ok(phi)
}

/// Sign class of `W(A) + W(B) − W(A ∪ B)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Additivity {
    /// Positive gap: `W(A ∪ B) < W(A) + W(B)`.
    Sub,
    /// Negative gap: `W(A ∪ B) > W(A) + W(B)`.
    Super,
    /// Zero gap within tolerance.
    Additive,
}

impl Additivity {
    /// Machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Self::Sub => "SUBADDITIVE",
            Self::Super => "SUPERADDITIVE",
            Self::Additive => "ADDITIVE",
        }
    }
}

/// Classification of one disjoint pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairFinding {
    /// `A`.
    pub a: Event,
    /// `B`.
    pub b: Event,
    /// `W(A) + W(B) − W(A ∪ B)`.
    pub gap: f64,
    /// Class of the gap.
    pub class: Additivity,
}

/// Refinement metric along one chain of partitions.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainFinding {
    /// `D(n) = Σ_j φ(A_j) − φ(∪_j A_j)` per level.
    pub d: Vec<f64>,
    /// `D` never decreases along the chain (within tolerance).
    pub nondecreasing: bool,
}

/// Output of [`additivity_report`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AdditivityReport {
    /// One finding per disjoint pair.
    pub pairs: Vec<PairFinding>,
    /// One finding per refinement chain.
    pub chains: Vec<ChainFinding>,
}

/// Classifies disjoint pairs and evaluates the refinement metric on chains
/// of successively finer partitions of a common event.
pub fn additivity_report(
    table: &CapacityTable,
    pairs: &[(Event, Event)],
    chains: &[Vec<Vec<Event>>],
) -> Result<AdditivityReport> {
    let mut report = AdditivityReport::default();
    for (a, b) in pairs {
        if !a.is_disjoint(b) {
            return Err(Error::Schema(format!("events {:?} and {:?} overlap", a.members(), b.members())));
        }
        let gap = table.value(a)? + table.value(b)? - table.value(&a.union(b))?;
        let class = if gap > ADDITIVITY_TOL {
            Additivity::Sub
        } else if gap < -ADDITIVITY_TOL {
            Additivity::Super
        } else {
            Additivity::Additive
        };
        report.pairs.push(PairFinding { a: a.clone(), b: b.clone(), gap, class });
    }
    for chain in chains {
        let mut d = Vec::with_capacity(chain.len());
        let mut union: Option<Event> = None;
        let mut prev: Option<&Vec<Event>> = None;
        for level in chain {
            let cells_disjoint = level.iter().enumerate().all(|(i, a)| level[i + 1..].iter().all(|b| a.is_disjoint(b)));
            if level.is_empty() || !cells_disjoint {
                return Err(Error::Schema("chain level is not a partition into disjoint cells".into()));
            }
            let u = level.iter().skip(1).fold(level[0].clone(), |acc, e| acc.union(e));
            match &union {
                Some(first) if first != &u => {
                    return Err(Error::Schema("chain levels partition different events".into()))
                }
                _ => union = Some(u.clone()),
            }
            if let Some(coarse) = prev {
                if !level.iter().all(|cell| coarse.iter().any(|c| cell.is_subset(c))) {
                    return Err(Error::Schema("chain level does not refine its predecessor".into()));
                }
            }
            let mut sum = 0.0;
            for cell in level {
                sum += table.value(cell)?;
            }
            d.push(sum - table.value(&u)?);
            prev = Some(level);
        }
        let nondecreasing = d.windows(2).all(|w| w[1] >= w[0] - ADDITIVITY_TOL);
        report.chains.push(ChainFinding { d, nondecreasing });
    }
    Ok(report)
}

/// Largest frame a [`MassFunction`] may use.
pub const MAX_FRAME: usize = 12;

/// Basic probability assignment over the subsets of a small frame,
/// indexed densely by bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    frame: usize,
    masses: Vec<f64>,
}

impl MassFunction {
    /// Masses given as `(mask, mass)`; repeated masks accumulate.
    pub fn new(frame: usize, entries: &[(u16, f64)]) -> Result<Self> {
        if frame == 0 || frame > MAX_FRAME {
            return Err(Error::InvalidParameter(format!("frame size {frame} outside 1..={MAX_FRAME}")));
        }
        let mut masses = vec![0.0; 1 << frame];
        for &(mask, m) in entries {
            let slot = masses
                .get_mut(mask as usize)
                .ok_or_else(|| Error::Schema(format!("subset mask {mask:#b} outside the frame")))?;
            if !(m >= 0.0 && m.is_finite()) {
                return Err(Error::InvalidParameter(format!("negative mass {m}")));
            }
            *slot += m;
        }
        Self::from_dense(frame, masses)
    }

    fn from_dense(frame: usize, masses: Vec<f64>) -> Result<Self> {
        if masses[0] != 0.0 {
            return Err(Error::InvalidParameter("the empty set must carry no mass".into()));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("masses sum to {total}, not 1")));
        }
        Ok(Self { frame, masses })
    }

    /// All mass on the whole frame.
    pub fn vacuous(frame: usize) -> Result<Self> {
        Self::new(frame, &[(Self::full_mask(frame), 1.0)])
    }

    /// `m({d}) = μ`, `m(Θ) = 1 − μ`.
    pub fn simple_support(frame: usize, d: usize, mu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) || d >= frame {
            return Err(Error::InvalidParameter(format!("simple support on {d} with mass {mu}")));
        }
        Self::new(frame, &[(1 << d, mu), (Self::full_mask(frame), 1.0 - mu)])
    }

    /// All mass on singletons.
    pub fn bayesian(probs: &[f64]) -> Result<Self> {
        let entries: Vec<(u16, f64)> = probs.iter().enumerate().map(|(d, &p)| (1u16 << d, p)).collect();
        Self::new(probs.len(), &entries)
    }

    fn full_mask(frame: usize) -> u16 {
        ((1u32 << frame) - 1) as u16
    }

    /// Frame size.
    pub fn frame(&self) -> usize {
        self.frame
    }

    /// `m(B)` for a subset mask.
    pub fn mass(&self, mask: u16) -> f64 {
        self.masses.get(mask as usize).copied().unwrap_or(0.0)
    }

    /// Subsets with positive mass.
    pub fn focal(&self) -> impl Iterator<Item = (u16, f64)> + '_ {
        self.masses.iter().enumerate().filter(|(_, m)| **m > 0.0).map(|(b, m)| (b as u16, *m))
    }

    fn event_mask(&self, event: &Event) -> Result<u16> {
        if event.space_size() != self.frame {
            return Err(Error::Schema(format!(
                "event over {} diseases, frame has {}",
                event.space_size(),
                self.frame
            )));
        }
        Ok(event.mask().expect("frames are small") as u16)
    }
}

/// `(bel(A), pl(A))`: mass inside `A` and mass meeting `A`.
pub fn bel_pl(mass: &MassFunction, event: &Event) -> Result<(f64, f64)> {
    let a = mass.event_mask(event)?;
    let mut bel = 0.0;
    let mut pl = 0.0;
    for (b, m) in mass.focal() {
        if b & !a == 0 {
            bel += m;
        }
        if b & a != 0 {
            pl += m;
        }
    }
    Ok((bel.min(1.0), pl.min(1.0)))
}

/// Dempster's rule: conflict-renormalized product of two mass functions.
pub fn dempster_combine(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    if m1.frame != m2.frame {
        return Err(Error::Schema("mass functions over different frames".into()));
    }
    let mut out = vec![0.0; m1.masses.len()];
    for (b, x) in m1.focal() {
        for (c, y) in m2.focal() {
            let meet = b & c;
            if meet != 0 {
                out[meet as usize] += x * y;
            }
        }
    }
    // normalize by the surviving mass, not 1 − K, so long chains keep unit total
    let keep: f64 = out.iter().sum();
    if keep <= 1e-12 {
        return Err(Error::TotalConflict);
    }
    for v in &mut out {
        *v /= keep;
    }
    Ok(MassFunction { frame: m1.frame, masses: out })
}

/// Quantity tracked by the degeneracy experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Measure {
    /// Belief of a singleton under iterated Dempster combination.
    Bel,
    /// Plausibility of a singleton.
    Pl,
    /// Carnap posterior.
    Carnap,
    /// Judged probability recovered by inverting the weighting function on
    /// Fig.-3-shaped decision weights.
    Phi,
}

impl Measure {
    /// Name used in CSV output.
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Bel => "bel",
            Self::Pl => "pl",
            Self::Carnap => "carnap",
            Self::Phi => "phi",
        }
    }
}

/// One trajectory sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    /// Observations absorbed so far.
    pub step: usize,
    /// Which quantity.
    pub measure: Measure,
    /// Singleton index.
    pub disease: usize,
    /// Value.
    pub value: f64,
}

/// Setup of [`degeneracy_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyConfig {
    /// Distribution of the observed singleton; its length is the frame size.
    pub q: Vec<f64>,
    /// Mass each observation puts on its singleton.
    pub mu: f64,
    /// Number of observations `T` (at most 10⁴).
    pub steps: usize,
    /// Carnap strength; the prior is uniform.
    pub lambda: f64,
    /// Weighting function producing decision weights from the posterior.
    pub weighting: WeightingFamily,
}

impl Default for DegeneracyConfig {
    fn default() -> Self {
        Self {
            q: vec![0.4, 0.3, 0.3],
            mu: 0.7,
            steps: 200,
            lambda: 1.0,
            weighting: WeightingFamily::Tk { gamma: 0.61 },
        }
    }
}

/// Trajectories of one seeded run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Samples in `(step, measure, disease)` order.
    pub rows: Vec<TrajectoryRow>,
    /// Steps where combination hit total conflict and was skipped.
    pub conflicts: Vec<usize>,
    /// Singleton beliefs after the last step.
    pub final_bel: Vec<f64>,
    /// Carnap posterior after the last step.
    pub final_carnap: Vec<f64>,
}

impl Trajectory {
    /// `max_d bel({d})` at the end.
    pub fn final_max_bel(&self) -> f64 {
        self.final_bel.iter().copied().fold(0.0, f64::max)
    }
}

/// Iterated Dempster updating on simple-support evidence next to Carnap
/// updating on the same singleton observations.
///
/// Each step draws a singleton `d ~ q`, combines the running mass function
/// with `m({d}) = μ, m(Θ) = 1 − μ`, and updates Carnap counts with `d`. The
/// `phi` trajectory runs the posterior through the weighting function and
/// back through its inverse, i.e. the corrected judgment an analyst would
/// recover from decision weights shaped like the weighting function.
pub fn degeneracy_experiment(config: &DegeneracyConfig, seed: u64) -> Result<Trajectory> {
    let s = config.q.len();
    if s < 2 || s > MAX_FRAME {
        return Err(Error::InvalidParameter(format!("frame size {s} outside 2..={MAX_FRAME}")));
    }
    if config.steps > 10_000 {
        return Err(Error::InvalidParameter(format!("T = {} exceeds 10^4", config.steps)));
    }
    let total: f64 = config.q.iter().sum();
    if config.q.iter().any(|&x| !(x >= 0.0)) || (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter("q must be a probability vector".into()));
    }
    if !config.weighting.is_admissible() {
        return Err(Error::InvalidParameter("inadmissible weighting function".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mass = MassFunction::vacuous(s)?;
    let mut counts = vec![0u32; s];
    let mut rows = Vec::with_capacity((config.steps + 1) * 4 * s);
    let mut conflicts = Vec::new();
    let prior = 1.0 / s as f64;
    let singletons: Vec<Event> = (0..s).map(|d| Event::singleton(s, d)).collect::<Result<_>>()?;

    let record = |step: usize, mass: &MassFunction, counts: &[u32], rows: &mut Vec<TrajectoryRow>| -> Result<(Vec<f64>, Vec<f64>)> {
        let n: u32 = counts.iter().sum();
        let mut bels = Vec::with_capacity(s);
        let mut post = Vec::with_capacity(s);
        for (d, ev) in singletons.iter().enumerate() {
            let (bel, pl) = bel_pl(mass, ev)?;
            let p = (config.lambda * prior + counts[d] as f64) / (config.lambda + n as f64);
            let phi = config.weighting.inverse(config.weighting.eval(p))?;
            for (measure, value) in [(Measure::Bel, bel), (Measure::Pl, pl), (Measure::Carnap, p), (Measure::Phi, phi)] {
                rows.push(TrajectoryRow { step, measure, disease: d, value });
            }
            bels.push(bel);
            post.push(p);
        }
        Ok((bels, post))
    };

    let (mut final_bel, mut final_carnap) = record(0, &mass, &counts, &mut rows)?;
    for step in 1..=config.steps {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut d = s - 1;
        for (i, &qi) in config.q.iter().enumerate() {
            acc += qi;
            if u < acc {
                d = i;
                break;
            }
        }
        counts[d] += 1;
        match dempster_combine(&mass, &MassFunction::simple_support(s, d, config.mu)?) {
            Ok(next) => mass = next,
            Err(Error::TotalConflict) => conflicts.push(step),
            Err(e) => return Err(e),
        }
        (final_bel, final_carnap) = record(step, &mass, &counts, &mut rows)?;
    }
    Ok(Trajectory { rows, conflicts, final_bel, final_carnap })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: usize, m: &[usize]) -> Event {
        Event::new(s, m.iter().copied()).unwrap()
    }

    #[test]
    fn measure_w_examples() {
        let lin = UtilityCurve::linear();
        let m = measure_w(2, &[CeRecord { event: Event::full(2), stake: 1.0, ce: 1.0 }], &lin).unwrap();
        assert_eq!(m.table.value(&Event::full(2)).unwrap(), 1.0);
        let m = measure_w(2, &[CeRecord { event: ev(2, &[0]), stake: 1.0, ce: 0.3 }], &lin).unwrap();
        assert_eq!(m.table.value(&ev(2, &[0])).unwrap(), 0.3);
        assert!(m.nonadditive.is_empty());

        let de_finetti = [
            CeRecord { event: ev(2, &[0]), stake: 1e6, ce: 300_000.0 },
            CeRecord { event: ev(2, &[1]), stake: 1e6, ce: 300_000.0 },
        ];
        let m = measure_w(2, &de_finetti, &lin).unwrap();
        assert_eq!(m.table.value(&ev(2, &[0])).unwrap(), 0.3);
        assert_eq!(m.table.value(&ev(2, &[1])).unwrap(), 0.3);
        assert_eq!(m.nonadditive.len(), 1);

        let clash = [
            CeRecord { event: ev(2, &[0]), stake: 1.0, ce: 0.3 },
            CeRecord { event: ev(2, &[0]), stake: 1.0, ce: 0.4 },
        ];
        assert!(matches!(measure_w(2, &clash, &lin), Err(Error::Conflict { .. })));
        let shifted = lin.affine(1.0, 1.0).unwrap();
        assert!(measure_w(2, &[], &shifted).is_err());
    }

    #[test]
    fn binary_value_examples() {
        let mut t = CapacityTable::new(3);
        t.insert(ev(3, &[0]), 0.4);
        let lin = UtilityCurve::linear();
        assert_eq!(binary_value(&t, &ev(3, &[0]), 0.0, &lin).unwrap(), 0.0);
        assert_eq!(binary_value(&t, &ev(3, &[0]), 10.0, &lin).unwrap(), 4.0);
        assert_eq!(binary_value(&t, &Event::full(3), 9.0, &UtilityCurve::sqrt()).unwrap(), 3.0);
        assert!(matches!(binary_value(&t, &ev(3, &[1]), 1.0, &lin), Err(Error::MissingEntry(_))));
    }

    #[test]
    fn tk_value_matches_high_precision() {
        // 40-digit evaluation: 0.42063935433575615409...
        let w = WeightingFamily::Tk { gamma: 0.61 };
        assert!((w.eval(0.5) - 0.420_639_354_335_756_2).abs() < 1e-15);
        assert!((w.eval(0.25) - 0.290_742_934_160_247_9).abs() < 1e-15);
    }

    #[test]
    fn weighting_endpoints_and_monotonicity() {
        for w in [
            WeightingFamily::Linear,
            WeightingFamily::Tk { gamma: 0.29 },
            WeightingFamily::Tk { gamma: 0.61 },
            WeightingFamily::Tk { gamma: 2.0 },
            WeightingFamily::Prelec { alpha: 0.65, beta: 1.0 },
            WeightingFamily::Prelec { alpha: 2.0, beta: 0.3 },
        ] {
            assert!(w.is_admissible());
            assert_eq!(w.eval(0.0), 0.0);
            assert_eq!(w.eval(1.0), 1.0);
            let mut prev = 0.0;
            for k in 1..=10_000 {
                let v = w.eval(k as f64 / 10_000.0);
                assert!(v > prev, "{w:?} at {k}");
                prev = v;
            }
        }
        assert!(!WeightingFamily::Tk { gamma: 0.2 }.is_admissible());
    }

    #[test]
    fn fit_examples() {
        let diag: Vec<(f64, f64)> = (0..=10).map(|k| (k as f64 / 10.0, k as f64 / 10.0)).collect();
        let lin = fit_w(&diag, FamilyKind::Linear).unwrap();
        assert_eq!(lin.residual, 0.0);
        let tk = fit_w(&diag, FamilyKind::Tk).unwrap();
        assert!((tk.family.params()[0] - 1.0).abs() < 1e-6, "{tk:?}");

        let truth = WeightingFamily::Tk { gamma: 0.61 };
        let samples: Vec<(f64, f64)> = (1..=19).map(|k| k as f64 * 0.05).map(|p| (p, truth.eval(p))).collect();
        let fit = fit_w(&samples, FamilyKind::Tk).unwrap();
        assert!((fit.family.params()[0] - 0.61).abs() < 1e-6);
        assert!(fit.residual <= 1e-12);
        assert!(!fit.clamped);

        let truth = WeightingFamily::Prelec { alpha: 0.65, beta: 1.1 };
        let samples: Vec<(f64, f64)> = (1..=19).map(|k| k as f64 * 0.05).map(|p| (p, truth.eval(p))).collect();
        let fit = fit_w(&samples, FamilyKind::Prelec).unwrap();
        let th = fit.family.params();
        assert!((th[0] - 0.65).abs() < 1e-6 && (th[1] - 1.1).abs() < 1e-6, "{fit:?}");

        assert!(fit_w(&[(1.5, 0.5)], FamilyKind::Tk).is_err());
        assert!(fit_w(&[(0.5, 0.5)], FamilyKind::Prelec).is_err());
    }

    #[test]
    fn fit_flags_clamping() {
        // a very steep inverse S needs gamma below the admissible range
        let truth = WeightingFamily::Tk { gamma: 0.2 };
        let samples: Vec<(f64, f64)> = (1..=9).map(|k| k as f64 * 0.1).map(|p| (p, truth.eval(p))).collect();
        let fit = fit_w(&samples, FamilyKind::Tk).unwrap();
        assert!(fit.clamped);
        assert!(fit.family.is_admissible());
    }

    #[test]
    fn debias_examples() {
        let mut t = CapacityTable::new(3);
        let w = WeightingFamily::Tk { gamma: 0.61 };
        t.insert(Event::empty(3), 0.0);
        t.insert(ev(3, &[0]), w.eval(0.25));
        t.insert(ev(3, &[1]), 0.37);
        t.insert(Event::full(3), 1.0);
        let lin = debias(&t, &WeightingFamily::Linear).unwrap();
        assert_eq!(lin, t);
        let phi = debias(&t, &w).unwrap();
        assert!((phi.value(&ev(3, &[0])).unwrap() - 0.25).abs() < 1e-11);
        assert_eq!(phi.value(&Event::empty(3)).unwrap(), 0.0);
        assert_eq!(phi.value(&Event::full(3)).unwrap(), 1.0);
        t.insert(ev(3, &[2]), 1.2);
        assert!(matches!(debias(&t, &w), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn additivity_examples() {
        let probs = [0.2, 0.3, 0.5];
        let additive = CapacityTable::from_fn(3, |e| e.members().iter().map(|&d| probs[d]).sum()).unwrap();
        let r = additivity_report(
            &additive,
            &[(ev(3, &[0]), ev(3, &[1])), (ev(3, &[0, 1]), ev(3, &[2]))],
            &[vec![vec![Event::full(3)], vec![ev(3, &[0, 1]), ev(3, &[2])], vec![ev(3, &[0]), ev(3, &[1]), ev(3, &[2])]]],
        )
        .unwrap();
        assert!(r.pairs.iter().all(|p| p.class == Additivity::Additive && p.gap.abs() < 1e-15));
        assert!(r.chains[0].d.iter().all(|d| d.abs() < 1e-15));

        // w ∘ P with inverse-S w at small probabilities: 2 w(0.05) − w(0.1) > 0
        let w = WeightingFamily::Tk { gamma: 0.61 };
        let small = [0.05, 0.05, 0.9];
        let t = CapacityTable::from_fn(3, |e| w.eval(e.members().iter().map(|&d| small[d]).sum())).unwrap();
        let r = additivity_report(&t, &[(ev(3, &[0]), ev(3, &[1]))], &[]).unwrap();
        assert_eq!(r.pairs[0].class, Additivity::Sub);
        // frozen from a 40-digit evaluation: 0.0769488359319674918...
        assert!((r.pairs[0].gap - 0.076_948_835_931_967_49).abs() < 1e-15);

        assert!(matches!(additivity_report(&t, &[(ev(3, &[0, 1]), ev(3, &[1]))], &[]), Err(Error::Schema(_))));
        let not_refining = vec![vec![ev(3, &[0, 1]), ev(3, &[2])], vec![ev(3, &[0, 2]), ev(3, &[1])]];
        assert!(additivity_report(&t, &[], &[not_refining]).is_err());
    }

    #[test]
    fn de_finetti_pair_is_superadditive() {
        let lin = UtilityCurve::linear();
        let m = measure_w(
            2,
            &[
                CeRecord { event: ev(2, &[0]), stake: 1e6, ce: 300_000.0 },
                CeRecord { event: ev(2, &[1]), stake: 1e6, ce: 300_000.0 },
            ],
            &lin,
        )
        .unwrap();
        let r = additivity_report(&m.table, &[(ev(2, &[0]), ev(2, &[1]))], &[]).unwrap();
        assert_eq!(r.pairs[0].class, Additivity::Super);
        assert!((r.pairs[0].gap + 0.4).abs() < 1e-12);
    }

    #[test]
    fn bel_pl_examples() {
        let vac = MassFunction::vacuous(3).unwrap();
        assert_eq!(bel_pl(&vac, &ev(3, &[0, 2])).unwrap(), (0.0, 1.0));
        let bayes = MassFunction::bayesian(&[0.2, 0.3, 0.5]).unwrap();
        let (b, p) = bel_pl(&bayes, &ev(3, &[0, 2])).unwrap();
        assert_eq!(b, p);
        assert!((b - 0.7).abs() < 1e-15);
        let ss = MassFunction::simple_support(3, 0, 0.7).unwrap();
        let (b, p) = bel_pl(&ss, &ev(3, &[0])).unwrap();
        assert!((b - 0.7).abs() < 1e-15 && (p - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dempster_examples() {
        let m1 = MassFunction::simple_support(3, 0, 0.7).unwrap();
        let m2 = MassFunction::simple_support(3, 1, 0.7).unwrap();
        let vac = MassFunction::vacuous(3).unwrap();
        assert_eq!(dempster_combine(&m1, &vac).unwrap(), m1);
        let c = dempster_combine(&m1, &m2).unwrap();
        // K = 0.49
        assert!((c.mass(0b001) - 0.411_764_705_882_352_94).abs() < 1e-15);
        assert!((c.mass(0b010) - 0.411_764_705_882_352_94).abs() < 1e-15);
        assert!((c.mass(0b111) - 0.176_470_588_235_294_12).abs() < 1e-15);

        let p = MassFunction::bayesian(&[0.2, 0.3, 0.5]).unwrap();
        let q = MassFunction::bayesian(&[0.5, 0.25, 0.25]).unwrap();
        let c = dempster_combine(&p, &q).unwrap();
        let z = 0.1 + 0.075 + 0.125;
        for (d, want) in [0.1 / z, 0.075 / z, 0.125 / z].into_iter().enumerate() {
            assert!((c.mass(1 << d) - want).abs() < 1e-15);
        }
        let a = MassFunction::bayesian(&[1.0, 0.0, 0.0]).unwrap();
        let b = MassFunction::bayesian(&[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(dempster_combine(&a, &b), Err(Error::TotalConflict));
    }

    #[test]
    fn long_combination_chains_keep_unit_mass() {
        let mut m = MassFunction::vacuous(3).unwrap();
        for k in 0..2000 {
            let e = MassFunction::simple_support(3, [0, 1, 0, 2, 1][k % 5], 0.7).unwrap();
            m = dempster_combine(&m, &e).unwrap();
            let total: f64 = m.focal().map(|(_, x)| x).sum();
            assert!((total - 1.0).abs() < 1e-12, "step {k}: {total}");
        }
    }

    #[test]
    fn degeneracy_closed_form() {
        let cfg = DegeneracyConfig { q: vec![1.0, 0.0, 0.0], steps: 10, ..Default::default() };
        let t = degeneracy_experiment(&cfg, 7).unwrap();
        assert!((t.final_bel[0] - (1.0 - libm::pow(0.3, 10.0))).abs() < 1e-12);
        assert!((t.final_carnap[0] - 31.0 / 33.0).abs() < 1e-12);

        let t0 = degeneracy_experiment(&DegeneracyConfig { steps: 0, ..Default::default() }, 1).unwrap();
        assert!(t0.final_bel.iter().all(|&b| b == 0.0));
        assert!(t0.final_carnap.iter().all(|&p| (p - 1.0 / 3.0).abs() < 1e-15));
        assert_eq!(t0.rows.len(), 12);
    }

    #[test]
    fn degeneracy_is_seeded() {
        let cfg = DegeneracyConfig::default();
        assert_eq!(degeneracy_experiment(&cfg, 3).unwrap(), degeneracy_experiment(&cfg, 3).unwrap());
        assert_ne!(degeneracy_experiment(&cfg, 3).unwrap(), degeneracy_experiment(&cfg, 4).unwrap());
    }
}
