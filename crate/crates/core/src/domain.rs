//! Shared domain values: disease spaces, outcome intervals, acts, events and
//! evidence.
//!
//! Diseases are opaque labels mapped to dense indices; the index order fixes
//! the layout of every probability vector and act in the crate.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A finite set of mutually exclusive diseases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiseaseSpace {
    labels: Vec<String>,
}

impl DiseaseSpace {
    /// Builds a space from distinct labels; at least two are required.
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(Error::Schema(format!(
                "a disease space needs at least 2 diseases, got {}",
                labels.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Schema(format!("duplicate disease label `{l}`")));
            }
        }
        Ok(Self { labels })
    }

    /// `d1, d2, ..., ds`.
    pub fn numbered(s: usize) -> Result<Self> {
        Self::new((1..=s).map(|i| format!("d{i}")))
    }

    /// Number of diseases.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false; spaces hold at least two diseases.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Labels in index order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Label of index `i`.
    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Dense index of a label.
    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownDisease(label.to_string()))
    }

    /// Event from member labels.
    pub fn event<S: AsRef<str>>(&self, members: &[S]) -> Result<Event> {
        let idx = members
            .iter()
            .map(|m| self.index_of(m.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Event::new(self.len(), idx)
    }

    /// Evidence from a sequence of labels.
    pub fn evidence<S: AsRef<str>>(&self, observations: &[S]) -> Result<Evidence> {
        let idx = observations
            .iter()
            .map(|m| self.index_of(m.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Evidence::from_indices(self.len(), idx)
    }

    /// Act from `(label, outcome)` pairs; every disease must be covered once.
    pub fn act<S: AsRef<str>>(&self, interval: OutcomeInterval, outcomes: &[(S, f64)]) -> Result<Act> {
        let mut values = vec![None; self.len()];
        for (label, x) in outcomes {
            let i = self.index_of(label.as_ref())?;
            if values[i].replace(*x).is_some() {
                return Err(Error::Schema(format!("outcome for `{}` given twice", label.as_ref())));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Schema(format!("no outcome for `{}`", self.labels[i]))))
            .collect::<Result<Vec<_>>>()?;
        Act::new(interval, values)
    }
}

/// Bounded, closed, nondegenerate interval of money outcomes containing zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeInterval {
    lo: f64,
    hi: f64,
}

impl Default for OutcomeInterval {
    fn default() -> Self {
        Self { lo: 0.0, hi: 100.0 }
    }
}

impl OutcomeInterval {
    /// Requires `lo <= 0 <= hi` and `lo < hi`.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi && lo <= 0.0 && 0.0 <= hi) {
            return Err(Error::InvalidParameter(format!(
                "outcome interval [{lo}, {hi}] must be finite, nondegenerate and contain 0"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// Lower end.
    pub fn lo(&self) -> f64 {
        self.lo
    }

    /// Upper end.
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Exact membership test.
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub(crate) fn check(&self, what: &'static str, x: f64) -> Result<f64> {
        if self.contains(x) {
            Ok(x)
        } else {
            Err(Error::OutOfRange { what, value: x, lo: self.lo, hi: self.hi })
        }
    }
}

/// A treatment: one outcome per disease, indexed like the disease space.
#[derive(Debug, Clone, PartialEq)]
pub struct Act {
    outcomes: Vec<f64>,
}

impl Act {
    /// Validates every outcome against the interval.
    pub fn new(interval: OutcomeInterval, outcomes: Vec<f64>) -> Result<Self> {
        for &x in &outcomes {
            interval.check("outcome", x)?;
        }
        Ok(Self { outcomes })
    }

    /// The act yielding `level` whatever the disease.
    pub fn constant(interval: OutcomeInterval, diseases: usize, level: f64) -> Result<Self> {
        interval.check("outcome", level)?;
        Ok(Self { outcomes: vec![level; diseases] })
    }

    /// Outcomes in disease-index order.
    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    /// Number of diseases the act is defined on.
    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    /// True for an act over no diseases (never produced by the constructors
    /// used elsewhere in the crate).
    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// Outcome under disease `d`.
    pub fn get(&self, d: usize) -> f64 {
        self.outcomes[d]
    }

    /// `f(d) >= g(d)` for all `d`.
    pub fn dominates(&self, other: &Act) -> bool {
        self.outcomes.len() == other.outcomes.len()
            && self.outcomes.iter().zip(&other.outcomes).all(|(a, b)| a >= b)
    }
}

/// `α_A f`: `base` with every outcome on `event` replaced by `level`.
pub fn splice(interval: OutcomeInterval, base: &Act, event: &Event, level: f64) -> Result<Act> {
    interval.check("splice level", level)?;
    if event.space_size() != base.len() {
        return Err(Error::Schema(format!(
            "event over {} diseases spliced into an act over {}",
            event.space_size(),
            base.len()
        )));
    }
    let mut outcomes = base.outcomes.clone();
    for &d in event.members() {
        outcomes[d] = level;
    }
    Ok(Act { outcomes })
}

/// `(A:x)`: `x` on the event and `0` elsewhere.
pub fn binary_act(interval: OutcomeInterval, event: &Event, x: f64) -> Result<Act> {
    let zero = Act::constant(interval, event.space_size(), 0.0)?;
    splice(interval, &zero, event, x)
}

/// A subset of the disease space, stored as sorted member indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event {
    size: usize,
    members: Vec<usize>,
}

impl Event {
    /// Members may come in any order; duplicates are merged.
    pub fn new(space_size: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&d| d >= space_size) {
            return Err(Error::UnknownIndex { index: bad, size: space_size });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { size: space_size, members })
    }

    /// The empty event.
    pub fn empty(space_size: usize) -> Self {
        Self { size: space_size, members: Vec::new() }
    }

    /// The sure event `D`.
    pub fn full(space_size: usize) -> Self {
        Self { size: space_size, members: (0..space_size).collect() }
    }

    /// `{d}`.
    pub fn singleton(space_size: usize, d: usize) -> Result<Self> {
        Self::new(space_size, [d])
    }

    /// Event from a bitmask (bit `i` set means disease `i` is a member).
    pub fn from_mask(space_size: usize, mask: u64) -> Result<Self> {
        Self::new(space_size, (0..space_size.min(64)).filter(|i| mask >> i & 1 == 1))
    }

    /// Bitmask of the members, when the space has at most 64 diseases.
    pub fn mask(&self) -> Option<u64> {
        (self.size <= 64).then(|| self.members.iter().fold(0u64, |m, &d| m | 1 << d))
    }

    /// Size of the underlying disease space.
    pub fn space_size(&self) -> usize {
        self.size
    }

    /// Sorted member indices.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Membership test.
    pub fn contains(&self, d: usize) -> bool {
        self.members.binary_search(&d).is_ok()
    }

    /// No members.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// All diseases are members.
    pub fn is_full(&self) -> bool {
        self.members.len() == self.size
    }

    /// `¬A`.
    pub fn complement(&self) -> Self {
        Self { size: self.size, members: (0..self.size).filter(|d| !self.contains(*d)).collect() }
    }

    /// `A ∪ B`.
    pub fn union(&self, other: &Event) -> Self {
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        members.sort_unstable();
        members.dedup();
        Self { size: self.size.max(other.size), members }
    }

    /// No common members.
    pub fn is_disjoint(&self, other: &Event) -> bool {
        !self.members.iter().any(|d| other.contains(*d))
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &Event) -> bool {
        self.members.iter().all(|d| other.contains(*d))
    }
}

/// An ordered sequence of observed diseases with its per-disease tallies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evidence {
    observations: Vec<usize>,
    counts: Vec<u32>,
}

impl Evidence {
    /// No observations over a space of `s` diseases.
    pub fn empty(s: usize) -> Self {
        Self { observations: Vec::new(), counts: vec![0; s] }
    }

    /// Evidence from disease indices.
    pub fn from_indices(s: usize, observations: Vec<usize>) -> Result<Self> {
        let mut counts = vec![0u32; s];
        for &d in &observations {
            *counts.get_mut(d).ok_or(Error::UnknownIndex { index: d, size: s })? += 1;
        }
        Ok(Self { observations, counts })
    }

    /// Evidence from per-disease counts, observations laid out in index order.
    pub fn from_counts(counts: &[u32]) -> Self {
        let observations = counts
            .iter()
            .enumerate()
            .flat_map(|(d, &n)| core::iter::repeat_n(d, n as usize))
            .collect();
        Self { observations, counts: counts.to_vec() }
    }

    /// Copy with one more observation appended.
    pub fn appended(&self, d: usize) -> Result<Self> {
        if d >= self.counts.len() {
            return Err(Error::UnknownIndex { index: d, size: self.counts.len() });
        }
        let mut next = self.clone();
        next.observations.push(d);
        next.counts[d] += 1;
        Ok(next)
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &Evidence) -> Result<Self> {
        if self.space_size() != other.space_size() {
            return Err(Error::Schema("evidence over different disease spaces".into()));
        }
        let mut next = self.clone();
        next.observations.extend_from_slice(&other.observations);
        for (c, o) in next.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        Ok(next)
    }

    /// Observations in order.
    pub fn observations(&self) -> &[usize] {
        &self.observations
    }

    /// `n_i` per disease.
    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// `N`.
    pub fn total(&self) -> usize {
        self.observations.len()
    }

    /// Same as [`Evidence::total`].
    pub fn len(&self) -> usize {
        self.observations.len()
    }

    /// No observations.
    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Number of diseases the evidence is tallied over.
    pub fn space_size(&self) -> usize {
        self.counts.len()
    }
}

/// An observed indifference `left ∼^E right`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndifferenceRecord {
    /// Left-hand act.
    pub left: Act,
    /// Right-hand act.
    pub right: Act,
    /// Evidence the preference is conditioned on.
    pub evidence: Evidence,
}

impl IndifferenceRecord {
    /// Both acts and the evidence must be over the same space.
    pub fn new(left: Act, right: Act, evidence: Evidence) -> Result<Self> {
        if left.len() != right.len() || left.len() != evidence.space_size() {
            return Err(Error::Schema("indifference record over mismatched spaces".into()));
        }
        Ok(Self { left, right, evidence })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit() -> OutcomeInterval {
        OutcomeInterval::new(0.0, 10.0).unwrap()
    }

    #[test]
    fn splice_examples() {
        let iv = unit();
        let f = Act::new(iv, vec![2.0, 5.0]).unwrap();
        assert_eq!(splice(iv, &f, &Event::empty(2), 7.0).unwrap(), f);
        assert_eq!(
            splice(iv, &f, &Event::full(2), 7.0).unwrap(),
            Act::constant(iv, 2, 7.0).unwrap()
        );
        let a = Event::singleton(2, 0).unwrap();
        assert_eq!(splice(iv, &f, &a, 7.0).unwrap().outcomes(), &[7.0, 5.0]);
        assert!(matches!(splice(iv, &f, &a, 11.0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn binary_act_examples() {
        let iv = unit();
        assert_eq!(binary_act(iv, &Event::empty(3), 4.0).unwrap().outcomes(), &[0.0; 3]);
        assert_eq!(binary_act(iv, &Event::full(3), 4.0).unwrap().outcomes(), &[4.0; 3]);
        let a = Event::singleton(3, 0).unwrap();
        assert_eq!(binary_act(iv, &a, 1.0).unwrap().outcomes(), &[1.0, 0.0, 0.0]);
        assert!(binary_act(iv, &a, -1.0).is_err());
    }

    #[test]
    fn interval_must_contain_zero() {
        assert!(OutcomeInterval::new(1.0, 2.0).is_err());
        assert!(OutcomeInterval::new(0.0, 0.0).is_err());
        assert!(OutcomeInterval::new(-1.0, 0.0).is_ok());
    }

    #[test]
    fn space_rejects_duplicates_and_singletons() {
        assert!(DiseaseSpace::new(["a", "a"]).is_err());
        assert!(DiseaseSpace::new(["a"]).is_err());
    }

    #[test]
    fn counts_examples() {
        let space = DiseaseSpace::numbered(3).unwrap();
        let e = space.evidence::<&str>(&[]).unwrap();
        assert_eq!(e.counts(), &[0, 0, 0]);
        assert_eq!(e.total(), 0);
        let e = space.evidence(&["d1", "d1", "d2"]).unwrap();
        assert_eq!(e.counts(), &[2, 1, 0]);
        assert_eq!(e.total(), 3);
        let p = space.evidence(&["d2", "d1", "d1"]).unwrap();
        assert_eq!(p.counts(), e.counts());
        match space.evidence(&["d1", "flu"]) {
            Err(Error::UnknownDisease(l)) => assert_eq!(l, "flu"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn act_from_labels_requires_totality() {
        let space = DiseaseSpace::numbered(2).unwrap();
        assert!(space.act(unit(), &[("d1", 1.0)]).is_err());
        let f = space.act(unit(), &[("d2", 1.0), ("d1", 3.0)]).unwrap();
        assert_eq!(f.outcomes(), &[3.0, 1.0]);
    }

    #[test]
    fn event_algebra() {
        let a = Event::new(4, [2, 0]).unwrap();
        assert_eq!(a.members(), &[0, 2]);
        assert_eq!(a.complement().members(), &[1, 3]);
        assert!(a.is_disjoint(&a.complement()));
        assert!(a.union(&a.complement()).is_full());
        assert_eq!(a.mask(), Some(0b101));
        assert_eq!(Event::from_mask(4, 0b101).unwrap(), a);
        assert!(Event::new(4, [4]).is_err());
    }

    proptest! {
        #[test]
        fn splice_overwrite_is_idempotent(
            f in prop::collection::vec(0.0f64..10.0, 4),
            mask in 0u64..16,
            a in 0.0f64..10.0,
            b in 0.0f64..10.0,
        ) {
            let iv = unit();
            let f = Act::new(iv, f).unwrap();
            let ev = Event::from_mask(4, mask).unwrap();
            let twice = splice(iv, &splice(iv, &f, &ev, a).unwrap(), &ev, b).unwrap();
            prop_assert_eq!(twice, splice(iv, &f, &ev, b).unwrap());
        }

        #[test]
        fn binary_act_is_splice_of_zero(mask in 0u64..16, x in 0.0f64..10.0) {
            let iv = unit();
            let ev = Event::from_mask(4, mask).unwrap();
            let zero = Act::constant(iv, 4, 0.0).unwrap();
            prop_assert_eq!(binary_act(iv, &ev, x).unwrap(), splice(iv, &zero, &ev, x).unwrap());
        }

        #[test]
        fn counts_ignore_order(mut obs in prop::collection::vec(0usize..5, 0..30), seed in any::<u64>()) {
            let e = Evidence::from_indices(5, obs.clone()).unwrap();
            // cheap deterministic shuffle
            let n = obs.len();
            let mut state = seed | 1;
            for i in (1..n).rev() {
                state ^= state << 13; state ^= state >> 7; state ^= state << 17;
                obs.swap(i, (state % (i as u64 + 1)) as usize);
            }
            let p = Evidence::from_indices(5, obs).unwrap();
            prop_assert_eq!(e.counts(), p.counts());
            prop_assert_eq!(e.total(), e.counts().iter().map(|&c| c as usize).sum::<usize>());
        }
    }
}
