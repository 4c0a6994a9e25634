//! Exact union probability of cut sets by inclusion-exclusion.
//!
//! Every non-empty subset of the cut-set list contributes the probability of
//! the intersection of its members, signed `(-1)^(|subset| + 1)`. Basic events
//! are assumed mutually independent, so the intersection probability is the
//! product over the distinct events of the merged subset. Nothing checks
//! that assumption at run time.

use std::collections::{BTreeMap, BTreeSet};

use crate::cutset::{BitSet, CutSet};
use crate::error::{Error, Result};
use crate::gates::ProbAssignment;
use crate::model::EventId;
use crate::sum::CompensatedSum;

/// Default cap on the number of cut sets (2^25 - 1 terms).
pub const DEFAULT_MAX_CUT_SETS: usize = 25;

/// Allowed drift of the raw signed sum outside [0, 1] before clamping.
pub const SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PieOptions {
    pub max_cut_sets: usize,
    /// Number of contiguous subset ranges summed independently, then merged in order.
    pub workers: usize,
}

impl Default for PieOptions {
    fn default() -> Self {
        Self {
            max_cut_sets: DEFAULT_MAX_CUT_SETS,
            workers: 1,
        }
    }
}

/// One signed term of the expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct PieTerm {
    /// Indices into the cut-set list, ascending.
    pub subset: Vec<usize>,
    pub sign: i8,
    pub merged_events: BTreeSet<EventId>,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PieResult {
    /// Clamped to [0, 1].
    pub probability: f64,
    /// Signed sum before clamping.
    pub raw_sum: f64,
    pub terms: u64,
}

/// `2^q - 1`, the number of non-empty subsets of `q` cut sets.
pub fn pie_term_count(q: u32) -> u64 {
    assert!((1..64).contains(&q), "term count defined for 1 <= q < 64");
    (1u64 << q) - 1
}

/// Probability that every listed cut set occurs: the product over the
/// distinct events of their union.
pub fn intersection_prob(cut_sets: &[CutSet], assignment: &ProbAssignment) -> Result<f64> {
    let merged: BTreeSet<&EventId> = cut_sets.iter().flat_map(CutSet::iter).collect();
    merged
        .into_iter()
        .map(|id| assignment.require(id.as_str()))
        .product()
}

/// Cut sets re-indexed over the events they mention.
struct Compiled {
    events: Vec<EventId>,
    probs: Vec<f64>,
    masks: Vec<BitSet>,
}

fn compile(cut_sets: &[CutSet], assignment: &ProbAssignment, limit: usize) -> Result<Compiled> {
    if cut_sets.is_empty() {
        return Err(Error::EmptyCutSets);
    }
    if cut_sets.len() > limit || cut_sets.len() >= 64 {
        return Err(Error::TooManyCutSets {
            count: cut_sets.len(),
            limit,
        });
    }
    let mut local: BTreeMap<&EventId, usize> = BTreeMap::new();
    for id in cut_sets.iter().flat_map(CutSet::iter) {
        let next = local.len();
        local.entry(id).or_insert(next);
    }
    let mut events = vec![None; local.len()];
    for (id, &i) in &local {
        events[i] = Some((*id).clone());
    }
    let events: Vec<EventId> = events.into_iter().map(Option::unwrap).collect();
    let probs = events
        .iter()
        .map(|id| assignment.require(id.as_str()))
        .collect::<Result<Vec<_>>>()?;
    let words = BitSet::words_for(events.len());
    let masks = cut_sets
        .iter()
        .map(|cs| {
            let mut m = BitSet::empty(words);
            cs.iter().for_each(|id| m.insert(local[id]));
            m
        })
        .collect();
    Ok(Compiled {
        events,
        probs,
        masks,
    })
}

impl Compiled {
    fn sum_range(&self, range: std::ops::Range<u64>) -> CompensatedSum {
        let mut sum = CompensatedSum::new();
        let mut merged = BitSet::empty(BitSet::words_for(self.events.len()));
        for subset in range {
            let value = self.merged_value(subset, &mut merged);
            let sign = sign_of(subset);
            debug_assert_eq!(sign, if subset.count_ones() % 2 == 1 { 1 } else { -1 });
            sum.add(f64::from(sign) * value);
        }
        sum
    }

    fn merged_value(&self, subset: u64, merged: &mut BitSet) -> f64 {
        merged.clear();
        let mut bits = subset;
        while bits != 0 {
            merged.union_with(&self.masks[bits.trailing_zeros() as usize]);
            bits &= bits - 1;
        }
        merged.ones().map(|i| self.probs[i]).product()
    }
}

fn sign_of(subset: u64) -> i8 {
    if subset.count_ones() % 2 == 1 {
        1
    } else {
        -1
    }
}

/// Exact probability of the union of `cut_sets` with default options.
pub fn pie_probability(cut_sets: &[CutSet], assignment: &ProbAssignment) -> Result<PieResult> {
    pie_probability_with(cut_sets, assignment, PieOptions::default())
}

/// Sums subsets in ascending bitmask order. With `workers > 1` the range is
/// split into that many contiguous chunks whose partial sums are merged in
/// chunk order, so a given worker count always yields the same bits.
pub fn pie_probability_with(
    cut_sets: &[CutSet],
    assignment: &ProbAssignment,
    options: PieOptions,
) -> Result<PieResult> {
    let compiled = compile(cut_sets, assignment, options.max_cut_sets)?;
    let q = cut_sets.len() as u32;
    let end = 1u64 << q;
    let terms = end - 1;
    let workers = (options.workers.max(1) as u64).min(terms);

    let total = if workers == 1 {
        compiled.sum_range(1..end)
    } else {
        let chunk = terms.div_ceil(workers);
        let partials: Vec<CompensatedSum> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let lo = 1 + w * chunk;
                    let hi = (lo + chunk).min(end);
                    let compiled = &compiled;
                    scope.spawn(move || compiled.sum_range(lo..hi))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("pie worker panicked"))
                .collect()
        });
        let mut total = CompensatedSum::new();
        partials.into_iter().for_each(|p| total.merge(p));
        total
    };

    let raw_sum = total.value();
    if !(-SUM_TOLERANCE..=1.0 + SUM_TOLERANCE).contains(&raw_sum) {
        return Err(Error::SumOutOfBounds(raw_sum));
    }
    Ok(PieResult {
        probability: raw_sum.clamp(0.0, 1.0),
        raw_sum,
        terms,
    })
}

/// Materializes every term, in enumeration order. Meant for inspection on
/// small inputs.
pub fn pie_terms(cut_sets: &[CutSet], assignment: &ProbAssignment) -> Result<Vec<PieTerm>> {
    let compiled = compile(cut_sets, assignment, DEFAULT_MAX_CUT_SETS)?;
    let mut merged = BitSet::empty(BitSet::words_for(compiled.events.len()));
    Ok((1..1u64 << cut_sets.len())
        .map(|subset| {
            let value = compiled.merged_value(subset, &mut merged);
            PieTerm {
                subset: (0..cut_sets.len())
                    .filter(|i| subset >> i & 1 == 1)
                    .collect(),
                sign: sign_of(subset),
                merged_events: merged.ones().map(|i| compiled.events[i].clone()).collect(),
                value,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(ids: &[&str]) -> CutSet {
        CutSet::new(ids.iter().map(|s| EventId::new(*s).unwrap())).unwrap()
    }

    fn probs(pairs: &[(&str, f64)]) -> ProbAssignment {
        let mut a = ProbAssignment::new();
        for (k, v) in pairs {
            a.insert(EventId::new(*k).unwrap(), *v).unwrap();
        }
        a
    }

    #[test]
    fn intersection_counts_shared_events_once() {
        let a = probs(&[("A", 0.5), ("B", 0.5), ("C", 0.5)]);
        assert_eq!(
            intersection_prob(&[cs(&["A", "B"]), cs(&["B", "C"])], &a).unwrap(),
            0.125
        );
        let a = probs(&[("A", 0.3), ("B", 0.5)]);
        assert_eq!(intersection_prob(&[cs(&["A"])], &a).unwrap(), 0.3);
        assert!(
            (intersection_prob(&[cs(&["A"]), cs(&["B"])], &probs(&[("A", 0.2), ("B", 0.5)]))
                .unwrap()
                - 0.1)
                .abs()
                < 1e-15
        );
        assert_eq!(
            intersection_prob(&[cs(&["Z"])], &a),
            Err(Error::MissingEvent("Z".into()))
        );
    }

    #[test]
    fn small_unions() {
        let a = probs(&[("A", 0.5), ("B", 0.5), ("C", 0.5)]);
        let r = pie_probability(&[cs(&["A"]), cs(&["B"])], &a).unwrap();
        assert_eq!(r.probability, 0.75);
        assert_eq!(r.terms, 3);
        let r = pie_probability(&[cs(&["A", "B"]), cs(&["B", "C"])], &a).unwrap();
        assert_eq!(r.probability, 0.375);
    }

    #[test]
    fn term_counts() {
        assert_eq!(pie_term_count(1), 1);
        assert_eq!(pie_term_count(2), 3);
        assert_eq!(pie_term_count(13), 8191);
    }

    #[test]
    fn terms_carry_alternating_signs() {
        let a = probs(&[("A", 0.5), ("B", 0.25), ("C", 0.1)]);
        let sets = [cs(&["A", "B"]), cs(&["B", "C"]), cs(&["C"])];
        let terms = pie_terms(&sets, &a).unwrap();
        assert_eq!(terms.len(), 7);
        for t in &terms {
            let expected = if t.subset.len() % 2 == 1 { 1 } else { -1 };
            assert_eq!(t.sign, expected);
            let subset: Vec<CutSet> = t.subset.iter().map(|&i| sets[i].clone()).collect();
            assert_eq!(t.value, intersection_prob(&subset, &a).unwrap());
            let union: BTreeSet<EventId> = subset.iter().flat_map(|c| c.iter().cloned()).collect();
            assert_eq!(t.merged_events, union);
        }
        let sum: f64 = terms.iter().map(|t| f64::from(t.sign) * t.value).sum();
        let r = pie_probability(&sets, &a).unwrap();
        assert!((sum - r.probability).abs() < 1e-15);
    }

    #[test]
    fn caps_and_errors() {
        let a = probs(&[("A", 0.5)]);
        assert_eq!(pie_probability(&[], &a), Err(Error::EmptyCutSets));
        let many: Vec<CutSet> = (0..26).map(|i| cs(&[&format!("e{i}")])).collect();
        assert_eq!(
            pie_probability(&many, &a),
            Err(Error::TooManyCutSets {
                count: 26,
                limit: 25
            })
        );
        assert_eq!(
            pie_probability(&[cs(&["A", "Q"])], &a),
            Err(Error::MissingEvent("Q".into()))
        );
    }

    #[test]
    fn worker_partitions_agree() {
        let names: Vec<String> = (0..12).map(|i| format!("e{i}")).collect();
        let mut a = ProbAssignment::new();
        for (i, n) in names.iter().enumerate() {
            a.insert(EventId::new(n).unwrap(), 0.05 + 0.07 * i as f64)
                .unwrap();
        }
        let sets: Vec<CutSet> = (0..12)
            .map(|i| cs(&[&names[i], &names[(i + 3) % 12]]))
            .collect();
        let one = pie_probability_with(
            &sets,
            &a,
            PieOptions {
                workers: 1,
                ..Default::default()
            },
        )
        .unwrap();
        for w in [2, 3, 4, 7] {
            let opts = PieOptions {
                workers: w,
                ..Default::default()
            };
            let r = pie_probability_with(&sets, &a, opts).unwrap();
            assert_eq!(r, pie_probability_with(&sets, &a, opts).unwrap());
            assert!((r.probability - one.probability).abs() <= 1e-12);
            assert_eq!(r.terms, 4095);
        }
    }

    #[test]
    fn singleton_cut_sets_reduce_to_or_gate() {
        let ps = [0.1, 0.35, 0.9, 0.02, 0.5];
        let mut a = ProbAssignment::new();
        let mut sets = Vec::new();
        for (i, p) in ps.iter().enumerate() {
            let id = EventId::new(format!("s{i}")).unwrap();
            a.insert(id.clone(), *p).unwrap();
            sets.push(CutSet::new([id]).unwrap());
        }
        let r = pie_probability(&sets, &a).unwrap();
        assert!((r.probability - crate::gates::or_prob(&ps).unwrap()).abs() <= 1e-12);
    }
}
