//! Cut-set expansion of coherent trees and reduction to minimal cut sets.
//!
//! Expansion walks the gates bottom-up: an OR gate concatenates the cut-set
//! lists of its inputs, an AND gate distributes over them. After every
//! distribution step the running product is absorbed (duplicates and
//! supersets dropped) so intermediate lists stay small on typical trees.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{EventId, FaultTree, GateKind};

/// Default cap on the number of cut sets held by any intermediate list.
pub const DEFAULT_CUT_SET_LIMIT: usize = 100_000;

/// A conjunction of basic failure events.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CutSet(BTreeSet<EventId>);

impl CutSet {
    /// Returns `None` for an empty collection.
    pub fn new(events: impl IntoIterator<Item = EventId>) -> Option<Self> {
        let set: BTreeSet<EventId> = events.into_iter().collect();
        (!set.is_empty()).then_some(Self(set))
    }

    pub fn events(&self) -> &BTreeSet<EventId> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.0.contains(id)
    }

    pub fn is_subset(&self, other: &CutSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &EventId> {
        self.0.iter()
    }
}

/// Canonical order: by size, then lexicographically on the sorted ids.
impl Ord for CutSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().cmp(other.0.iter()))
    }
}

impl PartialOrd for CutSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CutSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, id) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(id.as_str())?;
        }
        Ok(())
    }
}

/// Minimal cut sets in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct McsList(Vec<CutSet>);

impl McsList {
    pub fn as_slice(&self) -> &[CutSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CutSet> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<CutSet> {
        self.0
    }
}

impl<'a> IntoIterator for &'a McsList {
    type Item = &'a CutSet;
    type IntoIter = std::slice::Iter<'a, CutSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// One cut set per line, ids separated by single spaces.
impl fmt::Display for McsList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cs in &self.0 {
            writeln!(f, "{cs}")?;
        }
        Ok(())
    }
}

/// Drops duplicate cut sets and any cut set that contains another one.
pub fn minimize(cut_sets: Vec<CutSet>) -> McsList {
    let mut sorted = cut_sets;
    sorted.sort();
    sorted.dedup();
    let mut kept: Vec<CutSet> = Vec::with_capacity(sorted.len());
    for cs in sorted {
        // kept sets are never larger than `cs`, so only they can absorb it
        if !kept.iter().any(|k| k.is_subset(&cs)) {
            kept.push(cs);
        }
    }
    McsList(kept)
}

/// Expands a coherent tree into cut sets (not yet minimal).
pub fn cut_sets(tree: &FaultTree) -> Result<Vec<CutSet>> {
    cut_sets_with_limit(tree, DEFAULT_CUT_SET_LIMIT)
}

pub fn cut_sets_with_limit(tree: &FaultTree, limit: usize) -> Result<Vec<CutSet>> {
    if let Some(gate) = tree.first_non_coherent_gate() {
        return Err(Error::NonCoherent(gate.to_string()));
    }
    let words = BitSet::words_for(tree.event_count());
    let mut expanded: Vec<Vec<BitSet>> = Vec::with_capacity(tree.gates().len());
    let gate_pos: HashMap<&str, usize> = tree
        .gates()
        .iter()
        .enumerate()
        .map(|(i, (g, _))| (g.as_str(), i))
        .collect();

    let lookup = |id: &EventId, expanded: &[Vec<BitSet>]| -> Vec<BitSet> {
        match tree.event_index(id.as_str()) {
            Some(i) => vec![BitSet::singleton(words, i)],
            // gates come in topological order, so inputs are already expanded
            None => expanded[gate_pos[id.as_str()]].clone(),
        }
    };

    for (_, kind) in tree.gates() {
        let list = match kind {
            GateKind::Or(inputs) => {
                let mut out = Vec::new();
                for input in inputs {
                    out.extend(lookup(input, &expanded));
                    if out.len() > limit {
                        return Err(Error::CutSetExplosion { limit });
                    }
                }
                out
            }
            GateKind::And(inputs) => {
                let mut acc = vec![BitSet::empty(words)];
                for input in inputs {
                    let operand = absorb(lookup(input, &expanded));
                    if acc.len().saturating_mul(operand.len()) > limit {
                        return Err(Error::CutSetExplosion { limit });
                    }
                    let product = acc
                        .iter()
                        .flat_map(|a| operand.iter().map(move |b| a.union(b)))
                        .collect();
                    acc = absorb(product);
                }
                acc
            }
            _ => unreachable!("coherence checked above"),
        };
        expanded.push(list);
    }

    let top = lookup(tree.top(), &expanded);
    Ok(top
        .iter()
        .map(|bits| {
            CutSet::new(bits.ones().map(|i| tree.events()[i].0.clone()))
                .expect("expansion never yields an empty cut set")
        })
        .collect())
}

/// Minimal cut sets of a coherent tree.
pub fn mcs(tree: &FaultTree) -> Result<McsList> {
    Ok(minimize(cut_sets(tree)?))
}

fn absorb(mut sets: Vec<BitSet>) -> Vec<BitSet> {
    sets.sort_by(|a, b| a.count().cmp(&b.count()).then_with(|| a.0.cmp(&b.0)));
    sets.dedup();
    let mut kept: Vec<BitSet> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|k| k.is_subset(&s)) {
            kept.push(s);
        }
    }
    kept
}

/// Fixed-width bit set over event indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitSet(Vec<u64>);

impl BitSet {
    pub(crate) fn words_for(bits: usize) -> usize {
        bits.div_ceil(64).max(1)
    }

    pub(crate) fn empty(words: usize) -> Self {
        Self(vec![0; words])
    }

    pub(crate) fn singleton(words: usize, i: usize) -> Self {
        let mut s = Self::empty(words);
        s.insert(i);
        s
    }

    pub(crate) fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn union(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    pub(crate) fn union_with(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }

    pub(crate) fn clear(&mut self) {
        self.0.iter_mut().for_each(|w| *w = 0);
    }

    pub(crate) fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub(crate) fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    pub(crate) fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + tz)
            })
        })
    }
}
