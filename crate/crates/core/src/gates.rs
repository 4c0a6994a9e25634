//! Closed-form failure probabilities of single gates whose inputs are
//! mutually independent events.

use std::collections::BTreeMap;

use crate::distributions::MissionTime;
use crate::error::{Error, Result};
use crate::model::{EventId, FaultTree};

/// Failure probability of each basic event at a fixed mission time.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProbAssignment(BTreeMap<EventId, f64>);

impl ProbAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets one event's probability; rejects values outside [0, 1].
    pub fn insert(&mut self, id: EventId, p: f64) -> Result<()> {
        check(p)?;
        self.0.insert(id, p);
        Ok(())
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.0.get(id).copied()
    }

    pub fn require(&self, id: &str) -> Result<f64> {
        self.get(id)
            .ok_or_else(|| Error::MissingEvent(id.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EventId, f64)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Probabilities of `tree`'s basic events in event-index order.
    pub fn for_tree(&self, tree: &FaultTree) -> Result<Vec<f64>> {
        tree.events()
            .iter()
            .map(|(id, _)| self.require(id.as_str()))
            .collect()
    }

    /// Uniform assignment over every basic event of `tree`.
    pub fn uniform(tree: &FaultTree, p: f64) -> Result<Self> {
        let mut out = Self::new();
        for (id, _) in tree.events() {
            out.insert(id.clone(), p)?;
        }
        Ok(out)
    }
}

/// Evaluates every basic event's unreliability at time `t`.
pub fn assign_probabilities(tree: &FaultTree, t: MissionTime) -> ProbAssignment {
    ProbAssignment(
        tree.events()
            .iter()
            .map(|(id, model)| (id.clone(), model.unreliability(t)))
            .collect(),
    )
}

fn check(p: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(Error::OutOfRange(p))
    }
}

fn checked(ps: &[f64]) -> Result<&[f64]> {
    for &p in ps {
        check(p)?;
    }
    Ok(ps)
}

/// `∏ p_i`; the empty product is 1.
pub fn and_prob(ps: &[f64]) -> Result<f64> {
    Ok(checked(ps)?.iter().product())
}

/// `1 - ∏ (1 - p_i)`; the empty union is 0.
pub fn or_prob(ps: &[f64]) -> Result<f64> {
    Ok(1.0 - nor_prob(ps)?)
}

/// `∏ (1 - p_i)`.
pub fn nor_prob(ps: &[f64]) -> Result<f64> {
    Ok(checked(ps)?.iter().map(|p| 1.0 - p).product())
}

/// `∏ (1 - p_i over negated) · ∏ (p_j over normal)`.
pub fn nand_prob(negated: &[f64], normal: &[f64]) -> Result<f64> {
    Ok(nor_prob(negated)? * and_prob(normal)?)
}

/// Probability that exactly one of two independent events occurs.
pub fn xor_prob(a: f64, b: f64) -> Result<f64> {
    check(a)?;
    check(b)?;
    Ok((1.0 - a) * b + a * (1.0 - b))
}

pub fn not_prob(a: f64) -> Result<f64> {
    Ok(1.0 - check(a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::LifetimeModel;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-15
    }

    #[test]
    fn and_examples() {
        assert!(close(and_prob(&[0.3, 0.4]).unwrap(), 0.12));
        assert_eq!(and_prob(&[1.0, 1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(and_prob(&[0.5; 10]).unwrap(), 0.0009765625);
        assert_eq!(and_prob(&[]).unwrap(), 1.0);
    }

    #[test]
    fn or_examples() {
        assert_eq!(or_prob(&[0.5, 0.5]).unwrap(), 0.75);
        assert!(close(or_prob(&[0.1, 0.1, 0.1]).unwrap(), 0.271));
        assert_eq!(or_prob(&[0.37, 0.0]).unwrap(), 0.37);
        assert_eq!(or_prob(&[]).unwrap(), 0.0);
    }

    #[test]
    fn nor_examples() {
        assert_eq!(nor_prob(&[0.5, 0.5]).unwrap(), 0.25);
        assert_eq!(nor_prob(&[0.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn nand_examples() {
        assert!(close(nand_prob(&[0.2], &[0.5]).unwrap(), 0.4));
        assert_eq!(nand_prob(&[0.0], &[1.0]).unwrap(), 1.0);
        assert_eq!(nand_prob(&[0.5, 0.5], &[0.5]).unwrap(), 0.125);
    }

    #[test]
    fn xor_and_not_examples() {
        assert_eq!(xor_prob(0.5, 0.5).unwrap(), 0.5);
        assert!(close(xor_prob(0.3, 0.4).unwrap(), 0.46));
        assert_eq!(xor_prob(0.0, 0.42).unwrap(), 0.42);
        assert_eq!(not_prob(0.0).unwrap(), 1.0);
        assert_eq!(not_prob(1.0).unwrap(), 0.0);
        assert!(close(not_prob(0.37).unwrap(), 0.63));
    }

    #[test]
    fn out_of_range_inputs() {
        assert_eq!(and_prob(&[0.5, 1.2]), Err(Error::OutOfRange(1.2)));
        assert!(or_prob(&[-0.1]).is_err());
        assert!(nor_prob(&[f64::NAN]).is_err());
        assert!(nand_prob(&[0.5], &[2.0]).is_err());
        assert!(xor_prob(0.5, -1.0).is_err());
        assert!(not_prob(1.0001).is_err());
    }

    #[test]
    fn assignment_per_event() {
        let tree = FaultTree::builder()
            .event("A", LifetimeModel::exponential(0.001).unwrap())
            .event("B", LifetimeModel::fixed(0.5).unwrap())
            .or("T", ["A", "B"])
            .top("T")
            .build()
            .unwrap();
        let a = assign_probabilities(&tree, MissionTime::new(1000.0).unwrap());
        assert!((a.get("A").unwrap() - 0.6321205588285577).abs() < 1e-15);
        assert_eq!(a.get("B"), Some(0.5));

        let zero = assign_probabilities(&tree, MissionTime::new(0.0).unwrap());
        assert_eq!(zero.get("A"), Some(0.0));
        assert_eq!(zero.for_tree(&tree).unwrap(), vec![0.0, 0.5]);
    }

    #[test]
    fn assignment_rejects_bad_values() {
        let mut a = ProbAssignment::new();
        assert!(a.insert(EventId::new("A").unwrap(), 1.5).is_err());
        assert_eq!(a.require("A"), Err(Error::MissingEvent("A".into())));
    }

    fn probs(max: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0..=1.0f64, 0..max)
    }

    proptest! {
        #[test]
        fn or_and_nor_complement(ps in probs(8)) {
            prop_assert!((or_prob(&ps).unwrap() + nor_prob(&ps).unwrap() - 1.0).abs() <= 1e-15);
        }

        #[test]
        fn xor_identity(a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
            prop_assert!((xor_prob(a, b).unwrap() - (a + b - 2.0 * a * b)).abs() <= 1e-15);
        }

        #[test]
        fn permutation_invariant(mut ps in probs(8), seed in any::<u64>()) {
            let and0 = and_prob(&ps).unwrap();
            let or0 = or_prob(&ps).unwrap();
            // deterministic shuffle
            let n = ps.len();
            let mut s = seed;
            for i in (1..n).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ps.swap(i, (s >> 33) as usize % (i + 1));
            }
            prop_assert!((and_prob(&ps).unwrap() - and0).abs() <= 1e-15);
            prop_assert!((or_prob(&ps).unwrap() - or0).abs() <= 1e-15);
        }

        #[test]
        fn monotone_in_each_argument(ps in probs(8).prop_filter("non-empty", |v| !v.is_empty()),
                                     idx in any::<prop::sample::Index>(), bump in 0.0..=1.0f64) {
            let i = idx.index(ps.len());
            let mut raised = ps.clone();
            raised[i] = (ps[i] + (1.0 - ps[i]) * bump).min(1.0);
            prop_assert!(and_prob(&raised).unwrap() >= and_prob(&ps).unwrap());
            prop_assert!(or_prob(&raised).unwrap() >= or_prob(&ps).unwrap());
        }
    }
}
