//! Fault tree of the DFH-3 satellite solar array.
//!
//! Fourteen exponentially distributed basic events `x1`..`x14` feed five
//! sub-trees, one per failure mode of the array:
//!
//! | gate | failure mode            | inputs                           |
//! |------|-------------------------|----------------------------------|
//! | `A`  | unlock mechanism        | `x1 x2`                          |
//! | `B`  | deployment process      | `OR(x3 x4)`, `AND(x5 x6)`, `OR(x3 x7 x8)` |
//! | `C`  | locking process         | `x3 x9`                          |
//! | `D`  | orientation process     | `x10 x11`                        |
//! | `E`  | mechanical parts        | `x12 x13 OR(x3 x14)`             |
//!
//! `x3` feeds four different OR gates; minimization folds the tree into
//! twelve single-event cut sets plus `{x5, x6}`.
//!
//! [`closed_form_eval`] evaluates a symbolic closed-form expression for the
//! array's failure probability, built from the three minimal-cut-set groups
//! `OR(x1..x4)`, `AND(x5 x6)` and `OR(x7..x14)`. That expression treats the compound events
//! `x_i ∧ x5 ∧ x6` as if they were independent of each other, so it is not
//! the exact union probability; [`compare`] reports how far it lands from the
//! exact value.

use std::fmt;

use serde::Serialize;

use crate::cutset::{mcs, CutSet, McsList};
use crate::distributions::{LifetimeModel, MissionTime};
use crate::error::{Error, Result};
use crate::gates::assign_probabilities;
use crate::model::{EventId, FaultTree};
use crate::oracle::enum_prob;
use crate::pie::pie_probability;

pub const EVENT_COUNT: usize = 14;

/// Exponential failure rates of `x1`..`x14`, per hour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolarRates([f64; EVENT_COUNT]);

impl SolarRates {
    pub fn new(rates: [f64; EVENT_COUNT]) -> Result<Self> {
        for r in rates {
            if !r.is_finite() || r < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "solar failure rates must be finite and >= 0, got {r}"
                )));
            }
        }
        Ok(Self(rates))
    }

    pub fn from_slice(rates: &[f64]) -> Result<Self> {
        let arr: [f64; EVENT_COUNT] = rates.try_into().map_err(|_| {
            Error::InvalidParameter(format!(
                "expected {EVENT_COUNT} solar failure rates, got {}",
                rates.len()
            ))
        })?;
        Self::new(arr)
    }

    pub fn uniform(rate: f64) -> Result<Self> {
        Self::new([rate; EVENT_COUNT])
    }

    /// Rate of `x{i}`, 1-based.
    pub fn rate(&self, i: usize) -> f64 {
        self.0[i - 1]
    }

    pub fn as_array(&self) -> &[f64; EVENT_COUNT] {
        &self.0
    }
}

pub fn event_name(i: usize) -> String {
    format!("x{i}")
}

/// Builds the solar-array tree with `x{i}` ~ Exponential(rate `i`).
pub fn solar_tree(rates: &SolarRates) -> FaultTree {
    let mut b = FaultTree::builder();
    for i in 1..=EVENT_COUNT {
        let model = LifetimeModel::exponential(rates.rate(i)).expect("rates validated");
        b = b.event(&event_name(i), model);
    }
    b.or("A", ["x1", "x2"])
        .or("B1", ["x3", "x4"])
        .and("B2", ["x5", "x6"])
        .or("B3", ["x3", "x7", "x8"])
        .or("B", ["B1", "B2", "B3"])
        .or("C", ["x3", "x9"])
        .or("D", ["x10", "x11"])
        .or("E1", ["x3", "x14"])
        .or("E", ["x12", "x13", "E1"])
        .or("SOLAR", ["A", "B", "C", "D", "E"])
        .top("SOLAR")
        .build()
        .expect("solar tree is well formed")
}

/// The thirteen minimal cut sets of the solar tree, in canonical order.
pub fn expected_mcs() -> Vec<CutSet> {
    let single = |i: usize| CutSet::new([EventId::new(event_name(i)).unwrap()]).unwrap();
    let mut sets: Vec<CutSet> = [1, 2, 3, 4, 7, 8, 9, 10, 11, 12, 13, 14]
        .into_iter()
        .map(single)
        .collect();
    sets.push(CutSet::new([EventId::new("x5").unwrap(), EventId::new("x6").unwrap()]).unwrap());
    sets.sort();
    sets
}

fn failure(rate: f64, t: f64) -> f64 {
    -(-rate * t).exp_m1()
}

/// `1 - exp(-t * Σ rates)`: failure of an OR over independent exponentials.
fn or_exp(rates: &SolarRates, idx: &[usize], t: f64) -> f64 {
    let sum: f64 = idx.iter().map(|&i| rates.rate(i)).sum();
    failure(sum, t)
}

/// `1 - ∏_i (1 - F_i F_5 F_6)` over the listed events.
fn compound_union(rates: &SolarRates, idx: &[usize], t: f64) -> f64 {
    let f = |i: usize| failure(rates.rate(i), t);
    let f56 = f(5) * f(6);
    1.0 - idx.iter().map(|&i| 1.0 - f(i) * f56).product::<f64>()
}

/// The closed-form expression, term by term. Its
/// compound cross terms `1 - ∏(1 - F_i F_5 F_6)` multiply the three
/// failures of each sub-list, so `F_5` and `F_6` appear once per term.
pub fn closed_form_eval(rates: &SolarRates, t: MissionTime) -> f64 {
    let t = t.hours();
    let g1 = [1, 2, 3, 4];
    let g3 = [7, 8, 9, 10, 11, 12, 13, 14];
    let a = or_exp(rates, &g1, t);
    let b = failure(rates.rate(5), t) * failure(rates.rate(6), t);
    let c = or_exp(rates, &g3, t);
    let ab = compound_union(rates, &g1, t);
    let bc = compound_union(rates, &g3, t);
    a + b + c - ab - a * c - bc + ab * c
}

/// Exact and closed-form solar-array failure probabilities side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolarComparison {
    pub time: f64,
    pub pie: f64,
    #[serde(rename = "enum")]
    pub enumeration: f64,
    pub closed_form: f64,
    pub delta_pie_enum: f64,
    pub delta_closed_form_enum: f64,
    pub terms: u64,
}

impl fmt::Display for SolarComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::report::format_probability as p;
        writeln!(f, "time                    {}", self.time)?;
        writeln!(f, "pie                     {}", p(self.pie))?;
        writeln!(f, "enum                    {}", p(self.enumeration))?;
        writeln!(f, "closed_form             {}", p(self.closed_form))?;
        writeln!(f, "delta_pie_enum          {:.3e}", self.delta_pie_enum)?;
        writeln!(
            f,
            "delta_closed_form_enum  {:.3e}",
            self.delta_closed_form_enum
        )?;
        writeln!(f, "pie_terms               {}", self.terms)
    }
}

/// Runs inclusion-exclusion over the minimal cut sets, full enumeration of
/// the 2^14 states, and the closed form, all at time `t`.
pub fn compare(rates: &SolarRates, t: MissionTime) -> Result<SolarComparison> {
    let tree = solar_tree(rates);
    let assignment = assign_probabilities(&tree, t);
    let cut_sets: McsList = mcs(&tree)?;
    let pie = pie_probability(cut_sets.as_slice(), &assignment)?;
    let enumeration = enum_prob(&tree, &assignment)?;
    let closed_form = closed_form_eval(rates, t);
    Ok(SolarComparison {
        time: t.hours(),
        pie: pie.probability,
        enumeration,
        closed_form,
        delta_pie_enum: (pie.probability - enumeration).abs(),
        delta_closed_form_enum: (closed_form - enumeration).abs(),
        terms: pie.terms,
    })
}
