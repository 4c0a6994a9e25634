//! Top-event analysis entry point and result formatting.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::cutset::mcs;
use crate::distributions::MissionTime;
use crate::error::Result;
use crate::gates::assign_probabilities;
use crate::model::FaultTree;
use crate::oracle::{enum_prob, mc_prob};
use crate::pie::pie_probability;

/// Every method here treats basic events as mutually independent.
pub const INDEPENDENCE_ASSUMPTION: &str = "valid only if all basic events are mutually independent";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Inclusion-exclusion over the minimal cut sets (coherent trees only).
    Pie,
    /// Exhaustive state enumeration.
    Enum,
    MonteCarlo {
        samples: u64,
        seed: u64,
    },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Pie => "pie",
            Method::Enum => "enum",
            Method::MonteCarlo { .. } => "mc",
        }
    }
}

/// Result of a single top-event computation. Serializes to the flat JSON
/// object emitted by `fta prob --json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub method: &'static str,
    pub time: f64,
    pub probability: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "method       {}", self.method)?;
        writeln!(f, "time         {}", self.time)?;
        writeln!(f, "probability  {}", format_probability(self.probability))?;
        if let Some(terms) = self.terms {
            writeln!(f, "terms        {terms}")?;
        }
        if let Some(samples) = self.samples {
            writeln!(f, "samples      {samples}")?;
        }
        if let Some(se) = self.std_error {
            writeln!(f, "std_error    {}", format_probability(se))?;
        }
        writeln!(f, "elapsed      {:.3?}", self.elapsed)?;
        writeln!(f, "note         {INDEPENDENCE_ASSUMPTION}")
    }
}

/// Failure probability of the top event at time `t`.
pub fn top_probability(tree: &FaultTree, t: MissionTime, method: Method) -> Result<AnalysisReport> {
    let start = Instant::now();
    let assignment = assign_probabilities(tree, t);
    let mut report = AnalysisReport {
        method: method.name(),
        time: t.hours(),
        probability: 0.0,
        terms: None,
        samples: None,
        std_error: None,
        elapsed: Duration::ZERO,
    };
    match method {
        Method::Pie => {
            let cut_sets = mcs(tree)?;
            let r = pie_probability(cut_sets.as_slice(), &assignment)?;
            report.probability = r.probability;
            report.terms = Some(r.terms);
        }
        Method::Enum => {
            report.probability = enum_prob(tree, &assignment)?;
            report.terms = Some(1u64 << tree.event_count());
        }
        Method::MonteCarlo { samples, seed } => {
            let est = mc_prob(tree, &assignment, samples, seed)?;
            report.probability = est.estimate;
            report.samples = Some(est.samples);
            report.std_error = Some(est.std_error);
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Fixed-point rendering with 12 significant digits (12 decimals for zero).
pub fn format_probability(p: f64) -> String {
    const DIGITS: i32 = 12;
    if p == 0.0 || !p.is_finite() {
        return format!("{:.*}", DIGITS as usize, p);
    }
    let magnitude = p.abs().log10().floor() as i32;
    let decimals = (DIGITS - 1 - magnitude).max(0) as usize;
    format!("{p:.decimals$}")
}
